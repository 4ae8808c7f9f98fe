//! Exact action of UCC factors `exp[theta (E - E+)]` on sparse states.
//!
//! For an excitation `E = a+_a a+_b ... a_j a_i` the factor has the closed
//! form `1 + sin(theta) (E - E+) + (cos(theta) - 1) (P_ex + P_deex)`, where
//! `P_ex` projects onto determinants with every virtual index filled and
//! every occupied index empty, and `P_deex` onto the opposite pattern. Each
//! determinant is therefore rotated with at most one partner.

use std::collections::BTreeMap;

use crate::determinants::{
    apply_spin_orbital_ops, Determinant, StateVector, DEFAULT_DROP_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::excitations::{Excitation, UccFactor};

/// Order of a derivative with respect to a factor's angle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DerivativeOrder {
    First,
    Second,
}

impl DerivativeOrder {
    fn value(self) -> u8 {
        match self {
            Self::First => 1,
            Self::Second => 2,
        }
    }
}

/// Which part of a factor's closed form acts on a determinant.
enum Pattern {
    /// Occupied indices filled, virtual indices empty: `E` acts.
    Reference(Determinant, f64),
    /// Virtual indices filled, occupied indices empty: `E+` acts.
    Excited(Determinant, f64),
    /// The factor acts as the identity.
    Untouched,
}

fn classify(ex: &Excitation, det: Determinant) -> Pattern {
    if let Some((partner, sign)) = apply_spin_orbital_ops(det, ex.virtuals(), ex.occupied()) {
        return Pattern::Reference(partner, sign);
    }
    if let Some((partner, sign)) = apply_spin_orbital_ops(det, ex.occupied(), ex.virtuals()) {
        return Pattern::Excited(partner, sign);
    }
    Pattern::Untouched
}

/// `d^n/dtheta^n` of the factor applied to `psi`, for `n` in `0..=2`.
fn apply_nth(ex: &Excitation, theta: f64, order: u8, psi: &StateVector) -> StateVector {
    let (s, c) = theta.sin_cos();
    // n-th derivatives of cos and sin, and of the identity part.
    let (diag, off, identity) = match order {
        0 => (c, s, 1.0),
        1 => (-s, c, 0.0),
        2 => (-c, -s, 0.0),
        _ => unreachable!("derivative order checked by callers"),
    };
    let mut out = StateVector::new();
    for (det, &amp) in psi.iter() {
        match classify(ex, *det) {
            Pattern::Reference(partner, sign) => {
                out.add(*det, diag * amp);
                out.add(partner, off * sign * amp);
            }
            Pattern::Excited(partner, sign) => {
                out.add(*det, diag * amp);
                out.add(partner, -off * sign * amp);
            }
            Pattern::Untouched => {
                if identity != 0.0 {
                    out.add(*det, amp);
                }
            }
        }
    }
    out.prune(DEFAULT_DROP_TOLERANCE);
    out
}

/// Applies the factor exactly to `psi`.
pub fn apply_factor(factor: &UccFactor, psi: &StateVector) -> StateVector {
    apply_nth(&factor.excitation, factor.theta, 0, psi)
}

/// Applies the first or second angle derivative of the factor to `psi`.
pub fn apply_factor_derivative(
    factor: &UccFactor,
    psi: &StateVector,
    order: DerivativeOrder,
) -> StateVector {
    apply_nth(&factor.excitation, factor.theta, order.value(), psi)
}

/// `(E - E+) psi`: the factor's generator, equal to its first derivative at
/// zero angle.
pub fn apply_generator(excitation: &Excitation, psi: &StateVector) -> StateVector {
    apply_nth(excitation, 0.0, 1, psi)
}

/// An ordered product of UCC factors. The first factor in the list acts
/// first on the state (it is the rightmost operator in the product).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FactorSequence {
    factors: Vec<UccFactor>,
}

impl FactorSequence {
    pub fn new(factors: Vec<UccFactor>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[UccFactor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Applies every factor in order, replacing the factors at the flagged
    /// positions by their angle derivatives. The total derivative order over
    /// all flags may not exceed two; repeated positions add their orders.
    pub fn apply(
        &self,
        psi: &StateVector,
        derivatives: &[(usize, DerivativeOrder)],
    ) -> Result<StateVector> {
        let mut orders: BTreeMap<usize, u8> = BTreeMap::new();
        let mut total = 0u8;
        for &(pos, order) in derivatives {
            if pos >= self.factors.len() {
                return Err(Error::Contract(format!(
                    "derivative position {pos} outside a sequence of {} factors",
                    self.factors.len()
                )));
            }
            total += order.value();
            *orders.entry(pos).or_default() += order.value();
        }
        if total > 2 {
            return Err(Error::Contract(format!(
                "total derivative order {total} exceeds 2"
            )));
        }
        let mut state = psi.clone();
        for (pos, factor) in self.factors.iter().enumerate() {
            let order = orders.get(&pos).copied().unwrap_or(0);
            state = apply_nth(&factor.excitation, factor.theta, order, &state);
        }
        Ok(state)
    }
}

/// Applies `seq` to `psi`, substituting derivatives at the flagged positions.
pub fn apply_sequence(
    seq: &FactorSequence,
    psi: &StateVector,
    derivatives: &[(usize, DerivativeOrder)],
) -> Result<StateVector> {
    seq.apply(psi, derivatives)
}
