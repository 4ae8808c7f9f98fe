//! Second-order expansion of the factorized UCC energy in the rotation
//! angles.
//!
//! Ordering convention: over a pool of factors `U_1 ... U_N` the product is
//! written with the lowest pool index leftmost,
//! `U = U_1 U_2 ... U_N`, so the highest index acts on the reference first.
//! For two generators this yields the ordered product
//! `(s_k s_m) = s_k s_m` when `m >= k`, which is the pairing used in the
//! Hessian. With an exact reference, the small-angle factors multiply the
//! whole large-angle product from the left:
//! `|Psi> = U_small(theta_s) U_large(theta_l) |HF>`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::determinants::{apply_spin_orbital_ops, Hamiltonian, StateVector};
use crate::error::{Error, Result};
use crate::excitations::{Excitation, UccFactor};
use crate::factors::{apply_generator, DerivativeOrder, FactorSequence};
use crate::integrals::IntegralStore;

/// Reference energy, gradient and Hessian of the energy over a factor pool.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticModel {
    pub e_ref: f64,
    pub b: DVector<f64>,
    pub a: DMatrix<f64>,
    pub pool: Vec<Excitation>,
}

impl QuadraticModel {
    pub fn dim(&self) -> usize {
        self.b.len()
    }
}

/// Builds the factor sequence for `angles` (pairs of pool index and angle)
/// following the pool ordering convention: the highest pool index is
/// applied first.
pub fn product_sequence(pool: &[Excitation], angles: &[(usize, f64)]) -> Result<FactorSequence> {
    let mut sorted: Vec<(usize, f64)> = angles.to_vec();
    sorted.sort_by_key(|&(k, _)| std::cmp::Reverse(k));
    if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Contract("repeated pool index in factor list".into()));
    }
    let factors = sorted
        .into_iter()
        .map(|(k, theta)| {
            let ex = pool.get(k).ok_or_else(|| {
                Error::Contract(format!("pool index {k} outside a pool of {}", pool.len()))
            })?;
            if !theta.is_finite() {
                return Err(Error::Contract(format!(
                    "angle for pool index {k} is {theta}"
                )));
            }
            Ok(UccFactor::new(ex.clone(), theta))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorSequence::new(factors))
}

/// Exact energy `<HF| U+ H U |HF>` of the factorized product over the pool
/// with the given angles, one per pool member.
pub fn product_energy(store: &IntegralStore, pool: &[Excitation], thetas: &[f64]) -> Result<f64> {
    if thetas.len() != pool.len() {
        return Err(Error::Contract(format!(
            "{} angles for a pool of {}",
            thetas.len(),
            pool.len()
        )));
    }
    let angles: Vec<(usize, f64)> = thetas.iter().copied().enumerate().collect();
    let seq = product_sequence(pool, &angles)?;
    let psi = seq.apply(&StateVector::basis(store.hf_determinant()), &[])?;
    Hamiltonian::new(store).expectation(&psi)
}

/// Exact energy of `U_small U_large |HF>`, the ansatz expanded by
/// [`build_model_ucc_ref`]. `large` lists the pool indices of the reference
/// factors; `thetas` holds one angle per pool member.
pub fn ansatz_energy(
    store: &IntegralStore,
    pool: &[Excitation],
    large: &[usize],
    thetas: &[f64],
) -> Result<f64> {
    if thetas.len() != pool.len() {
        return Err(Error::Contract(format!(
            "{} angles for a pool of {}",
            thetas.len(),
            pool.len()
        )));
    }
    let mut is_large = vec![false; pool.len()];
    for &k in large {
        *is_large.get_mut(k).ok_or_else(|| {
            Error::Contract(format!("pool index {k} outside a pool of {}", pool.len()))
        })? = true;
    }
    let mut large_angles = Vec::new();
    let mut small_angles = Vec::new();
    for (k, &theta) in thetas.iter().enumerate() {
        if is_large[k] {
            large_angles.push((k, theta));
        } else {
            small_angles.push((k, theta));
        }
    }
    let hf = StateVector::basis(store.hf_determinant());
    let psi = product_sequence(pool, &large_angles)?.apply(&hf, &[])?;
    let psi = product_sequence(pool, &small_angles)?.apply(&psi, &[])?;
    Hamiltonian::new(store).expectation(&psi)
}

fn symmetric_from_rows(n: usize, rows: Vec<Vec<f64>>) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for (k, row) in rows.into_iter().enumerate() {
        for (offset, v) in row.into_iter().enumerate() {
            let m = k + offset;
            a[(k, m)] = v;
            a[(m, k)] = v;
        }
    }
    a
}

/// Expansion about the Hartree–Fock determinant (all angles zero). Every
/// entry is assembled from at most three Slater–Condon elements.
pub fn build_model_hf(store: &IntegralStore, pool: &[Excitation]) -> Result<QuadraticModel> {
    let ham = Hamiltonian::new(store);
    let hf = store.hf_determinant();
    let images = pool
        .iter()
        .map(|ex| {
            apply_spin_orbital_ops(hf, ex.virtuals(), ex.occupied()).ok_or_else(|| {
                Error::Contract(format!("excitation {ex} does not act on the reference"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let e_ref = ham.diagonal(&hf);
    let b = DVector::from_iterator(
        pool.len(),
        images
            .iter()
            .map(|(d, s)| 2.0 * s * ham.slater_condon(&hf, d)),
    );
    let rows: Vec<Vec<f64>> = (0..pool.len())
        .into_par_iter()
        .map(|k| {
            let (dk, sk) = images[k];
            (k..pool.len())
                .map(|m| {
                    let (dm, sm) = images[m];
                    let mut v = 2.0 * sk * sm * ham.slater_condon(&dk, &dm);
                    let mut sigma_m = StateVector::basis(dm);
                    sigma_m.scale(sm);
                    for (det, c) in apply_generator(&pool[k], &sigma_m).iter() {
                        v += 2.0 * c * ham.slater_condon(&hf, det);
                    }
                    v
                })
                .collect()
        })
        .collect();
    Ok(QuadraticModel {
        e_ref,
        b,
        a: symmetric_from_rows(pool.len(), rows),
        pool: pool.to_vec(),
    })
}

/// Expansion about an exact UCC reference built from the `large` factors
/// (pairs of pool index and current angle). Large-angle entries are exact
/// derivatives of the factorized reference product; small-angle generators
/// act to the left of the whole reference product.
pub fn build_model_ucc_ref(
    store: &IntegralStore,
    pool: &[Excitation],
    large: &[(usize, f64)],
) -> Result<QuadraticModel> {
    let ham = Hamiltonian::new(store);
    let seq = product_sequence(pool, large)?;
    // Sequence position of each pool member, if it is a large factor.
    let mut position = vec![None; pool.len()];
    let mut order: Vec<usize> = large.iter().map(|&(k, _)| k).collect();
    order.sort_by(|x, y| y.cmp(x));
    for (pos, &k) in order.iter().enumerate() {
        position[k] = Some(pos);
    }

    let hf = StateVector::basis(store.hf_determinant());
    let psi0 = seq.apply(&hf, &[])?;
    let e_ref = ham.expectation(&psi0)?;
    let h_psi0 = ham.apply(&psi0);

    let first: Vec<StateVector> = (0..pool.len())
        .into_par_iter()
        .map(|k| match position[k] {
            Some(pos) => seq.apply(&hf, &[(pos, DerivativeOrder::First)]),
            None => Ok(apply_generator(&pool[k], &psi0)),
        })
        .collect::<Result<Vec<_>>>()?;
    let h_first: Vec<StateVector> = first.par_iter().map(|d| ham.apply(d)).collect();
    let b = DVector::from_iterator(pool.len(), first.iter().map(|d| 2.0 * h_psi0.dot(d)));

    let rows: Vec<Vec<f64>> = (0..pool.len())
        .into_par_iter()
        .map(|k| {
            (k..pool.len())
                .map(|m| {
                    let second = match (position[k], position[m]) {
                        (Some(pk), Some(pm)) => seq.apply(
                            &hf,
                            &[(pk, DerivativeOrder::First), (pm, DerivativeOrder::First)],
                        )?,
                        (None, _) => apply_generator(&pool[k], &first[m]),
                        (Some(_), None) => apply_generator(&pool[m], &first[k]),
                    };
                    Ok(2.0 * h_first[k].dot(&first[m]) + 2.0 * h_psi0.dot(&second))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadraticModel {
        e_ref,
        b,
        a: symmetric_from_rows(pool.len(), rows),
        pool: pool.to_vec(),
    })
}
