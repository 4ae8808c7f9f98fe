//! The qUCC driver: screen large-angle factors, expand the energy about the
//! exact reference they build, solve for the angle step, update the large
//! angles and repeat until the step vanishes.

use crate::determinants::{Hamiltonian, StateVector};
use crate::error::{Error, Result};
use crate::excitations::{
    enumerate_singles_doubles, mp2_amplitudes, select_large_factors, Excitation, UccFactor,
};
use crate::factors::FactorSequence;
use crate::integrals::IntegralStore;
use crate::quadratic::{build_model_hf, build_model_ucc_ref, QuadraticModel};
use crate::solver::{pseudo_inverse_solve, SolveReport};

/// Pseudo-inverse cutoff used when an exact reference is active.
pub const DEFAULT_REFERENCE_EPSILON: f64 = 0.1;
/// Cutoff used for the plain expansion about Hartree–Fock.
pub const DEFAULT_PLAIN_EPSILON: f64 = 1e-10;

/// How the large-angle factors are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Screening {
    /// Largest first-order MP2 amplitudes; initial angles are the amplitudes.
    #[default]
    Mp2,
    /// Largest `|b_k|` of the expansion about Hartree–Fock; initial angles
    /// come from that expansion's solution.
    Gradient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuccConfig {
    /// Number of factors treated exactly in the reference.
    pub m_large: usize,
    /// Pseudo-inverse cutoff; `None` picks [`DEFAULT_REFERENCE_EPSILON`] with
    /// an exact reference and [`DEFAULT_PLAIN_EPSILON`] without.
    pub epsilon: Option<f64>,
    pub max_iterations: usize,
    /// Convergence threshold on the largest large-angle step (radians).
    pub angle_tol: f64,
    /// Convergence threshold on the change of the total energy (Hartree).
    pub energy_tol: f64,
    pub screening: Screening,
}

impl Default for QuccConfig {
    fn default() -> Self {
        Self {
            m_large: 0,
            epsilon: None,
            max_iterations: 50,
            angle_tol: 1e-6,
            energy_tol: 1e-9,
            screening: Screening::Mp2,
        }
    }
}

impl QuccConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(eps) = self.epsilon {
            if !(eps >= 0.0 && eps.is_finite()) {
                return Err(Error::Contract(format!(
                    "epsilon must be finite and >= 0, got {eps}"
                )));
            }
        }
        if [self.angle_tol, self.energy_tol]
            .iter()
            .any(|t| t.is_nan() || *t <= 0.0)
        {
            return Err(Error::Contract(
                "convergence tolerances must be positive".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::Contract("max_iterations must be at least 1".into()));
        }
        Ok(())
    }

    pub fn effective_epsilon(&self, with_reference: bool) -> f64 {
        self.epsilon.unwrap_or(if with_reference {
            DEFAULT_REFERENCE_EPSILON
        } else {
            DEFAULT_PLAIN_EPSILON
        })
    }
}

/// A factor of the exact reference.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeFactor {
    pub pool_index: usize,
    pub excitation: Excitation,
    pub theta: f64,
}

/// One expansion-and-solve step.
#[derive(Debug, Clone, PartialEq)]
pub struct Iteration {
    /// Reference energy `<Psi0|H|Psi0>` the expansion was taken about.
    pub e_ref: f64,
    pub e_total: f64,
    /// Largest `|step|` over the large angles.
    pub max_large_step: f64,
    pub solve: SolveReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuccResult {
    pub e_hf: f64,
    /// Correlation energy of the exact reference.
    pub e0_corr: f64,
    /// Quadratic-model correction at the solved angles.
    pub e_quad: f64,
    pub e_total: f64,
    pub iterations: usize,
    pub converged: bool,
    pub epsilon: f64,
    pub pool_size: usize,
    /// Reference factors, in pool order, at the angles of the final
    /// expansion.
    pub large: Vec<LargeFactor>,
    /// Angles from the final solve, one per pool member.
    pub theta_min: Vec<f64>,
    pub trace: Vec<Iteration>,
}

impl QuccResult {
    /// Pseudo-inverse report of the final solve.
    pub fn final_solve(&self) -> &SolveReport {
        &self.trace.last().expect("at least one iteration").solve
    }
}

/// Correlation energy `<Psi0|H|Psi0> - E_HF` of the exact reference built
/// from `factors`, listed in product order (leftmost first, so the last
/// factor acts on Hartree–Fock first).
pub fn variational_reference_energy(store: &IntegralStore, factors: &[UccFactor]) -> Result<f64> {
    let ham = Hamiltonian::new(store);
    let hf = store.hf_determinant();
    let seq = FactorSequence::new(factors.iter().rev().cloned().collect());
    let psi = seq.apply(&StateVector::basis(hf), &[])?;
    Ok(ham.expectation(&psi)? - ham.diagonal(&hf))
}

fn check_finite(what: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numerical(format!("{what} is {value}")))
    }
}

fn step(model: &QuadraticModel, epsilon: f64, large: &[usize]) -> Result<Iteration> {
    let solve = pseudo_inverse_solve(&model.a, &model.b, epsilon)?;
    let e_ref = check_finite("reference energy", model.e_ref)?;
    let e_total = check_finite("total energy", e_ref + solve.e_quad)?;
    let max_large_step = large
        .iter()
        .map(|&k| solve.theta_min[k].abs())
        .fold(0.0, f64::max);
    check_finite("angle step", max_large_step)?;
    Ok(Iteration {
        e_ref,
        e_total,
        max_large_step,
        solve,
    })
}

/// Runs the full qUCC calculation.
pub fn run_qucc(store: &IntegralStore, config: &QuccConfig) -> Result<QuccResult> {
    config.validate()?;
    let pool = enumerate_singles_doubles(store);
    if pool.is_empty() {
        return Err(Error::Inconsistent("the excitation pool is empty".into()));
    }
    let ham = Hamiltonian::new(store);
    let e_hf = ham.diagonal(&store.hf_determinant());

    let (selected, initial): (Vec<usize>, Vec<f64>) = match config.screening {
        Screening::Mp2 => {
            let amps = mp2_amplitudes(store, &pool);
            let selected = select_large_factors(&amps, config.m_large);
            let initial = selected
                .iter()
                .map(|&k| if amps[k].is_finite() { amps[k] } else { 0.0 })
                .collect();
            (selected, initial)
        }
        Screening::Gradient => {
            let model = build_model_hf(store, &pool)?;
            let b: Vec<f64> = model.b.iter().copied().collect();
            let selected = select_large_factors(&b, config.m_large);
            let first = pseudo_inverse_solve(&model.a, &model.b, config.effective_epsilon(false))?;
            let initial = selected.iter().map(|&k| first.theta_min[k]).collect();
            (selected, initial)
        }
    };

    let mut order: Vec<usize> = (0..selected.len()).collect();
    order.sort_by_key(|&i| selected[i]);
    let mut large: Vec<(usize, f64)> = order.iter().map(|&i| (selected[i], initial[i])).collect();
    let large_indices: Vec<usize> = large.iter().map(|&(k, _)| k).collect();

    let with_reference = !large.is_empty();
    let epsilon = config.effective_epsilon(with_reference);
    let mut trace = Vec::new();
    let mut converged = false;

    if !with_reference {
        let model = build_model_hf(store, &pool)?;
        trace.push(step(&model, epsilon, &[])?);
        converged = true;
    } else {
        let mut previous: Option<f64> = None;
        for _ in 0..config.max_iterations {
            let model = build_model_ucc_ref(store, &pool, &large)?;
            let it = step(&model, epsilon, &large_indices)?;
            let angle_done = it.max_large_step < config.angle_tol;
            let energy_done = previous.is_some_and(|e| (it.e_total - e).abs() < config.energy_tol);
            previous = Some(it.e_total);
            let theta = it.solve.theta_min.clone();
            trace.push(it);
            if angle_done || energy_done {
                converged = true;
                break;
            }
            if trace.len() == config.max_iterations {
                break;
            }
            for (k, angle) in large.iter_mut() {
                *angle += theta[*k];
            }
        }
    }

    let last = trace.last().expect("at least one iteration");
    let e0_corr = last.e_ref - e_hf;
    let e_quad = last.solve.e_quad;
    let e_total = check_finite("total energy", e_hf + e0_corr + e_quad)?;
    let theta_min = last.solve.theta_min.iter().copied().collect();
    Ok(QuccResult {
        e_hf,
        e0_corr,
        e_quad,
        e_total,
        iterations: trace.len(),
        converged,
        epsilon,
        pool_size: pool.len(),
        large: large
            .iter()
            .map(|&(k, theta)| LargeFactor {
                pool_index: k,
                excitation: pool[k].clone(),
                theta,
            })
            .collect(),
        theta_min,
        trace,
    })
}
