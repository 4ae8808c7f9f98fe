use qucc_core::{FciResult, QuccResult};
use serde::Serialize;

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Debug, Serialize)]
pub struct LargeFactorRecord {
    pub pool_index: usize,
    pub excitation: String,
    pub theta: f64,
}

#[derive(Debug, Serialize)]
pub struct IterationRecord {
    pub e_ref: f64,
    pub e_total: f64,
    pub e_quad: f64,
    pub max_large_step: f64,
    pub n_discarded: usize,
}

#[derive(Debug, Serialize)]
pub struct EigenRecord {
    pub value: f64,
    pub retained: bool,
}

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub e_hf: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_fci: Option<f64>,
    pub e0_corr: f64,
    pub e_quad: f64,
    pub e_total: f64,
    pub m_large: usize,
    pub epsilon: f64,
    pub iterations: usize,
    pub converged: bool,
    pub pool_size: usize,
    pub large: Vec<LargeFactorRecord>,
    pub theta_min: Vec<f64>,
    pub n_discarded: usize,
    pub eigen_spectrum: Vec<EigenRecord>,
    pub trace: Vec<IterationRecord>,
}

impl RunRecord {
    pub fn new(result: &QuccResult, e_fci: Option<f64>) -> Self {
        let solve = result.final_solve();
        Self {
            e_hf: round12(result.e_hf),
            e_fci: e_fci.map(round12),
            e0_corr: round12(result.e0_corr),
            e_quad: round12(result.e_quad),
            e_total: round12(result.e_total),
            m_large: result.large.len(),
            epsilon: round12(result.epsilon),
            iterations: result.iterations,
            converged: result.converged,
            pool_size: result.pool_size,
            large: result
                .large
                .iter()
                .map(|f| LargeFactorRecord {
                    pool_index: f.pool_index,
                    excitation: f.excitation.to_string(),
                    theta: round12(f.theta),
                })
                .collect(),
            theta_min: result.theta_min.iter().copied().map(round12).collect(),
            n_discarded: solve.n_discarded,
            eigen_spectrum: solve
                .eigen_spectrum
                .iter()
                .map(|s| EigenRecord {
                    value: round12(s.value),
                    retained: s.retained,
                })
                .collect(),
            trace: result
                .trace
                .iter()
                .map(|it| IterationRecord {
                    e_ref: round12(it.e_ref),
                    e_total: round12(it.e_total),
                    e_quad: round12(it.solve.e_quad),
                    max_large_step: round12(it.max_large_step),
                    n_discarded: it.solve.n_discarded,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FciRecord {
    pub e_hf: f64,
    pub energy: f64,
    pub e_corr: f64,
    pub dimension: usize,
}

impl FciRecord {
    pub fn new(e_hf: f64, result: &FciResult) -> Self {
        Self {
            e_hf: round12(e_hf),
            energy: round12(result.energy),
            e_corr: round12(result.energy - e_hf),
            dimension: result.dimension,
        }
    }
}

/// One CSV line of a scan. Failed geometries keep their label and carry
/// the message in `error`.
#[derive(Debug, Default, Serialize)]
pub struct ScanRow {
    pub label: String,
    pub e_hf: Option<f64>,
    pub e_fci: Option<f64>,
    pub e0_corr: Option<f64>,
    pub e_quad: Option<f64>,
    pub e_total: Option<f64>,
    pub m_large: Option<usize>,
    pub epsilon: Option<f64>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub error: Option<String>,
}

impl ScanRow {
    pub fn failed(label: String, error: String) -> Self {
        Self {
            label,
            error: Some(error),
            ..Self::default()
        }
    }

    pub fn new(label: String, result: &QuccResult) -> Self {
        Self {
            label,
            e_hf: Some(round12(result.e_hf)),
            e_fci: None,
            e0_corr: Some(round12(result.e0_corr)),
            e_quad: Some(round12(result.e_quad)),
            e_total: Some(round12(result.e_total)),
            m_large: Some(result.large.len()),
            epsilon: Some(round12(result.epsilon)),
            iterations: Some(result.iterations),
            converged: Some(result.converged),
            error: None,
        }
    }

    pub fn is_clean(&self) -> bool {
        self.error.is_none() && self.converged == Some(true)
    }
}
