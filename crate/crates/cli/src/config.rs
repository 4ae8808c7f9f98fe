use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qucc_core::{QuccConfig, Screening};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScreeningArg {
    Mp2,
    Gradient,
}

impl From<ScreeningArg> for Screening {
    fn from(value: ScreeningArg) -> Self {
        match value {
            ScreeningArg::Mp2 => Screening::Mp2,
            ScreeningArg::Gradient => Screening::Gradient,
        }
    }
}

/// Solver settings shared by `run` and `scan`.
#[derive(Debug, Clone, Default, Args)]
pub struct SolverArgs {
    /// Number of large-angle factors in the exact reference.
    #[arg(long)]
    pub m_large: Option<usize>,
    /// Pseudo-inverse eigenvalue cutoff (default 0.1 with a reference, 1e-10 without).
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Maximum number of reference iterations.
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Convergence threshold on the largest large-angle step.
    #[arg(long)]
    pub angle_tol: Option<f64>,
    /// Convergence threshold on the change in total energy.
    #[arg(long)]
    pub energy_tol: Option<f64>,
    /// How large-angle factors are chosen.
    #[arg(long, value_enum)]
    pub screening: Option<ScreeningArg>,
    /// JSON file with default settings; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Settings read from a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    m_large: Option<usize>,
    epsilon: Option<f64>,
    max_iterations: Option<usize>,
    angle_tol: Option<f64>,
    energy_tol: Option<f64>,
    screening: Option<ScreeningArg>,
}

fn read_config(path: &Path) -> Result<ConfigFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

impl SolverArgs {
    pub fn resolve(&self) -> Result<QuccConfig, String> {
        let file = match &self.config {
            Some(path) => read_config(path)?,
            None => ConfigFile::default(),
        };
        let defaults = QuccConfig::default();
        let config = QuccConfig {
            m_large: self.m_large.or(file.m_large).unwrap_or(defaults.m_large),
            epsilon: self.epsilon.or(file.epsilon),
            max_iterations: self
                .max_iter
                .or(file.max_iterations)
                .unwrap_or(defaults.max_iterations),
            angle_tol: self
                .angle_tol
                .or(file.angle_tol)
                .unwrap_or(defaults.angle_tol),
            energy_tol: self
                .energy_tol
                .or(file.energy_tol)
                .unwrap_or(defaults.energy_tol),
            screening: self
                .screening
                .or(file.screening)
                .map_or(defaults.screening, Screening::from),
        };
        config.validate().map_err(|e| e.to_string())?;
        Ok(config)
    }
}
