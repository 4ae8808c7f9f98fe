//! `qucc`: single-point runs, bond-stretch scans and FCI references from
//! FCIDUMP files.

mod config;
mod output;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qucc_core::{
    fci_ground_with, parse_fcidump, run_qucc, Error, FciOptions, Hamiltonian, IntegralStore,
};
use rayon::prelude::*;

use config::SolverArgs;
use output::{FciRecord, RunRecord, ScanRow};

#[derive(Debug, Parser)]
#[command(
    name = "qucc",
    version,
    about = "Quadratic unitary coupled cluster from FCIDUMP integrals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Single-point calculation, printed as JSON.
    Run {
        fcidump: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Also compute the FCI energy.
        #[arg(long)]
        with_fci: bool,
    },
    /// Runs every `label,path` entry of a manifest and prints CSV.
    Scan {
        manifest: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Fill the e_fci column.
        #[arg(long)]
        with_fci: bool,
    },
    /// Exact ground-state energy, printed as JSON.
    Fci {
        fcidump: PathBuf,
        /// Largest CI dimension to attempt.
        #[arg(long, default_value_t = FciOptions::default().max_dim)]
        max_dim: usize,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;
const EXIT_DIMENSION_CAP: u8 = 3;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_ERROR,
            message: message.into(),
        }
    }
}

fn load(path: &Path) -> Result<IntegralStore, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_fcidump(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn fci_energy(store: &IntegralStore, max_dim: usize) -> Result<qucc_core::FciResult, Error> {
    let options = FciOptions {
        max_dim,
        ..FciOptions::default()
    };
    fci_ground_with(store, &options)
}

fn print(text: &str) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{text}").map_err(|e| Failure::new(format!("cannot write output: {e}")))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure::new(e.to_string()))
}

fn cmd_run(fcidump: &Path, solver: &SolverArgs, with_fci: bool) -> Result<u8, Failure> {
    let config = solver.resolve().map_err(Failure::new)?;
    let store = load(fcidump).map_err(Failure::new)?;
    let result = run_qucc(&store, &config)
        .map_err(|e| Failure::new(format!("{}: {e}", fcidump.display())))?;
    let e_fci = if with_fci {
        let fci = fci_energy(&store, FciOptions::default().max_dim)
            .map_err(|e| Failure::new(format!("{}: {e}", fcidump.display())))?;
        Some(fci.energy)
    } else {
        None
    };
    print(&to_json(&RunRecord::new(&result, e_fci))?)?;
    Ok(if result.converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn read_manifest(path: &Path) -> Result<Vec<(String, PathBuf)>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| format!("{}: {e}", path.display()))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 || record[0].is_empty() || record[1].is_empty() {
            return Err(format!(
                "{}: line {line}: expected `label,path`",
                path.display()
            ));
        }
        entries.push((record[0].to_string(), base.join(&record[1])));
    }
    if entries.is_empty() {
        return Err(format!("{}: manifest lists no geometries", path.display()));
    }
    Ok(entries)
}

fn scan_row(label: String, path: &Path, config: &qucc_core::QuccConfig, with_fci: bool) -> ScanRow {
    let store = match load(path) {
        Ok(store) => store,
        Err(e) => return ScanRow::failed(label, e),
    };
    let mut row = match run_qucc(&store, config) {
        Ok(result) => ScanRow::new(label, &result),
        Err(e) => return ScanRow::failed(label, e.to_string()),
    };
    if with_fci {
        match fci_energy(&store, FciOptions::default().max_dim) {
            Ok(fci) => row.e_fci = Some(output::round12(fci.energy)),
            Err(e) => row.error = Some(format!("fci: {e}")),
        }
    }
    row
}

fn cmd_scan(manifest: &Path, solver: &SolverArgs, with_fci: bool) -> Result<u8, Failure> {
    let config = solver.resolve().map_err(Failure::new)?;
    let entries = read_manifest(manifest).map_err(Failure::new)?;
    let rows: Vec<ScanRow> = entries
        .into_par_iter()
        .map(|(label, path)| scan_row(label, &path, &config, with_fci))
        .collect();
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        writer
            .serialize(row)
            .map_err(|e| Failure::new(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::new(e.to_string()))?;
    std::io::stdout()
        .lock()
        .write_all(&bytes)
        .map_err(|e| Failure::new(format!("cannot write output: {e}")))?;
    Ok(if rows.iter().all(ScanRow::is_clean) {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn cmd_fci(fcidump: &Path, max_dim: usize) -> Result<u8, Failure> {
    let store = load(fcidump).map_err(Failure::new)?;
    let result = fci_energy(&store, max_dim).map_err(|e| Failure {
        code: if matches!(e, Error::DimensionCap { .. }) {
            EXIT_DIMENSION_CAP
        } else {
            EXIT_ERROR
        },
        message: format!("{}: {e}", fcidump.display()),
    })?;
    let e_hf = Hamiltonian::new(&store).diagonal(&store.hf_determinant());
    print(&to_json(&FciRecord::new(e_hf, &result))?)?;
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_OK });
        }
    };
    let outcome = match &cli.command {
        Command::Run {
            fcidump,
            solver,
            with_fci,
        } => cmd_run(fcidump, solver, *with_fci),
        Command::Scan {
            manifest,
            solver,
            with_fci,
        } => cmd_scan(manifest, solver, *with_fci),
        Command::Fci { fcidump, max_dim } => cmd_fci(fcidump, *max_dim),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("qucc: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
