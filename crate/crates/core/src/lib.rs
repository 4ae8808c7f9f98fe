//! Quadratic-expansion unitary coupled cluster (qUCC).
//!
//! The energy of a factorized UCC singles-and-doubles ansatz is expanded to
//! second order in the rotation angles, either about the Hartree–Fock
//! determinant or about a short product of exactly applied large-angle
//! factors, and minimized by a regularized linear solve. A full
//! configuration interaction solver provides exact reference energies.
//!
//! ```no_run
//! use qucc_core::{parse_fcidump, run_qucc, QuccConfig};
//!
//! let text = std::fs::read_to_string("h2.fcidump").unwrap();
//! let store = parse_fcidump(&text).unwrap();
//! let config = QuccConfig { m_large: 1, ..QuccConfig::default() };
//! let result = run_qucc(&store, &config).unwrap();
//! println!("E = {:.10}", result.e_total);
//! ```

pub mod determinants;
pub mod error;
pub mod excitations;
pub mod factors;
pub mod fci;
pub mod integrals;
pub mod quadratic;
pub mod reference_loop;
pub mod solver;

pub use determinants::{apply_spin_orbital_ops, Determinant, Hamiltonian, StateVector};
pub use error::{Error, Result};
pub use excitations::{
    enumerate_singles_doubles, mp2_amplitudes, select_large_factors, Excitation, UccFactor,
};
pub use factors::{
    apply_factor, apply_factor_derivative, apply_generator, apply_sequence, DerivativeOrder,
    FactorSequence,
};
pub use fci::{fci_ground, fci_ground_with, CiSpace, FciOptions, FciResult};
pub use integrals::{parse_fcidump, IntegralStore};
pub use quadratic::{
    ansatz_energy, build_model_hf, build_model_ucc_ref, product_energy, QuadraticModel,
};
pub use reference_loop::{
    run_qucc, variational_reference_energy, Iteration, LargeFactor, QuccConfig, QuccResult,
    Screening,
};
pub use solver::{pseudo_inverse_solve, quadratic_energy, SolveReport, SpectrumEntry};
