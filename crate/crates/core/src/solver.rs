//! Eigenvalue-cutoff pseudo-inverse solve of `A theta = -b`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Largest asymmetry `|A_km - A_mk|` accepted by [`pseudo_inverse_solve`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

const MAX_EIGEN_SWEEPS: usize = 100_000;

/// One eigenvalue of the Hessian and whether the solve inverted it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub value: f64,
    pub retained: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub theta_min: DVector<f64>,
    /// `b . theta + 1/2 theta^T A theta` at `theta_min`.
    pub e_quad: f64,
    pub n_discarded: usize,
    /// Eigenvalues in ascending order.
    pub eigen_spectrum: Vec<SpectrumEntry>,
}

/// Solves `A theta = -b` through the eigendecomposition `A = Q L Q^T`,
/// inverting only eigenvalues with `|lambda| > epsilon`. Discarded
/// eigenvalues stay zero in the pseudo-inverse.
pub fn pseudo_inverse_solve(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    epsilon: f64,
) -> Result<SolveReport> {
    let n = b.len();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::Contract(format!(
            "matrix is {}x{} but the vector has length {n}",
            a.nrows(),
            a.ncols()
        )));
    }
    if epsilon.is_nan() || epsilon < 0.0 {
        return Err(Error::Contract(format!(
            "cutoff must be non-negative, got {epsilon}"
        )));
    }
    let asym = (a - a.transpose()).amax();
    if asym.is_nan() || asym > SYMMETRY_TOLERANCE {
        return Err(Error::Contract(format!(
            "matrix is not symmetric (max |A - A^T| = {asym:e})"
        )));
    }
    if n == 0 {
        return Ok(SolveReport {
            theta_min: DVector::zeros(0),
            e_quad: 0.0,
            n_discarded: 0,
            eigen_spectrum: Vec::new(),
        });
    }
    let eigen =
        SymmetricEigen::try_new(a.clone(), f64::EPSILON, MAX_EIGEN_SWEEPS).ok_or_else(|| {
            Error::Solver(format!("symmetric eigensolver did not converge (dim {n})"))
        })?;

    let mut theta = DVector::zeros(n);
    let mut spectrum = Vec::with_capacity(n);
    let mut n_discarded = 0;
    for (i, &lambda) in eigen.eigenvalues.iter().enumerate() {
        let retained = lambda.abs() > epsilon;
        if retained {
            let q = eigen.eigenvectors.column(i);
            theta -= q * (q.dot(b) / lambda);
        } else {
            n_discarded += 1;
        }
        spectrum.push(SpectrumEntry {
            value: lambda,
            retained,
        });
    }
    spectrum.sort_by(|x, y| x.value.total_cmp(&y.value));
    let e_quad = quadratic_energy(b, a, &theta)?;
    Ok(SolveReport {
        theta_min: theta,
        e_quad,
        n_discarded,
        eigen_spectrum: spectrum,
    })
}

/// `b . theta + 1/2 theta^T A theta`.
pub fn quadratic_energy(b: &DVector<f64>, a: &DMatrix<f64>, theta: &DVector<f64>) -> Result<f64> {
    let n = theta.len();
    if b.len() != n || a.nrows() != n || a.ncols() != n {
        return Err(Error::Contract(format!(
            "dimension mismatch: b {}, A {}x{}, theta {n}",
            b.len(),
            a.nrows(),
            a.ncols()
        )));
    }
    Ok(b.dot(theta) + 0.5 * theta.dot(&(a * theta)))
}
