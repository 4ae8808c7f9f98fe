//! Full configuration interaction over the fixed-(n_alpha, n_beta) space.
//!
//! Small spaces are diagonalized densely; larger ones use a Davidson
//! iteration started from the Hartree–Fock determinant with a diagonal
//! preconditioner.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::determinants::{Determinant, Hamiltonian, StateVector};
use crate::error::{Error, Result};
use crate::integrals::IntegralStore;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FciOptions {
    /// Largest CI dimension the solver accepts.
    pub max_dim: usize,
    /// Spaces smaller than this are diagonalized densely.
    pub dense_limit: usize,
    /// Davidson residual-norm convergence threshold.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Subspace size at which the Davidson basis is collapsed.
    pub max_subspace: usize,
}

impl Default for FciOptions {
    fn default() -> Self {
        Self {
            max_dim: 200_000,
            dense_limit: 2000,
            tolerance: 1e-9,
            max_iterations: 500,
            max_subspace: 40,
        }
    }
}

/// Every determinant with the store's electron counts, ordered
/// lexicographically by `(alpha, beta)` bitmask.
#[derive(Debug, Clone)]
pub struct CiSpace {
    dets: Vec<Determinant>,
    index: HashMap<Determinant, usize>,
}

/// `C(n, k)`, saturating at `usize::MAX`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

/// All `n`-bit masks with `k` bits set, ascending.
fn combinations(n: usize, k: usize) -> Vec<u64> {
    if k == 0 {
        return vec![0];
    }
    let limit: u128 = 1u128 << n;
    let mut out = Vec::new();
    let mut x: u64 = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
    while (x as u128) < limit {
        out.push(x);
        // Gosper's hack.
        let c = x & x.wrapping_neg();
        let r = x.wrapping_add(c);
        if r == 0 {
            break;
        }
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

impl CiSpace {
    /// Dimension of the space without building it.
    pub fn dimension(store: &IntegralStore) -> usize {
        binomial(store.n_spatial(), store.n_alpha())
            .saturating_mul(binomial(store.n_spatial(), store.n_beta()))
    }

    pub fn new(store: &IntegralStore) -> Self {
        let alphas = combinations(store.n_spatial(), store.n_alpha());
        let betas = combinations(store.n_spatial(), store.n_beta());
        let dets: Vec<Determinant> = alphas
            .iter()
            .flat_map(|&a| betas.iter().map(move |&b| Determinant::new(a, b)))
            .collect();
        let index = dets.iter().enumerate().map(|(i, d)| (*d, i)).collect();
        Self { dets, index }
    }

    pub fn len(&self) -> usize {
        self.dets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dets.is_empty()
    }

    pub fn determinants(&self) -> &[Determinant] {
        &self.dets
    }

    pub fn index_of(&self, det: &Determinant) -> Option<usize> {
        self.index.get(det).copied()
    }

    /// Dense Hamiltonian matrix over the space.
    pub fn dense_hamiltonian(&self, store: &IntegralStore) -> DMatrix<f64> {
        let ham = Hamiltonian::new(store);
        let n = self.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| ham.slater_condon(&self.dets[i], &self.dets[j]))
                    .collect()
            })
            .collect();
        DMatrix::from_fn(n, n, |i, j| rows[i][j])
    }
}

/// Sparse row storage of the CI Hamiltonian.
struct SparseHamiltonian {
    diagonal: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseHamiltonian {
    fn build(space: &CiSpace, store: &IntegralStore) -> Self {
        let ham = Hamiltonian::new(store);
        let diagonal: Vec<f64> = space.dets.par_iter().map(|d| ham.diagonal(d)).collect();
        let rows = space
            .dets
            .par_iter()
            .map(|ket| {
                let mut row: Vec<(usize, f64)> = ham
                    .connections(ket)
                    .into_iter()
                    .filter_map(|bra| {
                        let j = space.index_of(&bra)?;
                        let v = ham.slater_condon(&bra, ket);
                        (v != 0.0).then_some((j, v))
                    })
                    .collect();
                row.sort_by_key(|&(j, _)| j);
                row
            })
            .collect();
        Self { diagonal, rows }
    }

    fn matvec(&self, x: &DVector<f64>) -> DVector<f64> {
        let out: Vec<f64> = (0..x.len())
            .into_par_iter()
            .map(|i| {
                self.diagonal[i] * x[i] + self.rows[i].iter().map(|&(j, v)| v * x[j]).sum::<f64>()
            })
            .collect();
        DVector::from_vec(out)
    }
}

#[derive(Debug, Clone)]
pub struct FciResult {
    pub energy: f64,
    pub vector: StateVector,
    pub dimension: usize,
}

/// Ground state of the CI Hamiltonian with default options.
pub fn fci_ground(store: &IntegralStore) -> Result<FciResult> {
    fci_ground_with(store, &FciOptions::default())
}

pub fn fci_ground_with(store: &IntegralStore, options: &FciOptions) -> Result<FciResult> {
    let dimension = CiSpace::dimension(store);
    if dimension > options.max_dim {
        return Err(Error::DimensionCap {
            dimension,
            cap: options.max_dim,
        });
    }
    let space = CiSpace::new(store);
    let (energy, mut coeffs) = if dimension < options.dense_limit {
        dense_ground(&space, store)?
    } else {
        let h = SparseHamiltonian::build(&space, store);
        let guess = space
            .index_of(&store.hf_determinant())
            .expect("reference determinant lies in the CI space");
        davidson(&h, guess, options)?
    };
    let pivot = coeffs.iamax();
    if coeffs[pivot] < 0.0 {
        coeffs.neg_mut();
    }
    let vector = space
        .dets
        .iter()
        .zip(coeffs.iter())
        .filter(|(_, c)| c.abs() >= crate::determinants::DEFAULT_DROP_TOLERANCE)
        .map(|(d, c)| (*d, *c))
        .collect();
    Ok(FciResult {
        energy,
        vector,
        dimension,
    })
}

fn dense_ground(space: &CiSpace, store: &IntegralStore) -> Result<(f64, DVector<f64>)> {
    let h = space.dense_hamiltonian(store);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Solver("dense CI diagonalization did not converge".into()))?;
    let lowest = eig.eigenvalues.imin();
    Ok((
        eig.eigenvalues[lowest],
        eig.eigenvectors.column(lowest).into_owned(),
    ))
}

fn davidson(
    h: &SparseHamiltonian,
    guess: usize,
    options: &FciOptions,
) -> Result<(f64, DVector<f64>)> {
    let n = h.diagonal.len();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut sigma: Vec<DVector<f64>> = Vec::new();
    let mut start = DVector::zeros(n);
    start[guess] = 1.0;
    let mut pending = Some(start);
    let mut last_residual = f64::INFINITY;

    for _ in 0..options.max_iterations {
        if let Some(v) = pending.take() {
            sigma.push(h.matvec(&v));
            basis.push(v);
        }
        let m = basis.len();
        let sub = DMatrix::from_fn(m, m, |i, j| basis[i].dot(&sigma[j]));
        let sub = (&sub + sub.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sub);
        let lowest = eig.eigenvalues.imin();
        let theta = eig.eigenvalues[lowest];
        let y = eig.eigenvectors.column(lowest);
        let mut x = DVector::zeros(n);
        let mut hx = DVector::zeros(n);
        for i in 0..m {
            x.axpy(y[i], &basis[i], 1.0);
            hx.axpy(y[i], &sigma[i], 1.0);
        }
        let residual = &hx - &x * theta;
        last_residual = residual.norm();
        if last_residual < options.tolerance {
            let norm = x.norm();
            return Ok((theta, x / norm));
        }
        if m >= options.max_subspace {
            let norm = x.norm();
            basis = vec![x / norm];
            sigma = vec![hx / norm];
        }
        let mut t = DVector::from_fn(n, |i, _| {
            let denom = theta - h.diagonal[i];
            if denom.abs() < 1e-8 {
                residual[i] / 1e-8_f64.copysign(denom)
            } else {
                residual[i] / denom
            }
        });
        for _ in 0..2 {
            for v in &basis {
                let overlap = v.dot(&t);
                t.axpy(-overlap, v, 1.0);
            }
        }
        let norm = t.norm();
        if norm < 1e-14 {
            return Err(Error::Solver(format!(
                "Davidson correction vanished with residual {last_residual:e}"
            )));
        }
        pending = Some(t / norm);
    }
    Err(Error::Solver(format!(
        "Davidson did not converge in {} iterations (residual {last_residual:e})",
        options.max_iterations
    )))
}
