//! Dense Fock-space reference built from Jordan–Wigner matrices.
//!
//! Basis index bit `q` is the occupation of spin orbital `q`. The
//! annihilator of mode `q` is `Z x ... x Z x a x I x ... x I` with the
//! string of `Z` on every mode below `q`.

use nalgebra::DMatrix;
use qucc_core::{Determinant, Excitation, IntegralStore, StateVector};

pub struct FockSpace {
    pub modes: usize,
    annihilators: Vec<DMatrix<f64>>,
}

fn kron_chain(factors: &[DMatrix<f64>]) -> DMatrix<f64> {
    // factors[q] acts on mode q; the most significant mode goes leftmost.
    let mut out = DMatrix::identity(1, 1);
    for m in factors.iter().rev() {
        out = out.kronecker(m);
    }
    out
}

impl FockSpace {
    pub fn new(modes: usize) -> Self {
        let lower = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let z = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let id = DMatrix::<f64>::identity(2, 2);
        let annihilators = (0..modes)
            .map(|q| {
                let factors: Vec<DMatrix<f64>> = (0..modes)
                    .map(|r| match r.cmp(&q) {
                        std::cmp::Ordering::Less => z.clone(),
                        std::cmp::Ordering::Equal => lower.clone(),
                        std::cmp::Ordering::Greater => id.clone(),
                    })
                    .collect();
                kron_chain(&factors)
            })
            .collect();
        Self {
            modes,
            annihilators,
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    pub fn annihilator(&self, q: usize) -> &DMatrix<f64> {
        &self.annihilators[q]
    }

    pub fn creator(&self, q: usize) -> DMatrix<f64> {
        self.annihilators[q].transpose()
    }

    pub fn index(det: &Determinant) -> usize {
        let mut idx = 0usize;
        for so in det.spin_orbitals() {
            idx |= 1 << so;
        }
        idx
    }

    pub fn determinant(index: usize) -> Determinant {
        let occ: Vec<usize> = (0..usize::BITS as usize)
            .filter(|&q| index >> q & 1 == 1)
            .collect();
        Determinant::from_spin_orbitals(&occ)
    }

    pub fn to_dense(&self, psi: &StateVector) -> Vec<f64> {
        let mut v = vec![0.0; self.dim()];
        for (d, a) in psi.iter() {
            v[Self::index(d)] += a;
        }
        v
    }

    pub fn from_dense(v: &[f64]) -> StateVector {
        v.iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .map(|(i, a)| (Self::determinant(i), *a))
            .collect()
    }

    /// `a+_{c_1} ... a+_{c_m} a_{a_m} ... a_{a_1}` as a dense matrix.
    pub fn string(&self, creations: &[usize], annihilations: &[usize]) -> DMatrix<f64> {
        let mut op = DMatrix::identity(self.dim(), self.dim());
        for &c in creations {
            op *= self.creator(c);
        }
        for &a in annihilations.iter().rev() {
            op *= self.annihilator(a);
        }
        op
    }

    /// Anti-Hermitian generator `E - E+` of an excitation.
    pub fn generator(&self, ex: &Excitation) -> DMatrix<f64> {
        let e = self.string(ex.virtuals(), ex.occupied());
        &e - e.transpose()
    }

    /// `H = sum h_pq a+_p a_q + 1/2 sum <pq|rs> a+_p a+_q a_s a_r + E_core`
    /// assembled term by term from operator products.
    pub fn hamiltonian(&self, store: &IntegralStore) -> DMatrix<f64> {
        let n = self.modes;
        assert_eq!(n, store.n_spin_orbitals());
        let spin_h = |p: usize, q: usize| {
            if p % 2 == q % 2 {
                store.h(p / 2, q / 2)
            } else {
                0.0
            }
        };
        // <pq|rs> = (pr|qs)
        let phys = |p: usize, q: usize, r: usize, s: usize| {
            if p % 2 == r % 2 && q % 2 == s % 2 {
                store.g(p / 2, r / 2, q / 2, s / 2)
            } else {
                0.0
            }
        };
        let mut h = DMatrix::identity(self.dim(), self.dim()) * store.e_core();
        for p in 0..n {
            for q in 0..n {
                let v = spin_h(p, q);
                if v != 0.0 {
                    h += (self.creator(p) * self.annihilator(q)) * v;
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = phys(p, q, r, s);
                        if v != 0.0 {
                            let op = self.creator(p)
                                * self.creator(q)
                                * self.annihilator(s)
                                * self.annihilator(r);
                            h += op * (0.5 * v);
                        }
                    }
                }
            }
        }
        h
    }
}
