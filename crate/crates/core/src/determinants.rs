//! Slater determinants, sparse state vectors and Hamiltonian matrix elements.
//!
//! Fermionic phases are counted in the interleaved spin-orbital order
//! (`2p` alpha, `2p + 1` beta). An operator string
//! `a+_a a+_b ... a_j a_i` acts right to left: the annihilators listed in
//! ascending order are applied first, then the creators in descending order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::integrals::IntegralStore;

/// Amplitudes below this magnitude are dropped from state vectors.
pub const DEFAULT_DROP_TOLERANCE: f64 = 1e-14;

/// Occupation bitmasks of a Slater determinant. Bit `p` of `alpha` (`beta`)
/// marks spatial orbital `p` as occupied with that spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Determinant {
    alpha: u64,
    beta: u64,
}

impl Determinant {
    pub const fn new(alpha: u64, beta: u64) -> Self {
        Self { alpha, beta }
    }

    /// Builds a determinant from a list of occupied spin orbitals.
    pub fn from_spin_orbitals(occupied: &[usize]) -> Self {
        let mut det = Self::new(0, 0);
        for &so in occupied {
            det = det.with(so, true);
        }
        det
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn beta(&self) -> u64 {
        self.beta
    }

    pub fn n_alpha(&self) -> u32 {
        self.alpha.count_ones()
    }

    pub fn n_beta(&self) -> u32 {
        self.beta.count_ones()
    }

    #[inline]
    pub fn is_occupied(&self, so: usize) -> bool {
        let bit = 1u64 << (so / 2);
        if so.is_multiple_of(2) {
            self.alpha & bit != 0
        } else {
            self.beta & bit != 0
        }
    }

    #[inline]
    fn with(self, so: usize, occupied: bool) -> Self {
        let bit = 1u64 << (so / 2);
        let (mut alpha, mut beta) = (self.alpha, self.beta);
        let mask = if so.is_multiple_of(2) {
            &mut alpha
        } else {
            &mut beta
        };
        if occupied {
            *mask |= bit;
        } else {
            *mask &= !bit;
        }
        Self { alpha, beta }
    }

    /// Number of occupied spin orbitals with index below `so`.
    #[inline]
    fn count_below(&self, so: usize) -> u32 {
        let p = so / 2;
        let below = (1u64 << p) - 1;
        let mut n = (self.alpha & below).count_ones() + (self.beta & below).count_ones();
        if so % 2 == 1 && self.alpha & (1u64 << p) != 0 {
            n += 1;
        }
        n
    }

    /// Occupied spin orbitals in ascending interleaved order.
    pub fn spin_orbitals(&self) -> Vec<usize> {
        let top = 64 - (self.alpha | self.beta).leading_zeros() as usize;
        (0..2 * top).filter(|&so| self.is_occupied(so)).collect()
    }

    /// Excitation degree between two determinants with equal particle numbers.
    #[inline]
    pub fn excitation_degree(&self, other: &Self) -> u32 {
        ((self.alpha ^ other.alpha).count_ones() + (self.beta ^ other.beta).count_ones()) / 2
    }
}

/// Applies `a+_{c_1} ... a+_{c_m} a_{a_n} ... a_{a_1}` to `det`, where
/// `creations = [c_1, ..]` and `annihilations = [a_1, ..]` are lists of spin
/// orbitals. Returns the resulting determinant and its fermionic sign, or
/// `None` when the string annihilates the determinant.
pub fn apply_spin_orbital_ops(
    det: Determinant,
    creations: &[usize],
    annihilations: &[usize],
) -> Option<(Determinant, f64)> {
    let mut det = det;
    let mut parity = 0u32;
    for &so in annihilations {
        if !det.is_occupied(so) {
            return None;
        }
        parity += det.count_below(so);
        det = det.with(so, false);
    }
    for &so in creations.iter().rev() {
        if det.is_occupied(so) {
            return None;
        }
        parity += det.count_below(so);
        det = det.with(so, true);
    }
    Some((det, if parity.is_multiple_of(2) { 1.0 } else { -1.0 }))
}

/// Sparse real state vector over determinants.
///
/// Stored in a `BTreeMap` so iteration order, and with it every reduction,
/// is deterministic.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StateVector {
    amplitudes: BTreeMap<Determinant, f64>,
}

impl StateVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Normalized single-determinant state.
    pub fn basis(det: Determinant) -> Self {
        let mut psi = Self::new();
        psi.amplitudes.insert(det, 1.0);
        psi
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn get(&self, det: &Determinant) -> f64 {
        self.amplitudes.get(det).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Determinant, &f64)> + '_ {
        self.amplitudes.iter()
    }

    /// Adds `value` to the amplitude of `det`.
    pub fn add(&mut self, det: Determinant, value: f64) {
        match self.amplitudes.entry(det) {
            Entry::Occupied(mut e) => *e.get_mut() += value,
            Entry::Vacant(e) => {
                e.insert(value);
            }
        }
    }

    /// Removes amplitudes whose magnitude is below `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.amplitudes.retain(|_, a| a.abs() >= tol);
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.values().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, factor: f64) {
        for a in self.amplitudes.values_mut() {
            *a *= factor;
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.amplitudes.iter().map(|(d, a)| a * large.get(d)).sum()
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: f64, other: &Self) {
        for (d, a) in &other.amplitudes {
            self.add(*d, factor * a);
        }
    }
}

impl FromIterator<(Determinant, f64)> for StateVector {
    fn from_iter<I: IntoIterator<Item = (Determinant, f64)>>(iter: I) -> Self {
        let mut psi = Self::new();
        for (d, a) in iter {
            psi.add(d, a);
        }
        psi
    }
}

/// Second-quantized electronic Hamiltonian over spin orbitals, backed by an
/// [`IntegralStore`].
#[derive(Debug, Clone, Copy)]
pub struct Hamiltonian<'a> {
    store: &'a IntegralStore,
}

impl<'a> Hamiltonian<'a> {
    pub fn new(store: &'a IntegralStore) -> Self {
        Self { store }
    }

    pub fn store(&self) -> &'a IntegralStore {
        self.store
    }

    /// One-electron integral over spin orbitals.
    #[inline]
    pub fn h1(&self, p: usize, q: usize) -> f64 {
        if p % 2 != q % 2 {
            0.0
        } else {
            self.store.h(p / 2, q / 2)
        }
    }

    /// Chemist-notation `(pq|rs)` over spin orbitals.
    #[inline]
    pub fn chem(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        if p % 2 != q % 2 || r % 2 != s % 2 {
            0.0
        } else {
            self.store.g(p / 2, q / 2, r / 2, s / 2)
        }
    }

    /// Antisymmetrized physicist integral `<pq||rs> = <pq|rs> - <pq|sr>`.
    #[inline]
    pub fn antisym(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.chem(p, r, q, s) - self.chem(p, s, q, r)
    }

    /// Diagonal element `<D|H|D>` including the core energy.
    pub fn diagonal(&self, det: &Determinant) -> f64 {
        let occ = det.spin_orbitals();
        let mut e = self.store.e_core();
        for (n, &i) in occ.iter().enumerate() {
            e += self.h1(i, i);
            for &j in &occ[..n] {
                e += self.chem(i, i, j, j) - self.chem(i, j, j, i);
            }
        }
        e
    }

    /// Slater–Condon matrix element `<bra|H|ket>`.
    pub fn slater_condon(&self, bra: &Determinant, ket: &Determinant) -> f64 {
        if bra.n_alpha() != ket.n_alpha() || bra.n_beta() != ket.n_beta() {
            return 0.0;
        }
        match bra.excitation_degree(ket) {
            0 => self.diagonal(ket),
            1 => {
                let hole = Determinant::new(ket.alpha & !bra.alpha, ket.beta & !bra.beta)
                    .spin_orbitals()[0];
                let particle = Determinant::new(bra.alpha & !ket.alpha, bra.beta & !ket.beta)
                    .spin_orbitals()[0];
                let (_, sign) = apply_spin_orbital_ops(*ket, &[particle], &[hole])
                    .expect("single excitation connects the determinants");
                let common = Determinant::new(ket.alpha & bra.alpha, ket.beta & bra.beta);
                let mut e = self.h1(particle, hole);
                for j in common.spin_orbitals() {
                    e += self.chem(particle, hole, j, j) - self.chem(particle, j, j, hole);
                }
                sign * e
            }
            2 => {
                let holes =
                    Determinant::new(ket.alpha & !bra.alpha, ket.beta & !bra.beta).spin_orbitals();
                let particles =
                    Determinant::new(bra.alpha & !ket.alpha, bra.beta & !ket.beta).spin_orbitals();
                let (_, sign) = apply_spin_orbital_ops(*ket, &particles, &holes)
                    .expect("double excitation connects the determinants");
                sign * self.antisym(particles[0], particles[1], holes[0], holes[1])
            }
            _ => 0.0,
        }
    }

    /// `<psi|H|psi>` by pairwise Slater–Condon evaluation over the stored
    /// determinants. `psi` must be normalized to within `1e-8`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::Contract(format!(
                "expectation value needs a normalized state, got norm {norm}"
            )));
        }
        let dets: Vec<(Determinant, f64)> = psi.iter().map(|(d, a)| (*d, *a)).collect();
        let mut e = 0.0;
        for (n, (ket, ca)) in dets.iter().enumerate() {
            e += ca * ca * self.diagonal(ket);
            for (bra, cb) in &dets[..n] {
                if bra.excitation_degree(ket) <= 2 {
                    e += 2.0 * ca * cb * self.slater_condon(bra, ket);
                }
            }
        }
        Ok(e)
    }

    /// All determinants reachable from `det` by one Sz-conserving single or
    /// double excitation.
    pub fn connections(&self, det: &Determinant) -> Vec<Determinant> {
        let n_so = self.store.n_spin_orbitals();
        let occ = det.spin_orbitals();
        let virt: Vec<usize> = (0..n_so).filter(|&so| !det.is_occupied(so)).collect();
        let mut out = Vec::new();
        for &i in &occ {
            for &a in virt.iter().filter(|&&a| a % 2 == i % 2) {
                out.push(det.with(i, false).with(a, true));
            }
        }
        for (n, &i) in occ.iter().enumerate() {
            for &j in &occ[n + 1..] {
                for (m, &a) in virt.iter().enumerate() {
                    for &b in &virt[m + 1..] {
                        if (a % 2 + b % 2) != (i % 2 + j % 2) {
                            continue;
                        }
                        out.push(
                            det.with(i, false)
                                .with(j, false)
                                .with(a, true)
                                .with(b, true),
                        );
                    }
                }
            }
        }
        out
    }

    /// `H |psi>` as a sparse vector.
    pub fn apply(&self, psi: &StateVector) -> StateVector {
        let mut out = StateVector::new();
        for (ket, c) in psi.iter() {
            out.add(*ket, c * self.diagonal(ket));
            for bra in self.connections(ket) {
                let v = self.slater_condon(&bra, ket);
                if v != 0.0 {
                    out.add(bra, c * v);
                }
            }
        }
        out
    }
}
