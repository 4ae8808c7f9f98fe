//! Singles-and-doubles excitation pool and MP2 screening of large-angle
//! factors.

use crate::determinants::Hamiltonian;
use crate::error::{Error, Result};
use crate::integrals::IntegralStore;

/// MP2 denominators smaller than this flag the excitation as degenerate.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-8;

/// A particle-hole excitation `a+_a a+_b ... a_j a_i` over spin orbitals.
///
/// `occupied` holds `i, j, ...` and `virtuals` holds `a, b, ...`, both sorted
/// ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Excitation {
    occupied: Vec<usize>,
    virtuals: Vec<usize>,
}

impl Excitation {
    pub fn new(mut occupied: Vec<usize>, mut virtuals: Vec<usize>) -> Result<Self> {
        occupied.sort_unstable();
        virtuals.sort_unstable();
        if occupied.is_empty() || occupied.len() != virtuals.len() {
            return Err(Error::Contract(format!(
                "excitation needs equally many occupied and virtual indices, got {occupied:?} -> {virtuals:?}"
            )));
        }
        let has_dupes = |v: &[usize]| v.windows(2).any(|w| w[0] == w[1]);
        if has_dupes(&occupied) || has_dupes(&virtuals) {
            return Err(Error::Contract(format!(
                "repeated spin orbital in {occupied:?} -> {virtuals:?}"
            )));
        }
        if occupied.iter().any(|o| virtuals.contains(o)) {
            return Err(Error::Contract(format!(
                "occupied and virtual sets overlap in {occupied:?} -> {virtuals:?}"
            )));
        }
        let n_alpha = |v: &[usize]| v.iter().filter(|&&so| so % 2 == 0).count();
        if n_alpha(&occupied) != n_alpha(&virtuals) {
            return Err(Error::Contract(format!(
                "excitation {occupied:?} -> {virtuals:?} changes Sz"
            )));
        }
        if occupied.iter().chain(&virtuals).any(|&so| so >= 128) {
            return Err(Error::Contract("spin-orbital index beyond 127".into()));
        }
        Ok(Self { occupied, virtuals })
    }

    pub fn single(i: usize, a: usize) -> Result<Self> {
        Self::new(vec![i], vec![a])
    }

    pub fn double(i: usize, j: usize, a: usize, b: usize) -> Result<Self> {
        Self::new(vec![i, j], vec![a, b])
    }

    pub fn rank(&self) -> usize {
        self.occupied.len()
    }

    pub fn occupied(&self) -> &[usize] {
        &self.occupied
    }

    pub fn virtuals(&self) -> &[usize] {
        &self.virtuals
    }
}

impl std::fmt::Display for Excitation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "{}->{}", join(&self.occupied), join(&self.virtuals))
    }
}

/// An excitation together with its rotation angle (radians).
#[derive(Debug, Clone, PartialEq)]
pub struct UccFactor {
    pub excitation: Excitation,
    pub theta: f64,
}

impl UccFactor {
    pub fn new(excitation: Excitation, theta: f64) -> Self {
        debug_assert!(theta.is_finite());
        Self { excitation, theta }
    }
}

/// All Sz-conserving singles followed by all Sz-conserving doubles out of
/// the aufbau reference, in canonical order.
pub fn enumerate_singles_doubles(store: &IntegralStore) -> Vec<Excitation> {
    let n_so = store.n_spin_orbitals();
    let occ: Vec<usize> = (0..n_so)
        .filter(|&so| store.is_reference_occupied(so))
        .collect();
    let virt: Vec<usize> = (0..n_so)
        .filter(|&so| !store.is_reference_occupied(so))
        .collect();

    let mut pool = Vec::new();
    for &i in &occ {
        for &a in &virt {
            if i % 2 == a % 2 {
                pool.push(Excitation {
                    occupied: vec![i],
                    virtuals: vec![a],
                });
            }
        }
    }
    for (n, &i) in occ.iter().enumerate() {
        for &j in &occ[n + 1..] {
            for (m, &a) in virt.iter().enumerate() {
                for &b in &virt[m + 1..] {
                    if i % 2 + j % 2 == a % 2 + b % 2 {
                        pool.push(Excitation {
                            occupied: vec![i, j],
                            virtuals: vec![a, b],
                        });
                    }
                }
            }
        }
    }
    pool
}

/// First-order MP2 amplitudes for every pool member. Singles get zero;
/// doubles get `<ij||ab> / (e_i + e_j - e_a - e_b)`. A double whose
/// denominator magnitude is below [`DEGENERATE_DENOMINATOR`] is reported as
/// `f64::INFINITY`.
pub fn mp2_amplitudes(store: &IntegralStore, pool: &[Excitation]) -> Vec<f64> {
    let fock = store.fock_diagonal();
    let ham = Hamiltonian::new(store);
    pool.iter()
        .map(|ex| match (ex.occupied(), ex.virtuals()) {
            (&[i, j], &[a, b]) => {
                let denom = fock[i] + fock[j] - fock[a] - fock[b];
                if denom.abs() < DEGENERATE_DENOMINATOR {
                    f64::INFINITY
                } else {
                    ham.antisym(i, j, a, b) / denom
                }
            }
            _ => 0.0,
        })
        .collect()
}

/// Indices of the `m` largest-magnitude nonzero amplitudes, largest first.
/// Ties go to the lower index; infinite (degenerate) amplitudes rank first.
pub fn select_large_factors(amplitudes: &[f64], m: usize) -> Vec<usize> {
    let mut ranked: Vec<usize> = (0..amplitudes.len())
        .filter(|&k| amplitudes[k] != 0.0 && !amplitudes[k].is_nan())
        .collect();
    ranked.sort_by(|&x, &y| {
        amplitudes[y]
            .abs()
            .total_cmp(&amplitudes[x].abs())
            .then(x.cmp(&y))
    });
    ranked.truncate(m);
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determinants::apply_spin_orbital_ops;

    #[test]
    fn h2_pool() {
        let store = IntegralStore::zeros(2, 1, 1).unwrap();
        let pool = enumerate_singles_doubles(&store);
        let shown: Vec<String> = pool.iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["0->2", "1->3", "0,1->2,3"]);
    }

    #[test]
    fn fully_occupied_spin_channel_gives_empty_pool() {
        let store = IntegralStore::zeros(2, 2, 0).unwrap();
        assert!(enumerate_singles_doubles(&store).is_empty());
    }

    #[test]
    fn excitation_validation() {
        assert!(Excitation::single(0, 3).is_err());
        assert!(Excitation::double(0, 0, 2, 4).is_err());
        assert!(Excitation::double(0, 2, 2, 4).is_err());
        assert!(Excitation::new(vec![0], vec![]).is_err());
        let ex = Excitation::double(3, 0, 5, 2).unwrap();
        assert_eq!(ex.occupied(), &[0, 3]);
        assert_eq!(ex.virtuals(), &[2, 5]);
    }

    #[test]
    fn pool_members_act_on_reference() {
        let store = IntegralStore::zeros(5, 3, 2).unwrap();
        let hf = store.hf_determinant();
        for ex in enumerate_singles_doubles(&store) {
            assert!(
                apply_spin_orbital_ops(hf, ex.virtuals(), ex.occupied()).is_some(),
                "{ex}"
            );
        }
    }

    #[test]
    fn selection_by_magnitude() {
        assert!(select_large_factors(&[0.3, -0.5, 0.1], 0).is_empty());
        assert_eq!(select_large_factors(&[0.3, -0.5, 0.1], 2), vec![1, 0]);
        assert_eq!(select_large_factors(&[0.3, 0.0, -0.1], 10), vec![0, 2]);
        assert_eq!(select_large_factors(&[0.2, -0.2, 0.2], 2), vec![0, 1]);
        assert_eq!(
            select_large_factors(&[0.9, f64::INFINITY, -0.1, f64::INFINITY], 3),
            vec![1, 3, 0]
        );
    }

    #[test]
    fn singles_and_zero_numerators_have_zero_amplitude() {
        let mut store = IntegralStore::zeros(2, 1, 1).unwrap();
        store.set_h(0, 0, -1.0);
        store.set_h(1, 1, 0.5);
        let pool = enumerate_singles_doubles(&store);
        assert_eq!(mp2_amplitudes(&store, &pool), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn degenerate_denominator_is_infinite() {
        let mut store = IntegralStore::zeros(2, 1, 1).unwrap();
        store.set_g(0, 1, 0, 1, 0.2);
        // Virtual orbital energy h_11 - (10|01) vanishes, as do the occupied ones.
        store.set_h(1, 1, 0.2);
        let pool = enumerate_singles_doubles(&store);
        let amps = mp2_amplitudes(&store, &pool);
        assert_eq!(amps[2], f64::INFINITY);
        assert_eq!(select_large_factors(&amps, 1), vec![2]);
    }
}
