mod common;

use std::collections::BTreeSet;

use common::{fixture, reference};
use qucc_core::{
    enumerate_singles_doubles, mp2_amplitudes, select_large_factors, Excitation, Hamiltonian,
    IntegralStore,
};

/// Every Sz-conserving single and double from occupied to virtual spin
/// orbitals, found by scanning all index tuples.
fn brute_force_pool(store: &IntegralStore) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let n = store.n_spin_orbitals();
    let occ: Vec<usize> = (0..n).filter(|&p| store.is_reference_occupied(p)).collect();
    let virt: Vec<usize> = (0..n)
        .filter(|&p| !store.is_reference_occupied(p))
        .collect();
    let spin = |ps: &[usize]| {
        ps.iter()
            .map(|p| if p % 2 == 0 { 1i32 } else { -1 })
            .sum::<i32>()
    };
    let mut out = BTreeSet::new();
    for &i in &occ {
        for &a in &virt {
            if spin(&[i]) == spin(&[a]) {
                out.insert((vec![i], vec![a]));
            }
        }
    }
    for &i in &occ {
        for &j in &occ {
            for &a in &virt {
                for &b in &virt {
                    if i < j && a < b && spin(&[i, j]) == spin(&[a, b]) {
                        out.insert((vec![i, j], vec![a, b]));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn pool_matches_brute_force_enumeration() {
    for (name, expected) in [("h2_sto3g", 3), ("h4_chain_1.5", 26), ("water_sto3g", 140)] {
        let store = fixture(name);
        let pool = enumerate_singles_doubles(&store);
        let found: BTreeSet<_> = pool
            .iter()
            .map(|e| (e.occupied().to_vec(), e.virtuals().to_vec()))
            .collect();
        assert_eq!(found.len(), pool.len(), "{name}: duplicates in pool");
        assert_eq!(found, brute_force_pool(&store), "{name}");
        assert_eq!(pool.len(), expected, "{name}");
        let first_double = pool.iter().position(|e| e.rank() == 2).unwrap();
        assert!(pool[..first_double].iter().all(|e| e.rank() == 1));
        assert!(pool[first_double..].iter().all(|e| e.rank() == 2));
    }
}

#[test]
fn pool_is_deterministic() {
    let store = fixture("water_sto3g");
    assert_eq!(
        enumerate_singles_doubles(&store),
        enumerate_singles_doubles(&store)
    );
    let pool = enumerate_singles_doubles(&store);
    assert_eq!(mp2_amplitudes(&store, &pool), mp2_amplitudes(&store, &pool));
}

#[test]
fn h2_amplitude_by_hand() {
    let store = fixture("h2_sto3g");
    let pool = enumerate_singles_doubles(&store);
    let amps = mp2_amplitudes(&store, &pool);
    assert_eq!(&amps[..2], &[0.0, 0.0]);
    // <01||23> reduces to the exchange integral (01|01) over spatial orbitals.
    let eps = &reference("h2_sto3g").mo_energy;
    let expected = store.g(0, 1, 0, 1) / (2.0 * eps[0] - 2.0 * eps[1]);
    assert!(
        (amps[2] - expected).abs() < 1e-7,
        "{} vs {expected}",
        amps[2]
    );
    assert!(amps[2] < 0.0);
}

#[test]
fn amplitudes_reproduce_mp2_correlation_energy() {
    for name in ["h2_sto3g", "water_sto3g"] {
        let store = fixture(name);
        let ham = Hamiltonian::new(&store);
        let pool = enumerate_singles_doubles(&store);
        let amps = mp2_amplitudes(&store, &pool);
        let e2: f64 = pool
            .iter()
            .zip(&amps)
            .filter(|(e, _)| e.rank() == 2)
            .map(|(e, t)| {
                let (o, v) = (e.occupied(), e.virtuals());
                t * ham.antisym(o[0], o[1], v[0], v[1])
            })
            .sum();
        let expected = reference(name).e_mp2_corr;
        assert!((e2 - expected).abs() < 1e-8, "{name}: {e2} vs {expected}");
    }
}

#[test]
fn selection_orders_by_magnitude() {
    let store = fixture("water_sto3g");
    let pool = enumerate_singles_doubles(&store);
    let amps = mp2_amplitudes(&store, &pool);
    let picked = select_large_factors(&amps, 10);
    assert_eq!(picked.len(), 10);
    assert!(picked
        .windows(2)
        .all(|w| amps[w[0]].abs() >= amps[w[1]].abs()));
    let smallest = amps[*picked.last().unwrap()].abs();
    let rest = (0..pool.len()).filter(|k| !picked.contains(k));
    assert!(rest.into_iter().all(|k| amps[k].abs() <= smallest));
    assert!(picked.iter().all(|&k| pool[k].rank() == 2));
}

#[test]
fn excitation_validation() {
    assert!(Excitation::new(vec![0, 1], vec![2]).is_err());
    assert!(Excitation::new(vec![0, 0], vec![2, 4]).is_err());
    assert!(Excitation::new(vec![0, 2], vec![2, 4]).is_err());
    assert!(Excitation::single(0, 3).is_err());
    let e = Excitation::new(vec![1, 0], vec![3, 2]).unwrap();
    assert_eq!(e.occupied(), &[0, 1]);
    assert_eq!(e.to_string(), "0,1->2,3");
}
