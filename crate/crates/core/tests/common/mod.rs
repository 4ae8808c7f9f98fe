#![allow(dead_code)]

pub mod fock;

use qucc_core::{parse_fcidump, IntegralStore};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const H4_SCAN: [&str; 4] = [
    "h4_chain_1.0",
    "h4_chain_1.5",
    "h4_chain_2.0",
    "h4_chain_2.5",
];

fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> IntegralStore {
    let path = fixture_dir().join(format!("{name}.fcidump"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_fcidump(&text).unwrap()
}

/// Values computed by PySCF when the fixtures were generated.
pub struct Reference {
    pub e_hf: f64,
    pub e_fci: f64,
    pub e_mp2_corr: f64,
    pub mo_energy: Vec<f64>,
}

pub fn reference(name: &str) -> Reference {
    let text = std::fs::read_to_string(fixture_dir().join("reference.json")).unwrap();
    let all: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = &all[name];
    Reference {
        e_hf: entry["e_hf"].as_f64().unwrap(),
        e_fci: entry["e_fci"].as_f64().unwrap(),
        e_mp2_corr: entry["e_mp2_corr"].as_f64().unwrap(),
        mo_energy: entry["mo_energy"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_f64().unwrap())
            .collect(),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
