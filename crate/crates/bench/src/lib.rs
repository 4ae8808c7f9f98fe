//! Fixture loading for the qUCC benchmarks.

use std::path::PathBuf;

use qucc_core::{parse_fcidump, IntegralStore};

/// Parses `fixtures/<name>.fcidump` from the workspace root.
pub fn fixture(name: &str) -> IntegralStore {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.fcidump"));
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    parse_fcidump(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
