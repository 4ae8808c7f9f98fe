use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.fcidump"))
}

fn qucc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qucc"))
        .args(args)
        .output()
        .unwrap()
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn plain_run_is_single_shot() {
    let out = qucc(&["run", path(&fixture("h2_sto3g")), "--m-large", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["iterations"], 1);
    assert_eq!(v["converged"], true);
    assert_eq!(v["m_large"], 0);
    assert_eq!(v["eigen_spectrum"].as_array().unwrap().len(), 3);
    for key in [
        "e_hf",
        "e0_corr",
        "e_quad",
        "e_total",
        "epsilon",
        "pool_size",
        "large",
        "theta_min",
        "trace",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v.get("e_fci").is_none());
}

#[test]
fn h2_run_matches_fci_command() {
    let h2 = fixture("h2_sto3g");
    let run = qucc(&["run", path(&h2), "--m-large", "1", "--epsilon", "0.1"]);
    let fci = qucc(&["fci", path(&h2)]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(fci.status.code(), Some(0));
    let e_total = json(&run)["e_total"].as_f64().unwrap();
    let e_fci = json(&fci)["energy"].as_f64().unwrap();
    assert!((e_total - e_fci).abs() < 1e-8);
}

#[test]
fn with_fci_adds_reference_energy() {
    let out = qucc(&["run", path(&fixture("water_sto3g")), "--with-fci"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let err = v["e_total"].as_f64().unwrap() - v["e_fci"].as_f64().unwrap();
    assert!(err.abs() < 1.6e-3);
}

#[test]
fn missing_file_names_the_path() {
    let out = qucc(&["run", "missing.fcidump"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing.fcidump"));
    assert!(out.stdout.is_empty());
}

#[test]
fn parse_error_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.fcidump");
    std::fs::write(
        &file,
        "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n0.5 1 1 1 1\n0.2 1 1 3 1\n",
    )
    .unwrap();
    let out = qucc(&["run", path(&file)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
}

#[test]
fn unconverged_run_exits_two() {
    let out = qucc(&[
        "run",
        path(&fixture("h4_chain_2.5")),
        "--m-large",
        "6",
        "--max-iter",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["converged"], false);
}

#[test]
fn bad_flags_exit_one() {
    assert_eq!(
        qucc(&["run", path(&fixture("h2_sto3g")), "--epsilon", "-1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qucc(&["run", path(&fixture("h2_sto3g")), "--m-large", "x"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"m_large": 4, "epsilon": 0.05, "max_iterations": 20}"#,
    )
    .unwrap();
    let h4 = fixture("h4_chain_2.0");
    let from_file = json(&qucc(&["run", path(&h4), "--config", path(&config)]));
    assert_eq!(from_file["m_large"], 4);
    assert_eq!(from_file["epsilon"], 0.05);
    let overridden = json(&qucc(&[
        "run",
        path(&h4),
        "--config",
        path(&config),
        "--m-large",
        "2",
    ]));
    assert_eq!(overridden["m_large"], 2);
    assert_eq!(overridden["epsilon"], 0.05);
}

#[test]
fn runs_are_byte_identical() {
    let water = fixture("water_sto3g");
    let a = qucc(&["run", path(&water), "--m-large", "3"]);
    let b = qucc(&["run", path(&water), "--m-large", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fci_command() {
    let out = qucc(&["fci", path(&fixture("h2_sto3g"))]);
    let v = json(&out);
    assert!(v["energy"].as_f64().unwrap() < v["e_hf"].as_f64().unwrap());
    assert_eq!(v["dimension"], 4);
    let again = qucc(&["fci", path(&fixture("h2_sto3g"))]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn fci_dimension_cap_exits_three() {
    let out = qucc(&["fci", path(&fixture("water_sto3g")), "--max-dim", "100"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("441"));
}

const HEADER: [&str; 11] = [
    "label",
    "e_hf",
    "e_fci",
    "e0_corr",
    "e_quad",
    "e_total",
    "m_large",
    "epsilon",
    "iterations",
    "converged",
    "error",
];

fn scan(manifest: &str, extra: &[&str]) -> (Output, Vec<csv::StringRecord>) {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("scan.csv");
    std::fs::write(&file, manifest).unwrap();
    let mut args = vec!["scan", path(&file)];
    args.extend_from_slice(extra);
    let out = qucc(&args);
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_reader(out.stdout.as_slice());
    let header = reader.headers().cloned().unwrap_or_default();
    if out.status.code() != Some(1) {
        assert_eq!(header.iter().collect::<Vec<_>>(), HEADER);
    }
    let rows = reader.records().collect::<Result<Vec<_>, _>>().unwrap();
    (out, rows)
}

fn h4_manifest() -> String {
    ["1.0", "1.5", "2.0", "2.5"]
        .iter()
        .map(|r| format!("{r},{}\n", path(&fixture(&format!("h4_chain_{r}")))))
        .collect()
}

fn column(row: &csv::StringRecord, name: &str) -> f64 {
    let i = HEADER.iter().position(|h| *h == name).unwrap();
    row[i].parse().unwrap()
}

#[test]
fn singleton_scan() {
    let (out, rows) = scan(&format!("h2,{}\n", path(&fixture("h2_sto3g"))), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "h2");
    assert_eq!(&rows[0][2], "");
    assert_eq!(&rows[0][10], "");
}

#[test]
fn h4_scan_against_fci() {
    let (out, with_ref) = scan(&h4_manifest(), &["--m-large", "2", "--with-fci"]);
    assert_eq!(out.status.code(), Some(0));
    let labels: Vec<&str> = with_ref.iter().map(|r| &r[0]).collect();
    assert_eq!(labels, ["1.0", "1.5", "2.0", "2.5"]);
    for row in &with_ref {
        let err = column(row, "e_total") - column(row, "e_fci");
        assert!(err.is_finite() && err.abs() < 1e-2, "{row:?}");
        let sum = column(row, "e_hf") + column(row, "e0_corr") + column(row, "e_quad");
        assert!((sum - column(row, "e_total")).abs() < 1e-10);
    }
    let (_, plain) = scan(&h4_manifest(), &["--m-large", "0", "--with-fci"]);
    let stretched = |rows: &[csv::StringRecord]| {
        (column(&rows[3], "e_total") - column(&rows[3], "e_fci")).abs()
    };
    assert!(stretched(&plain) > stretched(&with_ref));
}

#[test]
fn scan_output_is_deterministic() {
    let (a, _) = scan(&h4_manifest(), &["--m-large", "3"]);
    let (b, _) = scan(&h4_manifest(), &["--m-large", "3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failed_rows_keep_their_label() {
    let manifest = format!(
        "ok,{}\nbroken,does-not-exist.fcidump\n",
        path(&fixture("h2_sto3g"))
    );
    let (out, rows) = scan(&manifest, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[1][0], "broken");
    assert!(rows[1][10].contains("does-not-exist.fcidump"));
    assert_eq!(&rows[1][5], "");
}

#[test]
fn empty_manifest_exits_one() {
    let (out, _) = scan("# nothing\n\n", &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no geometries"));
}
