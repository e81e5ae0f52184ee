use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cobar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobar")).args(args).output().expect("run cobar")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write_table(dir: &Path, from: &str, to: &str) -> String {
    let text = cobar_core::invariants::GENERATOR_TABLE;
    assert!(text.contains(from));
    let path = dir.join("table.txt");
    std::fs::write(&path, text.replace(from, to)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn ext_mod_i4_is_exterior_times_polynomial() {
    let out = cobar(&["ext", "--ideal", "4", "--smax", "4", "--tmax", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["schema"], "cobar/1");
    let mut cells: Vec<(u64, u64)> = doc["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| {
            assert_eq!(g["free_rank"], 1);
            (g["s"].as_u64().unwrap(), g["t"].as_u64().unwrap())
        })
        .collect();
    cells.sort();
    // b^k at (2k, 40k) and a b^k at (2k+1, 40k+8)
    let mut want: Vec<(u64, u64)> = (0..=2).flat_map(|k| [(2 * k, 40 * k), (2 * k + 1, 40 * k + 8)]).filter(|&(s, _)| s <= 4).collect();
    want.sort();
    assert_eq!(cells, want);
}

#[test]
fn corrupted_table_row_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let table = write_table(dir.path(), "(1/200)*(2*D5^2", "(1/200)*(3*D5^2");
    let out = cobar(&["gen-table", "--table", &table]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["first_failure"], "generator table / Δ10");
}

#[test]
fn built_in_table_passes() {
    let out = cobar(&["gen-table"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["records"].as_array().unwrap().len(), 23);
    assert!(doc["rows"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = cobar(&["ext", "--ideal", "2", "--smax", "3", "--tmax", "96", "--out", d.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let read = |d: &Path| std::fs::read(d.join("ext.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cobar(&["ext", "--ideal", "7"]).status.code(), Some(2));
    assert_eq!(cobar(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cobar(&["chart", "--source", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(cobar(&["bockstein", "--k", "4", "--page", "0"]).status.code(), Some(2));
}

#[test]
fn chart_from_ext_with_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = cobar(&["ext", "--ideal", "4", "--smax", "3", "--tmax", "96", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let overlay = dir.path().join("overlay.txt");
    std::fs::write(&overlay, "d 1 (0,0) -> (1,8) test\n").unwrap();
    let src = dir.path().join("ext.json");
    let out = cobar(&["chart", "--source", src.to_str().unwrap(), "--overlay", overlay.to_str().unwrap(), "--out", d]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let svg = std::fs::read_to_string(dir.path().join("ext.svg")).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert!(dir.path().join("ext.txt").exists());
    let doc: Value = serde_json::from_slice(&std::fs::read(dir.path().join("chart.json")).unwrap()).unwrap();
    assert!(doc["lines"].as_u64().unwrap() >= 2);

    // an arrow into an empty cell is reported
    std::fs::write(&overlay, "d 1 (0,16) -> (1,24) nothing\n").unwrap();
    let out = cobar(&["chart", "--source", src.to_str().unwrap(), "--overlay", overlay.to_str().unwrap(), "--out", d]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bockstein_pages_chart() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = cobar(&["bockstein", "--k", "4", "--page", "1", "--smax", "2", "--tmax", "64", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&std::fs::read(dir.path().join("bockstein.json")).unwrap()).unwrap();
    assert_eq!(doc["page"], "1");
    assert!(!doc["entries"].as_array().unwrap().is_empty());
    let src = dir.path().join("bockstein.json");
    let out = cobar(&["chart", "--source", src.to_str().unwrap(), "--format", "text", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("bockstein.txt").exists());
}

#[test]
fn verify_reports_tagged_checks() {
    let out = cobar(&["verify", "--criteria", "1,3", "--capped", "--smax", "3", "--tmax", "80"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = json(&out);
    assert!(doc["results"].as_array().unwrap().iter().all(|r| r["tag"].as_str().is_some_and(|t| !t.is_empty())));
    assert!(doc["first_failure"].is_null());
}

#[test]
fn axioms_pass_in_a_small_window() {
    let out = cobar(&["axioms", "--tmax", "80"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["results"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}
