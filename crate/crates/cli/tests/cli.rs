use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wigner-codes"))
        .args(args)
        .env_remove("WIGNER_CODES_TOL")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wigner-codes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn maximally_mixed(q: usize) -> String {
    let rows: Vec<Value> = (0..q)
        .map(|i| Value::from((0..q).map(|j| vec![if i == j { 1.0 / q as f64 } else { 0.0 }, 0.0]).collect::<Vec<_>>()))
        .collect();
    serde_json::json!({"dim": q, "entries": rows}).to_string()
}

#[test]
fn binary_simplex_codewords() {
    let v = json(&["code", "simplex", "--q", "2"]);
    assert_eq!(v["N"], 3);
    assert_eq!(v["k"], 2);
    assert_eq!(v["d"], 2);
    assert_eq!(v["codewords"], serde_json::json!([[0, 0, 0], [1, 0, 1], [0, 1, 1], [1, 1, 0]]));
}

#[test]
fn hamming_weights() {
    let v = json(&["code", "weights", "--q", "3", "--which", "hamming"]);
    assert_eq!(v["weights"], serde_json::json!([1, 0, 0, 8, 0]));
    assert!(v.get("codewords").is_none());
}

#[test]
fn maximally_mixed_wigner_table() {
    let path = temp_file("maxmix.json", &maximally_mixed(3));
    let v = json(&["wigner", "--q", "3", "--state", path.to_str().unwrap(), "--negativity", "--polytope"]);
    let table = v["table"].as_array().unwrap();
    assert_eq!(table.len(), 3);
    for entry in table.iter().flat_map(|r| r.as_array().unwrap()) {
        assert!((entry.as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-9);
    }
    assert!((v["sum"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["negativity"], 0.0);
    assert_eq!(v["polytope"]["member"], true);
}

#[test]
fn verify_all_reports_the_purity_average() {
    let out = run(&["verify", "all", "--q", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.728395061728"));
    assert!(text.contains("59/81"));
    assert!(text.contains("12/12 MUB states non-negative"));
}

#[test]
fn output_is_repeatable() {
    for args in [
        &["verify", "all", "--q", "5", "--seed", "11"][..],
        &["mub", "table", "--q", "4"],
        &["code", "cosets", "--q", "3"],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn field_info_lists_powers() {
    let v = json(&["field", "info", "--q", "4"]);
    assert_eq!(v["spec"]["modulus"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["alpha"], 2);
    let powers: Vec<u64> = v["alpha_powers"].as_array().unwrap().iter().map(|p| p["index"].as_u64().unwrap()).collect();
    assert_eq!(powers, [1, 2, 3]);
}

#[test]
fn distance_closed_forms() {
    let v = json(&["distance", "--q", "3", "--r", "0,0,0,0", "--s", "1,1,1,1"]);
    assert_eq!(v["delta"], 4);
    assert!((v["hs"].as_f64().unwrap() - 8f64.sqrt()).abs() < 1e-12);
}

#[test]
fn facet_operator_has_unit_trace() {
    let v = json(&["facet", "--q", "3", "--label", "0,1,2,0"]);
    assert!((v["trace"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((v["trace_sq"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    assert_eq!(v["operator"]["dim"], 3);
}

#[test]
fn validation_errors_exit_with_two() {
    let bad = temp_file("bad.json", "{\"dim\": 3,\n \"entries\": [[1, 2]");
    let cases: Vec<Vec<&str>> = vec![
        vec!["bogus"],
        vec!["code", "simplex", "--q", "6"],
        vec!["field", "info", "--q", "9", "--modulus", "1,0,1"],
        vec!["facet", "--q", "3", "--label", "0,1,3,0"],
        vec!["wigner", "--q", "3", "--state", bad.to_str().unwrap()],
        vec!["distance", "--q", "3", "--r", "0,0", "--s", "0,0,0,0"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(&["wigner", "--q", "3", "--state", bad.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn tolerance_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_wigner-codes"))
        .args(["mub", "verify", "--q", "3"])
        .env("WIGNER_CODES_TOL", "1e-30")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["tolerance"].as_f64().unwrap() / 1e-30 - 1.0).abs() < 1e-12);
    // roundoff in the overlaps exceeds this tolerance
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(v["pass"], false);
}
