use std::io::Write;
use std::process::{Command, Output};

use rigidkit::relations::SUITES;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidkit")).args(args).output().expect("run binary")
}

fn json(args: &[&str]) -> (Option<i32>, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code(), v)
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn temp_json(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

#[test]
fn verify_passes() {
    let (code, v) = json(&["verify", "--suite", "h-mult-so", "--family", "so", "--m", "4", "--n", "3", "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["samples"], 1000);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["spec"]["family"], "so");
    assert!(v["max_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn side_condition_is_a_usage_error() {
    let o = run(&["verify", "--suite", "rot-so", "--family", "so", "--m", "4", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("side condition m−n ≥ 2 violated"), "{}", stderr(&o));
    assert!(!stderr(&o).contains("panicked"));
}

#[test]
fn malformed_spec_is_a_usage_error() {
    let o = run(&["verify-all", "--family", "so", "--m", "2", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m ≥ n ≥ 3 required"));
    let o = run(&["verify", "--suite", "nope", "--family", "so", "--m", "4", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["roots", "--family", "so", "--m", "4"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["roots", "--family", "sp", "--m", "4", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn tolerance_override_from_environment() {
    let args = ["verify", "--suite", "h-mult-so", "--family", "so", "--m", "4", "--n", "3", "--samples", "20"];
    let o = Command::new(env!("CARGO_BIN_EXE_rigidkit")).args(args).env("RIGIDKIT_TOL", "1e-300").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_rigidkit")).args(args).env("RIGIDKIT_TOL", "1e-6").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn roots_table() {
    let (code, v) = json(&["roots", "--family", "su", "--m", "4", "--n", "3", "--json"]);
    assert_eq!(code, Some(0));
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 24);
    let short = roots.iter().find(|r| r["label"] == "L1").unwrap();
    assert_eq!(short["multiplicity"], 2);
}

#[test]
fn verify_all_covers_the_registry() {
    let (code, v) = json(&["verify-all", "--family", "su", "--m", "3", "--n", "3", "--samples", "20", "--json"]);
    assert_eq!(code, Some(0));
    let mut seen: Vec<String> = v["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["suite"].as_str().unwrap().to_string())
        .chain(v["skipped"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap().to_string()))
        .collect();
    seen.sort();
    let mut all: Vec<String> = SUITES.iter().map(|s| s.to_string()).collect();
    all.sort();
    assert_eq!(seen, all);
    let rot = v["skipped"].as_array().unwrap().iter().find(|s| s["suite"] == "rot-su").unwrap();
    assert!(rot["reason"].as_str().unwrap().contains("m−n ≥ 2"));
}

#[test]
fn text_and_json_flags_agree() {
    let a = run(&["roots", "--family", "so", "--m", "4", "--n", "3", "--json"]);
    let b = run(&["roots", "--family", "so", "--m", "4", "--n", "3", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let t = run(&["roots", "--family", "so", "--m", "4", "--n", "3"]);
    assert!(String::from_utf8_lossy(&t.stdout).starts_with("SO+(4,3): 18 roots"));
}

#[test]
fn lyapunov_splitting() {
    let (code, v) = json(&["lyapunov", "--family", "so", "--m", "4", "--n", "3", "--t", "3,2,1", "--brackets", "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["total"], 21);
    assert_eq!(v["zero_multiplicity"], 3);
    let s = &v["splitting"];
    assert_eq!((s["stable_dim"].as_u64(), s["unstable_dim"].as_u64(), s["neutral_dim"].as_u64()), (Some(9), Some(9), Some(3)));
    assert_eq!(v["bracket_generation"]["rank"], 21);
    let (_, v) = json(&["lyapunov", "--family", "su", "--m", "3", "--n", "3", "--t", "-1,2,-3", "--json"]);
    assert_eq!(v["splitting"]["stable_dim"], 15);
}

#[test]
fn stable_cycle_cases() {
    let (code, v) = json(&["stable-cycle", "--roots", "L1-L2,L2-L3,L1", "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["feasible"], true);
    assert!(v["values"].as_array().unwrap().iter().all(|x| x.as_f64().unwrap() < 0.0));
    let (_, v) = json(&["stable-cycle", "--roots", "L1-L2,L2-L1", "--json"]);
    assert_eq!(v["feasible"], false);
    let o = run(&["stable-cycle", "--roots", "3L1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn genplane_reports_witness() {
    let (code, v) = json(&["genplane", "--v1", "1,0,0", "--v2", "0,1,0", "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["generic"], false);
    assert!(v["witness"].as_array().unwrap().iter().any(|w| w == "L3"));
    let (_, v) = json(&["genplane", "--v1", "1,2,6", "--v2", "3,-1,2", "--json"]);
    assert!(v["generic"].is_boolean());
}

#[test]
fn normalform_round_trip() {
    let (c, s) = (0.6f64, 0.8f64);
    let m = format!(
        r#"{{"size": 3, "entries": [[{c},0],[{ms},0],[0,0],[{s},0],[{c},0],[0,0],[0,0],[0,0],[1,0]]}}"#,
        ms = -s
    );
    let f = temp_json(&m);
    let (code, v) = json(&["normalform", "--family", "so", "--k", "3", "--matrix", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["row_lengths"], serde_json::json!([2, 1]));
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
    let o = run(&["normalform", "--family", "so", "--k", "1", "--matrix", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduce_cancels() {
    let w = r#"[{"root": "L1-L2", "param": {"t": 1.5}, "exp": 1},
               {"root": "L1-L2", "param": {"t": 1.5}, "exp": -1},
               {"root": "L3", "param": {"a": [0.0]}, "exp": 1},
               {"root": "L1+L2", "param": {"t": 2.0}, "exp": 1},
               {"root": "L1+L2", "param": {"t": 0.5}, "exp": 1}]"#;
    let f = temp_json(w);
    let (code, v) = json(&["reduce", "--word", f.path().to_str().unwrap(), "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["input_length"], 5);
    assert_eq!(v["word"], serde_json::json!([{"root": "L1+L2", "param": {"t": 2.5}, "exp": 1}]));
}

#[test]
fn trace_pairing_corner() {
    let a = "[[1,0],[0,0],[0,0]]";
    let (code, v) = json(&["trace-pairing", "--family", "su", "--m", "6", "--n", "3", "--a", a, "--b", a, "--json"]);
    assert_eq!(code, Some(0));
    assert!((v["lhs"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((v["rhs"].as_f64().unwrap() - 3.0).abs() < 1e-9);
    let o = run(&["trace-pairing", "--family", "su", "--m", "6", "--n", "3", "--a", "[[2,0],[0,0],[0,0]]", "--b", a]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn chain_certificate() {
    let (code, v) = json(&["chain", "--family", "so", "--m", "4", "--n", "3", "--root", "L1-L2", "--param", r#"{"t": 2.0}"#, "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["in_group"], true);
    assert_eq!(v["reflection_checked"], true);
    assert_eq!(v["factors"].as_array().unwrap().len(), 3);
    assert_eq!(v["w"]["size"], 7);
}

#[test]
fn byte_identical_reruns() {
    let args = ["verify", "--suite", "conj-su", "--family", "su", "--m", "5", "--n", "3", "--samples", "100", "--json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
