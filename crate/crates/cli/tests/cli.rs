use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fgs").chain(args.iter().copied());
    let code = fgs_cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn symmetric_set_has_frequency_one_half() {
    let v = json(&["eq", "freqs", "--edges", "-2,-1,1,2"]);
    let omega = floats(&v["omega"]);
    assert_eq!(omega.len(), 1);
    assert!((omega[0] - 0.5).abs() < 1e-12);
    assert_eq!(v["nodes_used"], 256);
}

#[test]
fn dso_spectrum_edges() {
    let v = json(&["jacobi", "spectrum", "--dso", "--b", "1,-1"]);
    let s5 = 5f64.sqrt();
    let want = [-s5, -1.0, 1.0, s5];
    for (x, w) in floats(&v["edges"]).iter().zip(want) {
        assert!((x - w).abs() < 1e-9);
    }
}

#[test]
fn automatic_polynomial_makes_dso_stationary() {
    let v = json(&["toda", "defect", "--dso", "--b", "1,-1", "--poly", "auto"]);
    assert!(v["defect"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["W"], 100);
    assert_eq!(v["degP"], 2);
}

#[test]
fn explicit_polynomial_and_window() {
    // z is not stationary for a nonconstant potential
    let v = json(&[
        "toda", "defect", "--dso", "--b", "1,-1", "--poly", "0,1", "--w", "40",
    ]);
    assert!(v["defect"].as_f64().unwrap() > 0.1);
    let (code, _, err) = run(&[
        "toda", "defect", "--dso", "--b", "1,-1", "--poly", "0,1", "--w", "5",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("too small"));
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["eq", "freqs", "--edgez", "1,2"]);
    assert_eq!(code, 2);
    assert!(err.contains("--edgez"));
    let (code, _, err) = run(&["eq", "freqs", "--edges", "1,x"]);
    assert_eq!(code, 2);
    assert!(err.contains("--edges"));
    let (code, _, _) = run(&["eq", "freqs"]);
    assert_eq!(code, 2);
    let (code, _, err) = run(&["set", "validate", "--edges", "0,2,1,3"]);
    assert_eq!(code, 1);
    assert!(err.contains("increasing"));
    let (code, _, _) = run(&["eq", "density", "--edges", "-2,2", "--x", "3"]);
    assert_eq!(code, 1);
    let (code, _, err) = run(&["toda", "rhs", "--b", "1,2"]);
    assert_eq!(code, 2);
    assert!(err.contains("--a"));
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("scan"));
}

#[test]
fn json_files_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let set = dir.path().join("set.json");
    std::fs::write(&set, r#"{"edges": [-2.0, 2.0]}"#).unwrap();
    let v = json(&["eq", "capacity", "--in", set.to_str().unwrap()]);
    assert!((v["capacity"].as_f64().unwrap() - 1.0).abs() < 1e-8);

    let op = dir.path().join("op.json");
    std::fs::write(&op, r#"{"period": 2, "a": [1.0, 1.0], "b": [1.0, -1.0]}"#).unwrap();
    let v = json(&["toda", "stationary-poly", "--in", op.to_str().unwrap()]);
    assert_eq!(v["display"], "z^2");
    let v = json(&["jacobi", "shift", "--in", op.to_str().unwrap()]);
    assert_eq!(floats(&v["b"]), vec![-1.0, 1.0]);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"period": 3, "a": [1.0], "b": [1.0]}"#).unwrap();
    let (code, _, _) = run(&["jacobi", "floquet", "--in", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["jacobi", "floquet", "--in", "/nonexistent/x.json"]);
    assert_eq!(code, 2);
}

#[test]
fn critpoly_density_jacobian() {
    let v = json(&["eq", "critpoly", "--edges", "-2,-1,1,2"]);
    for r in floats(&v["residuals"]) {
        assert!(r.abs() < 1e-9);
    }
    let v = json(&["eq", "density", "--edges", "-2,2", "--x", "0"]);
    let d = floats(&v["density"])[0];
    assert!((d - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);
    let v = json(&["eq", "jacobian", "--edges", "-2,-1,1,2"]);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["jacobian"].as_array().unwrap().len(), 1);
}

#[test]
fn relation_from_frequencies_or_set() {
    let v = json(&["relation", "find", "--omega", "0.25,0.5", "--qmax", "4"]);
    assert!(!v["relation"].is_null());
    assert_eq!(v["denominator"], 4);
    let v = json(&["relation", "find", "--edges", "-2,-1,1,2", "--qmax", "2"]);
    assert_eq!(v["relation"]["q"], serde_json::json!([2]));
    assert_eq!(v["relation"]["k"], 1);
}

#[test]
fn flow_writes_versioned_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flow.csv");
    let v = json(&[
        "toda",
        "flow",
        "--a",
        "1,0.8",
        "--b",
        "0.3,-0.2",
        "--t-end",
        "0.1",
        "--dt",
        "0.001",
        "--every",
        "10",
        "--csv",
        path.to_str().unwrap(),
    ]);
    let gm = floats(&v["geometric_mean_a"]);
    assert!((gm[0] - gm[1]).abs() < 1e-10);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# fgs toda-flow csv v1");
    assert_eq!(lines.next().unwrap(), "t,a_1,a_2,b_1,b_2,floquet_defect");
    assert_eq!(lines.count(), 11);
}

#[test]
fn recursion_report() {
    let v = json(&[
        "toda",
        "recursion",
        "--b0",
        "0",
        "--b1",
        "1",
        "--c",
        "3",
        "--length",
        "10",
    ]);
    assert_eq!(v["closed_over_seeds"], true);
    assert_eq!(floats(&v["values"]), vec![0.0, 1.0, 2.0]);
}

#[test]
fn scan_is_reproducible_and_flags_injected_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let args = [
        "scan",
        "run",
        "--count",
        "6",
        "--seed",
        "9",
        "--inject-dso",
        "0.3,-0.2,0.7",
        "--csv",
        csv.to_str().unwrap(),
    ];
    let (c1, out1, _) = run(&args);
    let (c2, out2, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(out1, out2);
    let v: Value = serde_json::from_str(&out1).unwrap();
    let first = &v["records"][0];
    assert_eq!(first["injected"], true);
    assert_eq!(first["denominator"], 3);
    assert_eq!(v["summary"]["sampled"], 6);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# fgs scan csv v1\n"));
    assert_eq!(text.lines().count(), 2 + 7);

    let (code, _, err) = run(&["scan", "run", "--count", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("count"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_fgs");
    let ok = Command::new(bin)
        .args(["set", "validate", "--edges", "-1,1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let env = Command::new(bin)
        .args(["eq", "freqs", "--edges", "-2,-1,1,2"])
        .env("FGS_DEFAULT_NODES", "64")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&env.stdout).unwrap();
    assert_eq!(v["nodes_used"], 64);
    let env = Command::new(bin)
        .args(["eq", "freqs", "--edges", "-2,-1,1,2"])
        .env("FGS_DEFAULT_NODES", "many")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}
