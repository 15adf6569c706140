use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopf-trunc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn close(v: &Value, want: f64) -> bool {
    (v.as_f64().unwrap() - want).abs() < 1e-12
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", "fourier:4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["pass"], true);

    let bad = run(&["validate", "tensor(fourier:2,"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("byte"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ones.json");
    fs::write(&path, r#"{"n":2,"entries":[[[1,0],[1,0]],[[1,0],[1,0]]]}"#).unwrap();
    let spec = format!("file={}", path.display());
    let fail = run(&["validate", &spec]);
    assert_eq!(fail.status.code(), Some(1));
    assert!(close(&json(&fail)["orthogonality_deviation"], 2.0));
}

#[test]
fn measure_formats() {
    let out = run(&["measure", "fourier:3", "-r", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let atoms = json(&out)["atoms"].as_array().unwrap().clone();
    assert_eq!(atoms.len(), 2);
    assert!(close(&atoms[0]["x"], 0.0) && close(&atoms[0]["w"], 0.666666666666667));
    assert!(close(&atoms[1]["x"], 3.0) && close(&atoms[1]["w"], 0.333333333333333));

    let zero = json(&run(&["measure", "fourier:3", "-r", "0"]));
    assert_eq!(zero["atoms"].as_array().unwrap().len(), 1);
    assert!(close(&zero["atoms"][0]["x"], 3.0) && close(&zero["atoms"][0]["w"], 1.0));

    let csv = run(&["measure", "fourier:3", "-r", "2", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines, ["x,w", "0,0.666666666666667", "3,0.333333333333333"]);

    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("mu.svg");
    let out = run(&["measure", "fourier:4", "-r", "1", "--format", "svg", "--out", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.matches(r#"class="atom""#).count() == 2);
}

#[test]
fn moments_and_cesaro() {
    let t = json(&run(&["moments", "fourier:2", "--p-max", "3", "--r-max", "3"]));
    for p in 0..3 {
        for r in 1..=3 {
            assert!(close(&t["gamma"][p][r], 0.5));
        }
    }
    let csv = String::from_utf8(run(&["moments", "fourier:2", "--p-max", "1", "--r-max", "1", "--format", "csv"]).stdout).unwrap();
    assert_eq!(csv.lines().collect::<Vec<_>>(), ["p,r,c,gamma", "1,0,2,1", "1,1,1,0.5"]);

    let c = json(&run(&["cesaro", "fourier:3", "-p", "2", "--k-max", "4"]));
    assert_eq!(c["haar"]["rounded"], 3);
    assert_eq!(c["haar"]["converged"], true);
    assert_eq!(run(&["cesaro", "fourier:3", "-p", "2", "--k-max", "1"]).status.code(), Some(2));
}

#[test]
fn checks_and_bench() {
    let d = run(&["duality", "dita(2,2;seed=7)", "--p-max", "4", "--r-max", "4"]);
    assert_eq!(d.status.code(), Some(0));
    let rep = json(&d);
    assert_eq!(rep["matrix"], "dita(2,2;seed=7)");
    assert_eq!(rep["grid"].as_array().unwrap().len(), 4);

    let strict = run(&["duality", "dita(2,2;seed=7)", "--p-max", "3", "--r-max", "3", "--tol", "1e-30"]);
    assert_eq!(strict.status.code(), Some(1));

    let dc = run(&["dita-check", "2", "3", "seed=7", "--p-max", "3", "--r-max", "3"]);
    assert_eq!(dc.status.code(), Some(0));
    assert_eq!(json(&dc)["atoms_match"], true);

    let b = run(&["bench", "2", "2", "seed=7", "-p", "3", "-r", "3", "--reps", "5"]);
    assert_eq!(b.status.code(), Some(0));
    let rep = json(&b);
    assert_eq!(rep["verified"], true);
    for key in ["M", "N", "p", "r", "dense_ms", "structured_ms", "speedup"] {
        assert!(rep.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn cap_and_usage_errors() {
    assert_eq!(run(&["moments", "fourier:6", "--p-max", "2", "--r-max", "5", "--cap", "1000"]).status.code(), Some(3));
    assert_eq!(run(&["moments", "fourier:2", "--p-max", "0", "--r-max", "1"]).status.code(), Some(2));
    assert_eq!(run(&["moments", "fourier:2", "--p-max", "1", "--r-max", "1", "--format", "svg"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "fourier:2", "-r", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["dita-check", "2", "2", "seed=x", "--p-max", "1", "--r-max", "1"]).status.code(), Some(2));
}

#[test]
fn dump_round_trip_gives_identical_tables() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("h.json");
    let out = run(&["validate", "dita(2,2;seed=13)", "--dump", dump.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let spec = format!("file={}", dump.display());
    let a = run(&["moments", "dita(2,2;seed=13)", "--p-max", "3", "--r-max", "3"]).stdout;
    let b = run(&["moments", &spec, "--p-max", "3", "--r-max", "3"]).stdout;
    assert_eq!(a, b);

    let gen = dir.path().join("gen.json");
    run(&["gen", "dita(2,2;seed=13)", "--out", gen.to_str().unwrap()]);
    assert_eq!(fs::read(&gen).unwrap(), fs::read(&dump).unwrap());
}
