use std::path::Path;
use std::process::Command;

use bethe_lab::cli::{run, verify_suite, verify_suite_with, RunConfig, VerifyLevel};
use bethe_lab::grassmann::{sgn, Subset};
use serde_json::{json, Value};

const BIN: &str = env!("CARGO_BIN_EXE_bethe-lab");

fn model(k: usize, a: Value, lambda: f64, disorder: &str) -> Value {
    let m = a.as_array().unwrap().len();
    json!({"K": k, "m": m, "A": a, "lambda": lambda, "disorder": {"variant": disorder, "sigma": 1.0}})
}

fn write_config(dir: &Path, name: &str, config: &Value) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    path
}

fn run_bin(config: &Path, workers: Option<&str>) -> std::process::Output {
    let mut cmd = Command::new(BIN);
    cmd.arg("run").arg(config);
    match workers {
        Some(w) => cmd.env("BETHE_LAB_WORKERS", w),
        None => cmd.env_remove("BETHE_LAB_WORKERS"),
    };
    cmd.output().unwrap()
}

fn run_lib(config: Value) -> (i32, String) {
    let mut out = Vec::new();
    let outcome = run(serde_json::from_value(config).unwrap(), &mut out).unwrap();
    (outcome.exit_code, String::from_utf8(out).unwrap())
}

#[test]
fn interval_line() {
    let config = json!({"experiment": "interval", "model": model(4, json!([[-0.5, 0.0], [0.0, 0.5]]), 0.0, "Zero")});
    let (code, out) = run_lib(config);
    assert_eq!(code, 0);
    assert_eq!(out, "I_AK = (-1.5, 1.5)\n");
}

#[test]
fn interval_json_and_empty_case() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("interval.json");
    let config = json!({
        "experiment": "interval",
        "model": model(2, json!([[0.0, 0.0], [0.0, 5.0]]), 0.0, "Zero"),
        "output": {"json": json_path},
    });
    let (code, out) = run_lib(config);
    assert_eq!(code, 0);
    assert_eq!(out, "I_AK = empty\n");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(json_path).unwrap()).unwrap();
    assert_eq!(report["theorems_applicable"], json!(false));
    assert_eq!(report["free_spectrum"].as_array().unwrap().len(), 2);
}

#[test]
fn too_few_samples_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = json!({
        "experiment": "transport",
        "model": model(2, json!([[0.0]]), 0.1, "GOE"),
        "grids": {"E": [0.0], "eta": [0.1], "r_max": 5},
        "sampling": {"n_samples": 1, "seed": 1},
    });
    let out = run_bin(&write_config(dir.path(), "t.json", &config), None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at least 2 samples"));
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        json!({"experiment": "spectral_dance", "model": model(2, json!([[0.0]]), 0.0, "Zero")}),
        json!({"experiment": "interval", "model": model(1, json!([[0.0]]), 0.0, "Zero")}),
        json!({
            "experiment": "transport",
            "model": model(2, json!([[0.0]]), 0.1, "GOE"),
            "grids": {"E": [0.0], "eta": [0.1], "r_max": 5},
            "sampling": {"n_samples": 10},
        }),
        json!({
            "experiment": "transport",
            "model": model(2, json!([[0.0]]), 0.0, "Zero"),
            "grids": {"E": [], "eta": [0.1], "r_max": 5},
            "sampling": {"n_samples": 10, "seed": 1},
        }),
        json!({"experiment": "interval", "model": model(2, json!([[0.0]]), 0.0, "Zero"), "surprise": 1}),
    ];
    for (i, config) in cases.iter().enumerate() {
        let out = run_bin(&write_config(dir.path(), &format!("c{i}.json"), config), None);
        assert_eq!(out.status.code(), Some(2), "case {i}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let missing = run_bin(&dir.path().join("absent.json"), None);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn invalid_worker_override_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = json!({"experiment": "interval", "model": model(2, json!([[0.0]]), 0.0, "Zero")});
    let path = write_config(dir.path(), "i.json", &config);
    for bad in ["0", "-3", "many"] {
        assert_eq!(run_bin(&path, Some(bad)).status.code(), Some(2), "{bad}");
    }
    assert_eq!(run_bin(&path, Some("3")).status.code(), Some(0));
}

#[test]
fn verify_experiment_at_m2_n1() {
    let config = json!({
        "experiment": "verify",
        "model": model(2, json!([[0.0, 0.0], [0.0, 0.0]]), 0.0, "Zero"),
        "verify": {"n": 1},
    });
    let (code, out) = run_lib(config);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["m"], json!(2));
    assert_eq!(report["n"], json!(1));
    assert_eq!(report["failed"], json!(0));
    assert!(report["identities"].as_array().unwrap().iter().all(|r| r["pass"] == json!(true)));
}

#[test]
fn fast_suite_passes_within_budget() {
    let report = verify_suite(VerifyLevel::Fast);
    let failures: Vec<_> = report.identities.iter().filter(|r| !r.pass).collect();
    assert!(failures.is_empty(), "{failures:?}");
    assert!(report.seconds < 60.0);
    let names: Vec<&str> = report.identities.iter().map(|r| r.identity.as_str()).collect();
    for expected in [
        "pairing_expansion",
        "berezin_convention",
        "sgn2_double_computation",
        "super_taylor",
        "transform_involutions",
        "theorem_dt",
        "vector_expansion",
        "leibniz",
        "transform_quadrature_gate",
        "lambda0_three_way",
    ] {
        assert!(names.contains(&expected), "{expected} missing from {names:?}");
    }
}

#[test]
fn injected_sign_flip_fails_sgn2() {
    fn flipped(a: &[Subset]) -> i32 {
        if a.iter().any(|&s| s.count_ones() == 1) {
            -sgn(a)
        } else {
            sgn(a)
        }
    }
    let report = verify_suite_with(VerifyLevel::Fast, flipped);
    assert!(!report.pass);
    assert!(report.identities.iter().any(|r| r.identity == "sgn2_double_computation" && !r.pass));
    assert!(report.identities.iter().filter(|r| r.identity != "sgn2_double_computation").all(|r| r.pass));
}

#[test]
fn verify_subcommand() {
    let out = Command::new(BIN).args(["verify", "--level", "fast"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], json!(true));
    let out = Command::new(BIN).args(["verify", "--level", "medium"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transport_csv_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let mut paths = Vec::new();
    for workers in ["1", "8"] {
        let csv = dir.path().join(format!("scan{workers}.csv"));
        let config = json!({
            "experiment": "indicator",
            "model": model(2, json!([[0.0]]), 0.3, "DiagonalGaussianIID"),
            "grids": {"E": [0.0], "eta": [0.4, 0.2], "r_max": 12, "depth": 8},
            "sampling": {"n_samples": 600, "seed": 99},
            "output": {"csv": csv},
        });
        let out = run_bin(&write_config(dir.path(), &format!("w{workers}.json"), &config), Some(workers));
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        paths.push(csv);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("E,eta,lambda,r_max,J,J_stderr,indicator"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn deterministic_transport_to_stdout() {
    let config = json!({
        "experiment": "transport",
        "model": model(2, json!([[0.0]]), 0.0, "Zero"),
        "grids": {"E": [0.0, 0.5], "eta": [0.5], "r_max": "auto"},
        "sampling": {"n_samples": 2},
    });
    let (code, out) = run_lib(config);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 3);
    for row in &rows[1..] {
        let fields: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(fields[5], 0.0);
        assert_eq!(fields[6], fields[1].powi(3) * fields[4]);
    }
}

#[test]
fn green_wavepacket_plancherel_and_ward() {
    let free = model(2, json!([[0.0]]), 0.0, "Zero");
    let (code, out) = run_lib(json!({"experiment": "green", "model": free, "grids": {"E": [0.0], "eta": [1e-6]}}));
    assert_eq!(code, 0);
    let rows: Value = serde_json::from_str(&out).unwrap();
    let g = &rows[0]["halfspace"];
    assert!((g["im"][0][0].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-5);

    let (code, out) = run_lib(json!({"experiment": "wavepacket", "model": free, "grids": {"t": [0.0, 0.5], "ball": 4}}));
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,r2,r2_1"));
    assert_eq!(lines.next(), Some("0,0,0"));

    let (code, out) = run_lib(json!({"experiment": "plancherel", "model": free, "grids": {"eta": [10.0], "ball": 2}}));
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert!(report["rows"][0]["plancherel"]["reldiff"].as_f64().unwrap() < 1e-4);
    assert_eq!(report["rows"][0]["upper_bound"]["holds"], json!(true));

    let config = json!({
        "experiment": "ward",
        "model": free,
        "grids": {"E": [0.0], "eta": [0.2], "r_top": 2},
        "sampling": {"n_samples": 2},
    });
    let (code, out) = run_lib(config);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn config_round_trip() {
    let text = r#"{"experiment": "ward", "model": {"K": 3, "m": 1, "A": [[0.1]], "lambda": 0.2,
        "disorder": {"variant": "GOE", "sigma": 0.5}}, "grids": {"E": [0], "eta": [0.3], "r_top": 1},
        "sampling": {"n_samples": 100, "seed": 4, "sampler": {"kind": "pool", "pool_size": 512}}, "workers": 2}"#;
    let config = RunConfig::from_json(text).unwrap();
    let again = RunConfig::from_json(&serde_json::to_string(&config).unwrap()).unwrap();
    assert_eq!(config, again);
    assert!(config.validate().is_ok());
}
