//! Runs the `heat-content` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_heat-content");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).current_dir(env!("CARGO_TARGET_TMPDIR")).output().expect("binary runs")
}

fn write_config(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p
}

const DIRICHLET: &str = r#"
[model]
regime = "flat"
m = 1
delta2 = 1.0

[[phi]]
mode = []
coeffs = [[1, 0]]

[[rho]]
mode = []
coeffs = [[1, 0]]

[oracle]
n = 128
richardson = false
"#;

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn coeffs_reports_the_dirichlet_boundary_term() {
    let out_json = scratch("flat-coeffs.json");
    let cfg = configs().join("flat-m1.toml");
    let out = run(&["coeffs", "--config", cfg.to_str().unwrap(), "--json", out_json.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("-2.256758334191e0"));
    let v = json(&out_json);
    assert_eq!(v["schema_version"], 1);
    let b1 = v["coefficients"][1]["value"]["re"].as_f64().unwrap();
    assert!((b1 + 4.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
}

#[test]
fn coeffs_json_is_deterministic() {
    let cfg = configs().join("twisted-m2.toml");
    let (a, b) = (scratch("det-a.json"), scratch("det-b.json"));
    for p in [&a, &b] {
        assert!(run(&["coeffs", "--config", cfg.to_str().unwrap(), "--json", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn shipped_configs_parse() {
    for name in ["flat-m1", "twisted-m2", "warped-m2", "closed-circle"] {
        let cfg = configs().join(format!("{name}.toml"));
        let dump = scratch(&format!("{name}-coeffs.json"));
        let out = run(&["coeffs", "--config", cfg.to_str().unwrap(), "--json", dump.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn gapless_boundary_operator_is_a_math_domain_error() {
    let cfg = write_config("gapless.toml", &DIRICHLET.replace("delta2 = 1.0", "delta2 = 0.0"));
    let out = run(&["coeffs", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("r=0") && err.contains("mode []"), "{err}");
}

#[test]
fn bad_warp_is_a_config_error_with_its_path() {
    let text = std::fs::read_to_string(configs().join("warped-m2.toml"))
        .unwrap()
        .replace("warp = [0.0, 0.4, -0.4]", "warp = [0.0, 0.4]");
    let cfg = write_config("bad-warp.toml", &text);
    let out = run(&["coeffs", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("model.warp") && err.contains("line 6"), "{err}");
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = run(&["coeffs", "--config", "/nonexistent/run.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_writes_the_curve_and_records_refinement() {
    let cfg = write_config("dirichlet.toml", DIRICHLET);
    let csv = scratch("dirichlet.csv");
    let meta = scratch("dirichlet-sim.json");
    let out = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        meta.to_str().unwrap(),
        "--grid",
        "2x",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,beta_real,beta_imag"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 1.0).abs() < 1e-3);
    assert_eq!(json(&meta)["solver"]["n"], 256);
}

#[test]
fn closed_circle_decays_like_its_eigenvalue() {
    let csv = scratch("circle.csv");
    let cfg = configs().join("closed-circle.toml");
    let out = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        scratch("circle.json").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[1] - (-v[0]).exp()).abs() < 1e-8 && v[2].abs() < 1e-8, "{line}");
    }
}

#[test]
fn compare_passes_on_the_dirichlet_interval() {
    let report = scratch("flat-compare.json");
    let cfg = configs().join("flat-m1.toml");
    let out = run(&["compare", "--config", cfg.to_str().unwrap(), "--json", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&report);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
    assert_eq!(v["solver"]["richardson"], true);
}

#[test]
fn compare_fails_under_impossible_tolerances() {
    let cfg = write_config("strict.toml", &format!("{DIRICHLET}tolerances = [1e-12, 1e-12, 1e-12]\n"));
    let out = run(&["compare", "--config", cfg.to_str().unwrap(), "--json", scratch("strict.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn verify_suites() {
    let out = run(&["verify", "--suite", "algebra"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("PASS")));
    assert!(text.contains(" 0 failed"));
    assert_eq!(run(&["verify", "--suite", "everything"]).status.code(), Some(2));
}
