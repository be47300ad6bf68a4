use std::path::Path;
use std::process::{Command as Process, Output};

use plemelj_cli::commands::fitted_order;
use plemelj_cli::{CliError, Command, Data, Geometry, RunConfig};

fn plemelj(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_plemelj")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn config_round_trips() {
    let default = RunConfig::default();
    assert_eq!(RunConfig::from_json(&default.to_json().unwrap()).unwrap(), default);
    let custom = RunConfig {
        command: Command::Converge,
        geometry: Geometry::Deformed { eps: 0.05, mode: 3 },
        sizes: vec![64, 128, 256],
        seed: 42,
        data: Data::Random,
        shift: [1.5, -0.25],
        ..RunConfig::default()
    };
    assert_eq!(RunConfig::from_json(&custom.to_json().unwrap()).unwrap(), custom);
    // every field has a default
    assert_eq!(RunConfig::from_json("{}").unwrap(), default);
    let partial = RunConfig::from_json(r#"{"geometry": {"kind": "sphere", "radius": 2.0}, "n": 3}"#).unwrap();
    assert_eq!(partial.geometry, Geometry::Sphere { radius: 2.0 });
    assert!(partial.validate().is_ok());
}

#[test]
fn dimension_must_match_geometry() {
    let c = RunConfig {
        geometry: Geometry::Sphere { radius: 1.0 },
        ..RunConfig::default()
    };
    assert_eq!(c.validate().unwrap_err().exit_code(), 1);
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(CliError::CheckFailed("x".into()).exit_code(), 4);
    assert_eq!(CliError::Core(plemelj::Error::IllConditioned { estimate: 1e9 }).exit_code(), 3);
    assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
}

#[test]
fn fitted_orders() {
    let sizes = [64, 128, 256, 512];
    let values: Vec<f64> = sizes.iter().map(|&n| 3.0 * (n as f64).powi(-2)).collect();
    assert!((fitted_order(&sizes, &values).unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(fitted_order(&sizes, &[0.5; 4]), None);
    assert_eq!(fitted_order(&sizes, &[1e-16, 3e-16, 2e-16, 1e-16]), None);
}

#[test]
fn mesh_command_writes_the_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = plemelj(&["--command", "mesh", "--N", "128", "--out", out]);
    assert!(o.status.success(), "{o:?}");
    let mesh = read_json(&dir.path().join("mesh.json"));
    assert_eq!(mesh["nodes"].as_array().unwrap().len(), 128);
    assert!(stdout(&o).contains("validation: pass"));
}

#[test]
fn sphere_mesh_reports_its_area() {
    let dir = tempfile::tempdir().unwrap();
    let o = plemelj(&["--command", "mesh", "--geometry", "sphere", "--N", "162", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let line = stdout(&o).lines().find(|l| l.starts_with("total |sigma|")).unwrap().to_string();
    let area: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((area - 4.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn large_deformation_exits_with_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = plemelj(&[
        "--command", "mesh", "--geometry", "deformed", "--eps", "0.9", "--mode", "2", "--N", "64", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("node pair") || String::from_utf8_lossy(&o.stderr).contains("tangent"));
}

#[test]
fn verify_sweep_passes_and_single_runs_have_no_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = plemelj(&["--command", "verify", "--N", "64,128", "--out", out]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v = read_json(&dir.path().join("verify.json"));
    assert!(v["reports"][0]["identities"][0]["ratio"].is_number());

    let o = plemelj(&["--command", "verify", "--N", "64", "--out", out]);
    assert!(o.status.success());
    let v = read_json(&dir.path().join("verify.json"));
    assert!(v["reports"][0]["identities"][0].get("ratio").is_none());
}

#[test]
fn impossible_caps_exit_with_check_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "verify", "N": [32], "tolerances": {"identity": 1e-14}}"#).unwrap();
    let o = plemelj(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn decompose_of_one_is_interior() {
    let dir = tempfile::tempdir().unwrap();
    let o = plemelj(&["--command", "decompose", "--N", "64", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let csv = std::fs::read_to_string(dir.path().join("decompose.csv")).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "f_plus_0_re").unwrap();
    for line in csv.lines().skip(1) {
        let v: f64 = line.split(',').nth(col).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-6);
    }
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "szego", "N": [48], "data": "random", "seed": 9}"#).unwrap();
    let names = ["szego.csv", "szego.json", "config.json"];
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = plemelj(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert!(o.status.success(), "{o:?}");
        runs.push(names.map(|n| std::fs::read(dir.path().join(n)).unwrap()));
    }
    assert_eq!(runs[0], runs[1]);
    let recorded = read_json(&dir.path().join("config.json"));
    assert_eq!(recorded["seed"], 9);
}

#[test]
fn limits_writes_one_row_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let o = plemelj(&["--command", "limits", "--N", "64", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let csv = std::fs::read_to_string(dir.path().join("limits_interior.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert_eq!(csv.lines().next(), Some("k,s_k,L2_error"));
}

#[test]
fn mobius_reports_the_operative_reading() {
    let dir = tempfile::tempdir().unwrap();
    let o = plemelj(&["--command", "mobius", "--N", "64", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let v = read_json(&dir.path().join("mobius.json"));
    let entries = v["entries"].as_array().unwrap();
    assert!(entries.iter().any(|e| e["check"] == "intertwining_a0" && e["operative_reading"].is_string()));
}

#[test]
fn maximal_writes_reports_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command": "maximal", "N": [32], "functions": 2, "samples_per_cone": 8}"#).unwrap();
    let o = plemelj(&["--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    assert!(dir.path().join("maximal_01.csv").exists());
    let s = read_json(&dir.path().join("maximal_summary.json"));
    assert_eq!(s["functions"], 2);
}

#[test]
fn converge_fits_orders_and_rejects_short_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = plemelj(&["--command", "converge", "--N", "64", "--out", out]);
    assert_eq!(o.status.code(), Some(1));

    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"command": "converge", "N": [32, 64, 128], "functions": 1, "samples_per_cone": 4, "depth": 4}"#,
    )
    .unwrap();
    let o = plemelj(&["--config", cfg.to_str().unwrap(), "--out", out]);
    assert!(o.status.success(), "{o:?}");
    let v = read_json(&dir.path().join("converge.json"));
    let col = v["columns"].as_array().unwrap().iter().find(|c| c["name"] == "C^2 = I/4").unwrap();
    assert!(col["order"].as_f64().unwrap() >= 1.5);
    let exact = v["columns"].as_array().unwrap().iter().find(|c| c["name"] == "S+ + S- = I").unwrap();
    assert_eq!(exact["status"], "exact");
    let csv = std::fs::read_to_string(dir.path().join("converge.csv")).unwrap();
    assert!(csv.lines().last().unwrap().starts_with("order,"));
}

#[test]
fn eps_needs_the_deformed_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let o = plemelj(&["--command", "mesh", "--eps", "0.1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
