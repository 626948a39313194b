use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn prodloop(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prodloop"))
        .env("PRODLOOP_OUT", out)
        .args(args)
        .output()
        .expect("binary runs")
}

/// The single run directory created under `out`.
fn run_dir(out: &Path) -> PathBuf {
    let dirs: Vec<PathBuf> = fs::read_dir(out).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs[0].clone()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn density_csv_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prodloop(tmp.path(), &["density", "--points", "27"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dir = run_dir(tmp.path());
    assert!(dir.file_name().unwrap().to_str().unwrap().starts_with("density-"));
    let csv = fs::read_to_string(dir.join("density.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,rho");
    assert_eq!(lines.len(), 28);
    let m = json(&dir.join("manifest.json"));
    assert_eq!(m["subcommand"], "density");
    assert_eq!(m["status"], "ok");
    assert_eq!(m["files"][0], "density.csv");
}

#[test]
fn map_counts_and_polynomial() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prodloop(tmp.path(), &["enumerate-maps", "-m", "2", "--profile", "2", "--inversion"]);
    assert!(o.status.success());
    let dir = run_dir(tmp.path());
    let text = fs::read_to_string(dir.join("polynomial.txt")).unwrap();
    assert!(text.contains("moment: 3*N + N^-1"), "{text}");
    let csv = fs::read_to_string(dir.join("maps.csv")).unwrap();
    assert_eq!(csv, "genus,count\n0,3\n1,1\n");
}

#[test]
fn invalid_profile_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prodloop(tmp.path(), &["enumerate-maps", "--profile", "0"]);
    assert!(!o.status.success());
    let m = json(&run_dir(tmp.path()).join("manifest.json"));
    assert_eq!(m["status"], "failed");
}

#[test]
fn solve_writes_table() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prodloop(tmp.path(), &["solve", "--chi-max", "2"]);
    assert!(o.status.success());
    let dir = run_dir(tmp.path());
    let text = fs::read_to_string(dir.join("table.txt")).unwrap();
    assert!(text.contains("w_{1,1}(z) = (z^4 + 7*z^3 + 21*z^2 + 24*z + 9)/(z^2 (2*z + 3)^4)"), "{text}");
    let table = json(&dir.join("table.json"));
    let entries = table.as_array().unwrap();
    // (0,1), (0,2), (0,3), (1,1), (0,4), (1,2)
    assert_eq!(entries.len(), 6);
    assert!(entries.iter().all(|e| e["w"]["num"]["variables"].is_array()));
}

#[test]
fn moments_csv_and_conjectures() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prodloop(tmp.path(), &["moments", "--chi-max", "1", "--max-order", "4", "--max-points", "2"]);
    assert!(o.status.success());
    let dir = run_dir(tmp.path());
    let csv = fs::read_to_string(dir.join("moments.csv")).unwrap();
    assert!(csv.starts_with("g,k1,k2,value,provenance\n"));
    assert!(csv.contains("\n0,4,4,326700,resolvent-residue\n"), "{csv}");
    assert!(csv.contains("\n0,3,,12,resolvent-residue\n"));
    let rep = json(&dir.join("conjectures.json"));
    assert_eq!(rep["planar_two_point_confirmed"], true);
    assert_eq!(rep["genus_one_confirmed"], true);
}

#[test]
fn montecarlo_flags_override_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("mc.toml");
    fs::write(&cfg, "n = [6, 8, 10]\nsamples = 150\nkmax = 2\nseed = 3\n").unwrap();
    let out = tmp.path().join("runs");
    let o = prodloop(&out, &["montecarlo", "--config", cfg.to_str().unwrap(), "--samples", "200", "--bins", "10", "--density-samples", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dir = run_dir(&out);
    let rep = json(&dir.join("montecarlo.json"));
    assert_eq!(rep["settings"]["samples"], 200);
    assert_eq!(rep["settings"]["seed"], 3);
    assert_eq!(rep["settings"]["n"], serde_json::json!([6, 8, 10]));
    assert_eq!(rep["runs"].as_array().unwrap().len(), 3);
    assert!(!rep["fits"].as_array().unwrap().is_empty());
    let hist = fs::read_to_string(dir.join("histogram.csv")).unwrap();
    assert_eq!(hist.lines().count(), 11);
}

#[test]
fn montecarlo_rejects_unknown_config_keys() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("mc.toml");
    fs::write(&cfg, "samplez = 10\n").unwrap();
    let out = tmp.path().join("runs");
    let o = prodloop(&out, &["montecarlo", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn verify_fast_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let o = prodloop(tmp.path(), &["verify", "--fast"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}");
    let rep = json(&run_dir(tmp.path()).join("report.json"));
    assert_eq!(rep["mode"], "fast");
    assert_eq!(rep["passed"], true);
    let checks = rep["checks"].as_array().unwrap();
    assert!(checks.len() >= 15);
    assert!(checks.iter().all(|c| c["anchor"].is_string() && c["passed"] == true));
}
