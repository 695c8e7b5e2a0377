//! End-to-end binary tests: spawn the real executable, check files and
//! exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn qmlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmlab"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name))
        .unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap_or_else(|e| panic!("parsing {name}: {e}"))
}

#[test]
fn solve_defaults_give_the_hydrogen_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmlab(dir.path(), &["solve", "--potential", "coulomb"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report = json(dir.path(), "solve.json");
    assert_eq!(report["schema"], 1);
    let state = &report["states"][0];
    let energy = state["energy"].as_f64().unwrap();
    let ev = state["energy_ev"].as_f64().unwrap();
    assert!((energy + 0.5).abs() < 1e-4, "energy {energy}");
    assert!((ev + 13.6).abs() < 0.01, "eV {ev}");
    assert_eq!(state["method"], "dense");
    let meta = json(dir.path(), "run_meta.json");
    assert_eq!(meta["command"], "solve");
    assert_eq!(meta["parameters"]["n"], "4000");
}

#[test]
fn scatter_single_angle_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmlab(dir.path(), &["scatter", "--mu", "0.5", "--p", "1", "--theta", "180"]);
    assert!(out.status.success());
    let csv = read(dir.path(), "scattering.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "theta_deg,q,f,dcs");
    let row: Vec<f64> =
        lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row.len(), 4);
    assert!((row[0] - 180.0).abs() < 1e-9);
    assert!((row[1] - 2.0).abs() < 1e-12, "q = {}", row[1]);
    // f = 2/(q² + μ²) = 2/4.25
    assert!((row[2] - 0.47058823529411764).abs() < 1e-9, "f = {}", row[2]);
    // f and dcs are rounded to 12 digits independently
    assert!((row[3] - row[2] * row[2]).abs() < 1e-12);
    assert!(lines.next().is_none());
}

#[test]
fn scatter_default_sweep_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmlab(dir.path(), &["scatter"]);
    assert!(out.status.success());
    let csv = read(dir.path(), "scattering.csv");
    let dcs: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(dcs.len(), 36);
    for pair in dcs.windows(2) {
        assert!(pair[1] < pair[0]);
    }
}

#[test]
fn identical_configs_give_byte_identical_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = qmlab(dir.path(), &["decompose", "--n", "800", "--p-bins", "400"]);
        assert!(out.status.success());
        let out = qmlab(dir.path(), &["energetics", "--n", "800"]);
        assert!(out.status.success());
    }
    // data files must match byte for byte; run_meta.json records the
    // out-dir and so is the one file allowed to differ
    assert_eq!(read(a.path(), "momentum.csv"), read(b.path(), "momentum.csv"));
    assert_eq!(read(a.path(), "energetics.csv"), read(b.path(), "energetics.csv"));
    assert_eq!(read(a.path(), "energetics.json"), read(b.path(), "energetics.json"));
}

#[test]
fn momentum_csv_schema_and_zero_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmlab(dir.path(), &["decompose", "--n", "800", "--p-bins", "400"]);
    assert!(out.status.success());
    let csv = read(dir.path(), "momentum.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "p,a,a_sq_times_4pi_p2");
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 0.0);
    assert!((first[1] - 0.9003).abs() < 1e-3, "a(0) = {}", first[1]);
    assert_eq!(first[2], 0.0);
}

#[test]
fn config_file_is_used_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "strength = 0.5\nn = 800\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    // with strength s the ground level sits at −s²/2
    let out = qmlab(dir.path(), &["solve", "--config", cfg]);
    assert!(out.status.success());
    let energy = json(dir.path(), "solve.json")["states"][0]["energy"].as_f64().unwrap();
    assert!((energy + 0.125).abs() < 1e-3, "energy {energy}");

    let out = qmlab(dir.path(), &["solve", "--config", cfg, "--strength", "1.0"]);
    assert!(out.status.success());
    let energy = json(dir.path(), "solve.json")["states"][0]["energy"].as_f64().unwrap();
    assert!((energy + 0.5).abs() < 1e-3, "energy {energy}");
}

#[test]
fn usage_errors_exit_two_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmlab(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    let out = qmlab(dir.path(), &["solve", "--potential", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("solve.json").exists());

    let out = qmlab(dir.path(), &["solve", "--n", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("solve.json").exists());

    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "not_a_key = 1\n").unwrap();
    let out = qmlab(dir.path(), &["solve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn physics_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // eight bound levels cannot fit in this well at this box size
    let out = qmlab(dir.path(), &["solve", "--count", "8", "--r-max", "10", "--n", "500"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn lab_units_add_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmlab(dir.path(), &["energetics", "--n", "800", "--units", "lab"]);
    assert!(out.status.success());
    let csv = read(dir.path(), "energetics.csv");
    assert_eq!(csv.lines().next().unwrap(), "r,psi2,KE,C,PE,E,r_m,KE_ev,C_ev,PE_ev,E_ev");
    let first_r_m: f64 =
        csv.lines().nth(1).unwrap().split(',').nth(6).unwrap().parse().unwrap();
    // first node at h = 0.05 bohr
    assert!((first_r_m - 0.05 * 5.29177e-11).abs() < 1e-15);
}

#[test]
fn propagate_emits_ledger_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmlab(
        dir.path(),
        &[
            "propagate",
            "--potential",
            "free",
            "--x-min",
            "-20",
            "--x-max",
            "20",
            "--nodes",
            "256",
            "--x0",
            "0",
            "--sigma",
            "1",
            "--p0",
            "0",
            "--dt",
            "0.01",
            "--steps",
            "100",
            "--stride",
            "50",
            "--mask",
            "false",
        ],
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let ledger = read(dir.path(), "ledger.csv");
    let mut lines = ledger.lines();
    assert_eq!(lines.next().unwrap(), "t,norm,KE,PE,E");
    let rows: Vec<Vec<f64>> =
        lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert!((row[1] - 1.0).abs() < 1e-8, "norm {}", row[1]);
        assert_eq!(row[3], 0.0);
    }
    let snapshots = read(dir.path(), "snapshots.csv");
    assert_eq!(snapshots.lines().next().unwrap(), "t,node,re_psi,im_psi");
    assert_eq!(snapshots.lines().count(), 1 + 3 * 256);
}

#[test]
fn verify_passes_and_writes_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = qmlab(dir.path(), &["verify"]);
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS criterion  1"));
    assert!(!text.contains("FAIL"));
    let verdict = json(dir.path(), "verdict.json");
    assert_eq!(verdict["schema"], 1);
    assert_eq!(verdict["pass"], true);
    let checks = verdict["checks"].as_array().unwrap();
    assert!(checks.len() >= 20);
    for check in checks {
        assert_eq!(check["pass"], true);
        for key in ["name", "anchor", "expected", "computed", "tol"] {
            assert!(!check[key].is_null(), "missing {key}");
        }
    }
}
