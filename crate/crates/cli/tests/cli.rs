use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringcurrent"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn manifest(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn simulate_decoupled_run_keeps_unit_current() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("z.csv");
    let o = run(&["simulate", "--gamma", "0", "--tmax-fs", "10", "--cutoff", "2", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(header.join(","), "t_fs,L_e,L_1,L_2,L_3,norm,energy_au");
    assert!(rows.len() > 5);
    assert!(rows.iter().all(|r| r[1] == "1"));
    let m = manifest(&dir.path().join("z.manifest.json"));
    assert_eq!(m["command"], "simulate");
    assert_eq!(m["model"]["gamma"], 0.0);
    assert_eq!(m["model"]["cutoff"], 2);
    assert_eq!(m["model"]["modes"].as_array().unwrap().len(), 3);
    assert_eq!(m["propagation"]["dimension"], 1458);
    assert_eq!(m["propagation"]["dt_au"], 1.0);
    assert_eq!(m["propagation"]["record_stride"], 20);
    assert_eq!(m["csv"], "z.csv");
}

#[test]
fn simulate_starts_from_the_initial_state_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = run(&["simulate", "--cutoff", "3", "--tmax-fs", "5", "--space", "sector", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (_, rows) = read_csv(&a);
    assert_eq!(rows[0].join(","), "0,1,0,0,0,1,0");
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let m = manifest(&dir.path().join("a.manifest.json"));
    assert_eq!(m["propagation"]["space"], "sector L_total=+1");
}

#[test]
fn simulate_reads_a_mode_table() {
    let dir = tempfile::tempdir().unwrap();
    let modes = dir.path().join("modes.txt");
    fs::write(&modes, "# single mode\n1000 0.5\n").unwrap();
    let out = dir.path().join("one.csv");
    let o = run(&[
        "simulate", "--modes", modes.to_str().unwrap(), "--cutoff", "4", "--tmax-fs", "5", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(header.join(","), "t_fs,L_e,L_1,norm,energy_au");
    for r in &rows {
        let le: f64 = r[1].parse().unwrap();
        let l1: f64 = r[2].parse().unwrap();
        assert!((le + l1 - 1.0).abs() < 1e-10);
    }
    let m = manifest(&dir.path().join("one.manifest.json"));
    assert_eq!(m["model"]["modes"][0]["omega_cm1"], 1000.0);
}

#[test]
fn invalid_flags_exit_with_usage_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    for args in [
        vec!["simulate", "--gamma", "abc", "--out", out],
        vec!["simulate", "--gamma", "-1", "--out", out],
        vec!["simulate", "--dt-au", "0", "--out", out],
        vec!["simulate", "--stride", "0", "--out", out],
        vec!["simulate", "--modes", "/nonexistent/modes.txt", "--out", out],
        vec!["simulate"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert!(!Path::new(out).exists());
}

#[test]
fn sweep_writes_one_row_per_gamma() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = run(&[
        "sweep", "--gammas", "0,0.5,1,2", "--cutoff", "3", "--tmax-fs", "40", "--space", "sector", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(header.join(","), "gamma,t_first_min_fs,L_e_avg,L_1_avg,L_2_avg,L_3_avg,revival_peak");
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0][0], "0");
    assert_eq!(rows[0][1], "nan");
    assert_eq!(rows[0][2], "1");
    let t: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(t[0] > t[1] && t[1] > t[2], "{t:?}");
    for r in &rows[1..] {
        let sum: f64 = r[2..6].iter().map(|v| v.parse::<f64>().unwrap()).sum();
        assert!((sum - 1.0).abs() < 1e-6);
    }
    let m = manifest(&dir.path().join("sweep.manifest.json"));
    let notes = m["sweep"]["notes"].as_array().unwrap();
    assert_eq!(notes.len(), 1);
    assert_eq!(notes[0]["gamma"], 0.0);
    assert_eq!(m["sweep"]["gammas"].as_array().unwrap().len(), 4);
    assert!(m["model"].get("gamma").is_none());
}

#[test]
fn sweep_with_an_empty_grid_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let out = out.to_str().unwrap();
    let o = run(&["sweep", "--gamma-min", "2", "--gamma-max", "1", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["sweep", "--gammas", "1,0.5", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_by_default() {
    let o = run(&["verify"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}\n{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout.contains("dense oracle"));
    assert_eq!(stdout.matches("PASS").count(), 7, "{stdout}");
}

#[test]
fn verify_catches_a_corrupted_sign_convention() {
    let o = run(&["verify", "--corrupt-ln-sign", "--cutoff", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("commutator"), "{stderr}");
}

#[test]
fn verify_trivial_model_passes() {
    let o = run(&["verify", "--cutoff", "0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn verify_skips_the_oracle_beyond_its_size_limit() {
    let o = run(&["verify", "--cutoff", "3"]);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{stdout}");
    assert!(stdout.contains("SKIP"));
}
