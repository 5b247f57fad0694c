use std::path::PathBuf;
use std::process::{Command, Output};

fn otto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otto"))
        .args(args)
        .output()
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("otto-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn error_category(out: &Output) -> String {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    v["error"]["category"].as_str().unwrap().to_string()
}

#[test]
fn cycle_prints_record() {
    let out = otto(&["cycle", "--limit"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["eta"].as_f64().unwrap() - 0.476111279105).abs() < 1e-9);
    assert_eq!(v["closed"], true);
}

#[test]
fn sweep_writes_csv_and_plot_script() {
    let csv = scratch("sweep.csv");
    let gp = scratch("sweep.gp");
    let out = otto(&[
        "sweep",
        "--out",
        csv.to_str().unwrap(),
        "--plot",
        gp.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("tau_cycle_ms,"));
    assert_eq!(text.lines().count(), 31);
    assert!(std::fs::read_to_string(&gp).unwrap().contains("multiplot"));
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let cfg = scratch("stoch.toml");
    std::fs::write(&cfg, "[sweep]\nsteps = 5\nn_traj = 200\n").unwrap();
    let a = otto(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "42",
        "--format",
        "json",
    ]);
    let b = otto(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "42",
        "--format",
        "json",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn trajectories_dump() {
    let cfg = scratch("traj.toml");
    std::fs::write(&cfg, "[trajectories]\nn_traj = 2000\n").unwrap();
    let out = otto(&["trajectories", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let total: u64 = v["quanta_histogram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .sum();
    assert_eq!(total, 2000);
    assert!(v["chi_square_p_value"].as_f64().unwrap() > 0.001);
}

#[test]
fn check_passes_on_defaults() {
    let out = otto(&["check"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn failures_report_a_category() {
    let out = otto(&["cycle", "--config", "/nonexistent/otto.toml"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_category(&out), "io");

    let bad = scratch("bad.toml");
    std::fs::write(&bad, "[cycle]\ntau_h = -1.0\n").unwrap();
    let out = otto(&["cycle", "--config", bad.to_str().unwrap()]);
    assert!(!out.status.success());
    assert_eq!(error_category(&out), "config");

    std::fs::write(&bad, "not = [valid").unwrap();
    let out = otto(&["check", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_category(&out), "parse");

    let out = otto(&[
        "plot",
        "/nonexistent.csv",
        "--out",
        scratch("x.gp").to_str().unwrap(),
    ]);
    assert_eq!(error_category(&out), "io");
}
