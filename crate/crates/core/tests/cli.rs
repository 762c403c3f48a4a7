use std::path::Path;
use std::process::{Command, Output};

fn axiswirl(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_axiswirl"))
        .args(args)
        .current_dir(cwd)
        .env("AXISWIRL_THREADS", "2")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn blowup_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        "lambda0 = 2.0\nomega0 = 0.0\nhorizon = 10.0\n",
    );
    let out = axiswirl(&["integrate", "--config", &cfg, "--out", "o"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("o/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["terminal_status"], "blow_up_detected");
    assert_eq!(summary["t_blow_predicted"], 1.0);
}

#[test]
fn regular_runs_exit_with_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        "lambda0 = 2.0\nomega0 = 1.0\nhorizon = 10.0\n",
    );
    let out = axiswirl(&["integrate", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("out/trajectory.csv").is_file());

    let out = axiswirl(&["check-lemma", "--out", "lemma"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("lemma/lemma_narrow-cell.json").is_file());
}

#[test]
fn pde_sim_prints_the_residual_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "p.toml",
        "mode = \"pde_sim\"\nhorizon = 0.1\n[grid]\nnr = 16\nnz = 16\n[pde]\ndt = 0.02\n",
    );
    let out = axiswirl(
        &["pde-sim", "--config", &cfg, "--format", "binary", "-v"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("residual"));
    assert!(stdout.contains("strain_max"));
    assert!(dir.path().join("out/snapshot_00000.bin").is_file());
}

#[test]
fn errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = axiswirl(&["closed-form", "--config", "nope.toml"], dir.path());
    assert_eq!(missing.status.code(), Some(1));

    let cfg = write(
        dir.path(),
        "bad.toml",
        "mode = \"pde_sim\"\nhorizon = 1.0\n",
    );
    let out = axiswirl(&["pde-sim", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`grid`"));

    let out = axiswirl(&["integrate", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1), "mode mismatch");
}
