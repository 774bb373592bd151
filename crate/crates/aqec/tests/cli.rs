use std::path::Path;
use std::process::{Command, Output};

fn aqec(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_aqec"));
    cmd.args(args).env_remove("AQEC_WORKERS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.cfg");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&aqec(&[], &[])), 1);
    assert_eq!(code(&aqec(&["frobnicate"], &[])), 1);
    assert_eq!(code(&aqec(&["recurrence", "--h", "3"], &[])), 1);
    assert_eq!(code(&aqec(&["run", "/nonexistent/run.cfg"], &[])), 1);
    assert_eq!(code(&aqec(&["verify", "/nonexistent/manifest.json"], &[])), 1);
    assert_eq!(code(&aqec(&["recurrence", "--h", "5", "--n", "4", "--p1", "0.5"], &[])), 1);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment = figE8\nunknown = 1\n");
    let o = aqec(&["run", &cfg], &[]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&aqec(&["--help"], &[])), 0);
    assert_eq!(code(&aqec(&["run", "--help"], &[])), 0);
}

#[test]
fn recurrence_prints_the_solution() {
    let o = aqec(&["recurrence", "--h", "2", "--n", "5", "--p1", "0.9"], &[]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "v,s_v,ln_s_v");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0,0,"));
    assert!(lines[4].starts_with("3,1,0"));
}

#[test]
fn bounds_reads_a_grid_file() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    std::fs::write(&grid, "op,ell,kappa,delta,n,t\ntheorem1,2,1,0.01,10,1\n").unwrap();
    let out = dir.path().join("out.csv");
    let o = aqec(&["bounds", "--grid", grid.to_str().unwrap(), "--output", out.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().next().unwrap().ends_with(",value"));
    assert_eq!(text.lines().count(), 2);
    assert_eq!(code(&aqec(&["bounds", "--grid", "/nonexistent.csv"], &[])), 1);
}

#[test]
fn run_verify_and_corruption_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), &format!("experiment = figE8\nworkers = 1\noutput = {}\n", out.display()));
    let o = aqec(&["run", &cfg, "--check"], &[("AQEC_WORKERS", "3")]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let manifest = out.join("manifest.json");
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["workers"], 3, "AQEC_WORKERS overrides the config");
    assert_eq!(code(&aqec(&["verify", manifest.to_str().unwrap()], &[])), 0);

    let victim = m["files"][0]["name"].as_str().unwrap();
    std::fs::write(out.join(victim), "x,y\n0,0\n").unwrap();
    let o = aqec(&["verify", manifest.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 2);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains(&format!("FAIL checksum {}", victim)), "{}", stdout);
}

#[test]
fn failed_check_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &format!("experiment = figE7\noutput = {}\n", dir.path().join("out").display()),
    );
    let o = aqec(&["run", &cfg, "--check"], &[]);
    let stdout = String::from_utf8_lossy(&o.stdout).to_string();
    let expected = if stdout.contains("FAIL") { 2 } else { 0 };
    assert_eq!(code(&o), expected, "{}", stdout);
}

#[test]
fn bad_worker_env_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("experiment = figE8\noutput = {}\n", dir.path().join("o").display()));
    assert_eq!(code(&aqec(&["run", &cfg], &[("AQEC_WORKERS", "0")])), 1);
    assert_eq!(code(&aqec(&["run", &cfg], &[("AQEC_WORKERS", "lots")])), 1);
}
