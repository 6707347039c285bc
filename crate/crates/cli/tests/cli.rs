use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn fires(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fires")).args(args).output().expect("spawn fires")
}

fn small_critical(out: &Path, threads: &str) -> Output {
    fires(&[
        "--suite", "critical", "--n", "1e3,1e4", "--replicas", "40", "--seed", "7", "--threads", threads,
        "--discretization", "1e4", "--out", out.to_str().unwrap(),
    ])
}

#[test]
fn demo_suite_passes_and_writes_outputs() {
    let dir = TempDir::new().unwrap();
    let out = fires(&["--suite", "cuttree-demo", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().all(|l| l.starts_with("PASS")), "{stdout}");
    let text = fs::read_to_string(dir.path().join("cuttree_demo.txt")).unwrap();
    assert!(!text.is_empty());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("cuttree_demo_summary.json")).unwrap()).unwrap();
    assert!(summary["report"]["checks"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn fixed_seed_output_is_byte_identical_across_runs_and_thread_counts() {
    let (a, b, c) = (TempDir::new().unwrap(), TempDir::new().unwrap(), TempDir::new().unwrap());
    for (dir, threads) in [(&a, "1"), (&b, "1"), (&c, "2")] {
        let out = small_critical(dir.path(), threads);
        assert!(matches!(out.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let read = |d: &TempDir| fs::read(d.path().join("critical_replicas.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_eq!(read(&a), read(&c));
}

#[test]
fn config_file_matches_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    let via_file = dir.path().join("file");
    let via_flags = dir.path().join("flags");
    fs::write(
        &cfg,
        format!(
            "# small critical run\nsuite = critical\nn = 1e3,1e4\nreplicas = 40\nseed = 7\ndiscretization = 1e4\nout = {}\n",
            via_file.display()
        ),
    )
    .unwrap();
    let out = fires(&["--config", cfg.to_str().unwrap()]);
    assert!(matches!(out.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&out.stderr));
    small_critical(&via_flags, "1");
    assert_eq!(
        fs::read(via_file.join("critical_replicas.csv")).unwrap(),
        fs::read(via_flags.join("critical_replicas.csv")).unwrap()
    );
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(fires(&["--suite", "critical", "--c", "1", "--p", "0.5"]).status.code(), Some(2));
    assert_eq!(fires(&["--suite", "critical", "--n", "0"]).status.code(), Some(2));
    assert_eq!(fires(&["--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(fires(&["--suite", "critical", "--p", "1.5"]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let out = fires(&["--suite", "cuttree-demo", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let missing = dir.path().join("missing.cfg");
    assert_eq!(fires(&["--config", missing.to_str().unwrap()]).status.code(), Some(3));
}
