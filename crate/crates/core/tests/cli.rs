//! End-to-end checks of the `cavity-echo` binary: exit codes, file outputs,
//! determinism across processes.

use std::path::Path;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cavity-echo"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    binary()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn verify_exits_zero_and_prints_the_table() {
    let out = binary().arg("verify").output().unwrap();
    assert!(out.status.success(), "verify failed: {out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("[PASS]"));
    assert!(!stdout.contains("[FAIL]"));
    assert!(stdout.contains("checks passed"));
}

#[test]
fn simulate_writes_byte_identical_files_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("config.toml"),
        "[protocol]\ngt_total = 0.6\nkick_gts = [0.3]\n",
    )
    .unwrap();

    for name in ["a.csv", "b.csv"] {
        let out = run_in(
            dir.path(),
            &["simulate", "--config", "config.toml", "--out", name],
        );
        assert!(out.status.success(), "simulate failed: {out:?}");
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);

    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("t,gt,concurrence,kicks,fidelity,p00\n"));
    assert!(text.ends_with('\n'));
}

#[test]
fn figure1_emits_free_and_kicked_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["figure1", "--out", "fig1.csv"]);
    assert!(out.status.success(), "figure1 failed: {out:?}");
    let free = std::fs::read_to_string(dir.path().join("fig1_free.csv")).unwrap();
    let kicked = std::fs::read_to_string(dir.path().join("fig1_kicked.csv")).unwrap();
    // the kicked dataset has two extra rows: pre/post kick at gt = 0.3
    assert_eq!(free.lines().count() + 1, kicked.lines().count());
}

#[test]
fn figure2_json_carries_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["figure2", "--out", "fig2.json", "--format", "json"],
    );
    assert!(out.status.success(), "figure2 failed: {out:?}");
    let text = std::fs::read_to_string(dir.path().join("fig2.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["metadata"]["tool"], "cavity-echo");
    assert_eq!(value["metadata"]["convention"], "paper");
    assert!(value["rows"].as_array().unwrap().len() > 10);
}

#[test]
fn convention_flag_overrides_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "figure2",
            "--out",
            "std.json",
            "--format",
            "json",
            "--convention",
            "standard",
        ],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("std.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["metadata"]["convention"], "standard");
}

#[test]
fn sweep_n_rejects_odd_counts() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run_in(dir.path(), &["sweep-n", "--n", "2,4,8", "--out", "s.csv"]);
    assert!(ok.status.success(), "sweep-n failed: {ok:?}");
    let bad = run_in(dir.path(), &["sweep-n", "--n", "2,3", "--out", "s2.csv"]);
    assert!(!bad.status.success());
    let stderr = String::from_utf8(bad.stderr).unwrap();
    assert!(stderr.contains("even"), "stderr: {stderr}");
}

#[test]
fn bad_configs_fail_with_context() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "g = -2.0\n").unwrap();
    let out = run_in(dir.path(), &["simulate", "--config", "bad.toml"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("`g`"), "stderr: {stderr}");

    std::fs::write(dir.path().join("unknown.toml"), "typo_key = 1\n").unwrap();
    let out = run_in(dir.path(), &["simulate", "--config", "unknown.toml"]);
    assert!(!out.status.success());

    let out = run_in(dir.path(), &["simulate", "--config", "missing.toml"]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("missing.toml"));
}

#[test]
fn oracle_compare_prints_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["oracle-compare", "--out", "cmp.csv"]);
    assert!(out.status.success(), "oracle-compare failed: {out:?}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("trace distance"));
    assert!(dir.path().join("cmp.csv").exists());
}
