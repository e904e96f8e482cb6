use std::path::Path;
use std::process::{Command, Output};

fn setlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setlab")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

#[test]
fn fixture_passes_with_exit_zero() {
    let out = setlab(&["--config", &fixture("hitting.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("finished in"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(setlab(&["--command", "nope"]).status.code(), Some(2));
    assert_eq!(setlab(&["--command", "hitting", "--families", "[[["]).status.code(), Some(2));
    assert_eq!(setlab(&["--config", "/nonexistent/config.json"]).status.code(), Some(2));
}

#[test]
fn human_format_ends_with_overall() {
    let out = setlab(&["--config", &fixture("cantor.json"), "--format", "human"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: cantor"));
    assert!(text.trim_end().ends_with("overall: pass"));
}

#[test]
fn out_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = setlab(&["--config", &fixture("space.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["config"]["command"], "space");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn flags_build_a_run() {
    let out = setlab(&["--command", "symmetry", "--model", "pairs", "--n", "2", "--support", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
