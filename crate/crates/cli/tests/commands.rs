use std::io::Write;
use std::process::{Command, Output, Stdio};

fn modworld(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_modworld"))
        .args(args)
        .env_remove("MODWORLD_SERVER")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn games_lists_all_four() {
    let text = stdout(&modworld(&["games"], ""));
    assert_eq!(text.lines().count(), 4);
    for id in ["mapreader", "arithmetic", "sorting", "twc"] {
        assert!(text.contains(id), "{text}");
    }
}

#[test]
fn oracle_eval_prints_a_perfect_table() {
    let text = stdout(&modworld(&["eval", "--agent", "oracle", "--episodes", "5"], ""));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.contains(" 1.00 ")), "{text}");
    assert!(text.contains("Arithmetic") && text.contains("5.00"));
}

#[test]
fn play_reads_actions_from_stdin() {
    let script = "take math problem\nread math problem\ndiv 33 9\nquit\n";
    let text = stdout(&modworld(&["play", "--game", "arithmetic", "--seed", "3", "--no-modules"], script));
    assert!(text.starts_with("Your first task is to solve the math problem."), "{text}");
    assert!(text.contains("You take the math problem."));
    assert!(text.contains("multiply 33 by 9"));
    // Without the calculator nothing shares a word with "div 33 9", so the
    // first valid action wins the alignment.
    assert!(text.contains("(take 297 mangoes)"));
    assert!(text.contains("Final score: 0.50 after 3 steps"));
}

#[test]
fn generate_writes_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let text = stdout(&modworld(&["generate", "--game", "sorting", "--split", "dev", "--out", out, "--kb"], ""));
    assert_eq!(text.lines().count(), 4);
    let bc = std::fs::read_to_string(dir.path().join("sorting.dev.mods.bc.txt")).unwrap();
    assert!(bc.lines().count() > 100);
    assert!(bc.lines().all(|l| l.matches('\t').count() == 1));
    assert!(dir.path().join("kb.tsv").exists());
}

#[test]
fn stats_has_a_row_per_setting() {
    let text = stdout(&modworld(&["stats", "--game", "twc", "--episodes", "2"], ""));
    assert_eq!(text.lines().count(), 3, "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(modworld(&["eval", "--game", "chess"], "").status.code(), Some(2));
    assert_eq!(modworld(&["frobnicate"], "").status.code(), Some(2));
    let unreachable = modworld(&["--server", "http://127.0.0.1:1", "games"], "");
    assert_eq!(unreachable.status.code(), Some(3));
    let missing = modworld(&["play", "--game", "twc", "--split", "test", "--index", "100"], "");
    assert_eq!(missing.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("out of range"));
}

#[test]
fn eval_and_stats_write_json() {
    let dir = tempfile::tempdir().unwrap();
    let eval = dir.path().join("eval.json");
    stdout(&modworld(
        &["eval", "--agent", "random", "--game", "twc", "--episodes", "3", "--out", eval.to_str().unwrap()],
        "",
    ));
    let summaries: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(eval).unwrap()).unwrap();
    assert_eq!(summaries.len(), 1);
    assert_eq!(summaries[0]["episodes"], 3);

    let stats = dir.path().join("stats.json");
    stdout(&modworld(&["stats", "--game", "sorting", "--episodes", "1", "--out", stats.to_str().unwrap()], ""));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&std::fs::read_to_string(stats).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
}
