//! End-to-end runs of the binary: outputs, exit codes and byte stability.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kuhn-cheat")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn value_line(text: &str) -> &str {
    text.lines().find(|l| l.starts_with("value: ")).unwrap()
}

#[test]
fn solve_defaults_and_variants() {
    assert_eq!(value_line(&stdout(&["solve"])), "value: -1/18 (-0.0555555555556)");
    assert_eq!(value_line(&stdout(&["solve", "--p", "0", "--q", "1"])), "value: -1/9 (-0.111111111111)");
    assert_eq!(value_line(&stdout(&["solve", "--p", "1", "--q", "1", "--r1", "1", "--r2", "1"])), "value: 0");
    assert_eq!(value_line(&stdout(&["solve", "--p", "1", "--algo", "enum"])), "value: 1/9 (0.111111111111)");
    let cfr = stdout(&["solve", "--algo", "cfr", "--iterations", "2000"]);
    assert!(value_line(&cfr).starts_with("value: -0.05"), "{cfr}");
}

#[test]
fn json_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    stdout(&["solve", "--p", "0", "--q", "1", "--out", path.to_str().unwrap()]);
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    for key in ["variant", "config", "method", "value_exact", "value_decimal", "exploitability", "breakdown"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["value_exact"], "-1/9");
    assert_eq!(json["method"], "lp");
    assert_eq!(json["breakdown"].as_array().unwrap().len(), 6);
    assert!(json.get("paper_discrepancy").is_none());
}

#[test]
fn naive_reports_flag_the_discrepancy() {
    for (cheater, a, value, published) in
        [("1", "0", "1/3", "7/18"), ("2", "0", "-2/9", "-2/3"), ("2", "1/3", "-2/9", "-19/27")]
    {
        let json: serde_json::Value =
            serde_json::from_str(&stdout(&["naive", "--cheater", cheater, "--a", a, "--json"])).unwrap();
        assert_eq!(json["value_exact"], value);
        assert_eq!(json["paper_discrepancy"]["published_value"]["exact"], published);
        assert_eq!(json["paper_discrepancy"]["computed_value"]["exact"], value);
    }
}

#[test]
fn eval_fair_profile() {
    let text = stdout(&["eval", "--a", "1/6"]);
    assert_eq!(value_line(&text), "value: -1/18 (-0.0555555555556)");
    assert!(text.contains("exploitability: 0\n"));
}

#[test]
fn stats_sweep_and_export() {
    assert!(stdout(&["stats"]).starts_with("decision_nodes=24 infosets=12"));
    assert_eq!(
        stdout(&["sweep", "--mode", "cheat", "--n", "2", "--format", "csv"]),
        "axis1,axis2,value_exact,value_decimal\n0,0,-1/18,-0.0555555555556\n0,1,-1/9,-0.111111111111\n1,0,1/9,0.111111111111\n1,1,0,0\n"
    );
    let dir = tempfile::tempdir().unwrap();
    let efg = dir.path().join("g.efg");
    let efg = efg.to_str().unwrap();
    stdout(&["export-efg", "--p", "1", "--q", "1", "--r1", "0.5", "--r2", "0.5", "--out", efg]);
    let stats = stdout(&["stats", "--from", efg]);
    let total: usize = stats
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("total_nodes="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((800..=1100).contains(&total), "{stats}");
    assert_eq!(stats, stdout(&["stats", "--p", "1", "--q", "1", "--r1", "1/2", "--r2", "1/2"]));
}

#[test]
fn exit_codes() {
    let usage: &[&[&str]] = &[
        &["solve", "--p", "1.5"],
        &["solve", "--q", "abc"],
        &["solve", "--algo", "simplex"],
        &["naive", "--cheater", "3"],
        &["naive", "--cheater", "1", "--a", "1/2"],
        &["sweep", "--n", "1"],
        &["frobnicate"],
        &[],
    ];
    for args in usage {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
    let runtime: &[&[&str]] = &[
        &["stats", "--from", "/nonexistent/game.efg"],
        &["solve", "--algo", "enum", "--p", "1", "--q", "1", "--r1", "1"],
        &["export-efg", "--out", "/nonexistent/dir/g.efg"],
    ];
    for args in runtime {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    }
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.efg");
    std::fs::write(&bad, "EFG 2 R \"x\" { \"A\" \"B\" } t \"\" 1 \"\" { 1, 1 }").unwrap();
    assert_eq!(run(&["stats", "--from", bad.to_str().unwrap()]).status.code(), Some(1));
}

/// Runs `args` twice, returning stdout and the bytes of `file` (if any).
fn twice(args: &[&str], file: Option<&Path>) {
    let first = run(args);
    let first_file = file.map(|f| std::fs::read(f).unwrap());
    let second = run(args);
    let second_file = file.map(|f| std::fs::read(f).unwrap());
    assert_eq!(first.status.code(), Some(0), "{args:?}");
    assert_eq!(first.stdout, second.stdout, "{args:?}");
    assert_eq!(first_file, second_file, "{args:?}");
}

#[test]
fn commands_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = out.to_str().unwrap();
    twice(&["solve", "--p", "1/2", "--q", "1/3", "--out", o], Some(&out));
    twice(&["solve", "--algo", "cfr", "--iterations", "500", "--json"], None);
    twice(&["eval", "--p", "1", "--a", "1/12"], None);
    twice(&["naive", "--cheater", "1", "--out", o], Some(&out));
    twice(&["sweep", "--mode", "detect", "--n", "3", "--format", "json", "--out", o], Some(&out));
    twice(&["export-efg", "--p", "1/3", "--r2", "1/4", "--out", o], Some(&out));
    twice(&["stats", "--q", "1"], None);
}
