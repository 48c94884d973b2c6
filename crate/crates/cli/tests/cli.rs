use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levelmcg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn phi_example() {
    let o = run(&["phi", "--genus", "3", "--word", "T(1,3)^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1,0;2,1");
}

#[test]
fn member_example() {
    let o = run(&["member", "--genus", "4", "--level", "4", "--word", "A(1,2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true");
}

#[test]
fn verify_all_json_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_levelmcg"))
        .args(["--format", "json", "verify", "--suite", "all", "--params", "g=4,d=2"])
        .env("LEVELMCG_REPORT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let records = v.as_array().or_else(|| v["records"].as_array()).expect("record list");
    assert_eq!(records.len(), 20);
    assert!(records.iter().all(|r| r["status"] == "pass"));
    let report = dir.path().join("report-all-g4_d2.json");
    let saved: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert!(saved.is_array() || saved.is_object());
}

#[test]
fn bad_word_is_usage_error() {
    let o = run(&["phi", "--genus", "3", "--word", "T(1,9)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_suite_is_usage_error() {
    let o = run(&["verify", "--suite", "NOPE", "--no-report"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn guard_is_inconclusive() {
    let o = run(&["verify", "--suite", "PSI-O2", "--params", "g=9", "--no-report"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("INCONCLUSIVE"), "{}", stdout(&o));
}

#[test]
fn limit_marks_truncation() {
    let o = run(&["--limit", "2", "enum", "--set", "Y", "--genus", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("Y(")).count(), 2);
    assert!(out.contains("truncated: 2 of 9 shown"), "{out}");
}
