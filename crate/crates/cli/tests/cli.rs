use std::path::Path;
use std::process::{Command, Output};

fn dcover(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dcover"))
        .arg("--cache")
        .arg(cache)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn count_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let o = dcover(&cache, &["--format", "csv", "count", "f1", "--range", "3..5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains(",365,"), "{out}");
    assert!(out.contains(",3965,"), "{out}");

    let o = dcover(&cache, &["--format", "csv", "count", "v32", "7", "formula"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(",19608,"));

    let o = dcover(&cache, &["--format", "csv", "count", "script_l", "--prime", "13"]);
    assert!(stdout(&o).contains(",3113,"));
}

#[test]
fn verify_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let o = dcover(&cache, &["verify", "thm-count-32", "3", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    for (format, marker) in [("markdown", "## Verification runs"), ("csv", "kind,id,p,method"), ("json", "\"runs\"")] {
        let o = dcover(&cache, &["--format", format, "report"]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(marker), "{format}");
    }

    let o = dcover(&cache, &["verify", "list"]);
    let out = stdout(&o);
    assert!(out.contains("conj-rigid-32 (conjecture)"));
    assert!(out.contains("thm-count-32:"));
}

#[test]
fn static_claims() {
    let dir = tempfile::tempdir().unwrap();
    let o = dcover(&dir.path().join("c.jsonl"), &["verify", "aut-orders"]);
    assert_eq!(o.status.code(), Some(0));
    let o = dcover(&dir.path().join("c.jsonl"), &["analyze", "f1"]);
    let out = stdout(&o);
    assert!(out.contains("criterion: fail"), "{out}");
    assert!(out.contains("24 on the cover"), "{out}");
}

#[test]
fn quotient_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let h90 = stdout(&dcover(&cache, &["quotient", "alpha1", "--prime", "3"]));
    let brute = stdout(&dcover(&cache, &["quotient", "alpha1", "--prime", "3", "--method", "quotient-brute"]));
    let count = |s: &str| s.lines().nth(1).unwrap().rsplit(',').next().unwrap().to_string();
    assert_eq!(count(&h90), count(&brute));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    assert_eq!(dcover(&cache, &["verify", "no-such-claim"]).status.code(), Some(2));
    assert_eq!(dcover(&cache, &["count", "f1", "--prime", "9"]).status.code(), Some(2));
    assert_eq!(dcover(&cache, &["count", "nowhere.json", "3"]).status.code(), Some(2));
    assert_eq!(dcover(&cache, &["--format", "xml", "report"]).status.code(), Some(2));

    let o = dcover(
        &cache,
        &["--data-dir", dir.path().to_str().unwrap(), "verify", "thm-main-first", "3", "5"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("level8_weight6.json"));
}

#[test]
fn corrupt_cache_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    std::fs::write(&cache, "{\"count\": 1\n").unwrap();
    let o = dcover(&cache, &["count", "f1", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt line 1"));
}

#[test]
fn tampered_cache_fails_on_recompute() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    assert_eq!(dcover(&cache, &["count", "f1", "3"]).status.code(), Some(0));
    let text = std::fs::read_to_string(&cache).unwrap().replace("\"count\":365", "\"count\":364");
    std::fs::write(&cache, text).unwrap();
    // served from the cache without --recompute
    assert_eq!(dcover(&cache, &["count", "f1", "3"]).status.code(), Some(0));
    assert_eq!(dcover(&cache, &["--recompute", "count", "f1", "3"]).status.code(), Some(1));
}
