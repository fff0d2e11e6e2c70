use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn maxcode(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_maxcode")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}"));
    (out.status.code().unwrap(), json)
}

fn code_file(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn has_pair(listing: &Value, left: &[u64], right: &[u64]) -> bool {
    listing["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .any(|p| p["left"] == serde_json::json!(left) && p["right"] == serde_json::json!(right))
}

#[test]
fn factorize_listings() {
    let (code, v) = maxcode(&["factorize", "6", "--kind", "hajos"]);
    assert_eq!(code, 0);
    assert!(has_pair(&v, &[1, 2], &[1, 3, 5]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["seed"], 0);

    let (_, v) = maxcode(&["factorize", "1", "--kind", "all"]);
    assert_eq!(v["count"], 1);
    assert!(has_pair(&v, &[0], &[0]));

    let (_, v) = maxcode(&["factorize", "12", "--kind", "krasner"]);
    assert_eq!(v["count"], 8);
    assert!(v["pairs"].as_array().unwrap().iter().all(|p| !p["chains"].as_array().unwrap().is_empty()));
}

#[test]
fn factorize_bound() {
    let (code, v) = maxcode(&["factorize", "20"]);
    assert_eq!(code, 2);
    assert_eq!(v["exit_code"], 2);
    assert_eq!(maxcode(&["factorize", "20", "--n-bound", "20", "--kind", "krasner"]).0, 0);
}

#[test]
fn check_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = code_file(dir.path(), "good.txt", "alphabet: ab\naa\nab\nb\n");
    let (code, v) = maxcode(&["check", &good, "--all"]);
    assert_eq!(code, 0);
    assert_eq!(v["is_code"]["is_code"], true);
    assert_eq!(v["maximal"]["maximal"], true);
    assert_eq!(v["factorization"]["p"], serde_json::json!(["", "a"]));
    assert_eq!(v["factorization"]["s"], serde_json::json!([""]));

    let trivial = code_file(dir.path(), "ab.json", r#"{"alphabet": "ab", "words": ["a", "b"]}"#);
    assert_eq!(maxcode(&["check", &trivial]).0, 0);

    let ambiguous = code_file(dir.path(), "bad.txt", "alphabet: ab\na\nab\nba\n");
    let (code, v) = maxcode(&["check", &ambiguous, "--code"]);
    assert_eq!(code, 1);
    assert_eq!(v["is_code"]["witness"]["word"], "aba");

    let garbled = code_file(dir.path(), "garbled.txt", "ab\naa\n");
    assert_eq!(maxcode(&["check", &garbled]).0, 3);
}

#[test]
fn analyze_reports() {
    let dir = tempfile::tempdir().unwrap();
    let seven = code_file(dir.path(), "seven.txt", "alphabet: ab\naaaaaa b baa baaaa ab abaa abaaaa\n");
    let (code, v) = maxcode(&["analyze", &seven]);
    assert_eq!(code, 0);
    assert_eq!(v["n"], 6);
    assert_eq!(v["lefts"].as_array().unwrap().len(), 2);
    assert_eq!(v["rights"].as_array().unwrap().len(), 6);
    assert!(v["separators"].as_array().unwrap().iter().all(|s| s["triangle"] == true));

    let prime = code_file(dir.path(), "prime.txt", "alphabet: ab\naaa b ab aab\n");
    let (code, v) = maxcode(&["analyze", &prime]);
    assert_eq!(code, 0);
    assert!(v["separators"].as_array().unwrap().iter().all(|s| s["triangle"] == true));

    let sigma = code_file(dir.path(), "sigma.txt", "alphabet: ab\na\nb\n");
    let (code, v) = maxcode(&["analyze", &sigma]);
    assert_eq!(code, 0);
    assert_eq!(v["n"], 1);

    let partial = code_file(dir.path(), "partial.txt", "alphabet: ab\naa\nab\n");
    assert_eq!(maxcode(&["analyze", &partial]).0, 2);
    assert_eq!(maxcode(&["analyze", &seven, "--letter", "c"]).0, 2);
}

#[test]
fn scans() {
    let (code, v) = maxcode(&["scan", "--mode", "triangle", "--limit", "100"]);
    assert_eq!(code, 0);
    assert_eq!(v["codes"], 100);
    assert_eq!(v["counts"]["fails"], 0);
    assert_eq!(v["counts"]["holds"], 100);

    let (_, v) = maxcode(&["scan", "--mode", "triangle", "--limit", "0"]);
    assert_eq!(v["codes"], 0);
    assert_eq!(v["items"], serde_json::json!([]));

    let (code, v) = maxcode(&["scan", "--mode", "krasner-in-system", "--draws", "20", "--seed", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["corpus"]["random_draws"], 20);
    assert!(v["holds_fraction"].as_str().unwrap().contains('/'));

    assert_eq!(maxcode(&["scan", "--mode", "omega2", "--exhaustive-len", "3"]).0, 2);
}

#[test]
fn output_is_reproducible_and_redirectable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.json");
    let args = ["scan", "--mode", "pair2", "--draws", "30", "--seed", "3", "--out", out.to_str().unwrap()];
    let status = Command::new(env!("CARGO_BIN_EXE_maxcode")).args(args).status().unwrap();
    assert!(status.success());
    let first = std::fs::read(&out).unwrap();
    Command::new(env!("CARGO_BIN_EXE_maxcode")).args(args).status().unwrap();
    assert_eq!(first, std::fs::read(&out).unwrap());
    let text = Command::new(env!("CARGO_BIN_EXE_maxcode"))
        .args(["factorize", "6", "--kind", "krasner", "--format", "text"])
        .output()
        .unwrap();
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.starts_with("factorize (schema 1, seed 0)"), "{text}");
}
