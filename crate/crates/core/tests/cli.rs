use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sigmatau(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigmatau"))
        .args(args)
        .env("SIGMATAU_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--s", "3", "--count", "20", "--seed", "9", "-p", "3"];
    let a = sigmatau(&args, dir.path());
    let b = sigmatau(&args, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = sigmatau(&["verify", "--s", "3", "--count", "20", "--seed", "10", "-p", "3"], dir.path());
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn json_outputs_parse() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&sigmatau(&["--format", "json", "qp-count", "x^2-17"], dir.path()));
    assert_eq!(v["count"], 2);

    let v = json_of(&sigmatau(&["--format", "json", "-p", "3", "newton", "x^2-6*x+8"], dir.path()));
    assert_eq!(v["p"], 3);
    assert!(v["edges"].as_array().is_some_and(|e| !e.is_empty()));

    let v = json_of(&sigmatau(&["--format", "json", "-p", "7", "digits", "12345/49", "-n", "5"], dir.path()));
    assert_eq!(v["digits"], serde_json::json!([5, 0, 6, 6, 4]));
    assert_eq!(v["fractional"], 2);

    let v = json_of(&sigmatau(
        &["--format", "json", "--radius", "1/2", "disk-count", "(x-1)^2*(x-3)"],
        dir.path(),
    ));
    assert_eq!(v["r"], "1/2");
    assert_eq!(v["count"], 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(sigmatau(&["zp-count", "x^^2"], dir.path()).status.code(), Some(1));
    assert_eq!(sigmatau(&["-p", "4", "zp-count", "x"], dir.path()).status.code(), Some(1));
    assert_eq!(sigmatau(&["--degree-cap", "10", "zp-count", "x^11"], dir.path()).status.code(), Some(2));
    assert_eq!(sigmatau(&["no-such-command"], dir.path()).status.code(), Some(1));
    let help = sigmatau(&["--help"], dir.path());
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("verify"));
    let err = sigmatau(&["zp-count", "x^^2"], dir.path());
    assert!(String::from_utf8_lossy(&err.stderr).contains("position"));
}

#[test]
fn catalog_cache_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let first = json_of(&sigmatau(&["--format", "json", "enumerate", "--max-len", "4"], &cache));
    assert!(first["cache"].get("computed").is_some(), "{first}");
    assert!(cache.join("index.json").exists());

    let second = json_of(&sigmatau(&["--format", "json", "enumerate", "--max-len", "4"], &cache));
    assert_eq!(second["cache"], "hit");
    assert_eq!(first["entries"], second["entries"]);

    // A shorter request is served from the same shards.
    let v = json_of(&sigmatau(&["--format", "json", "tau", "x^2+x", "--max-len", "3"], &cache));
    assert_eq!(v["cache"], "hit");
    assert_eq!(v["tau"], 2);

    // Extending to length 5 reuses the length-4 shards.
    let ext = json_of(&sigmatau(&["--format", "json", "enumerate", "--max-len", "5"], &cache));
    assert_eq!(ext["cache"]["computed"]["reused_shards"], 5);

    // A corrupted shard is detected rather than silently used.
    let shard = cache.join("tau-2.jsonl");
    let mut text = std::fs::read_to_string(&shard).unwrap();
    text.push_str("{\"poly\":[1],\"tau\":2,\"witness\":[]}\n");
    std::fs::write(&shard, text).unwrap();
    let bad = sigmatau(&["enumerate", "--max-len", "4"], &cache);
    assert_ne!(bad.status.code(), Some(0));
}

#[test]
fn family_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&sigmatau(
        &["--format", "json", "family", "shub_smale", "--j", "2", "--analyze"],
        dir.path(),
    ));
    assert_eq!(v["spec"]["kind"], "shub_smale");
    let text = v.to_string();
    assert!(text.contains("integral_roots"), "{text}");
}
