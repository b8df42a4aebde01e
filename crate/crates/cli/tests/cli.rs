use std::process::{Command, Output};

fn exherm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exherm"))
        .args(args)
        .env_remove("EXHERM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn empty_suite_set_exits_zero() {
    let o = exherm(&["verify", "--suite", "none"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "total: 0 checks, 0 pass, 0 soft-mismatch, 0 fail\n");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--suite", "bogus"][..],
        &["verify", "--suite", "series", "--order", "8"],
        &["verify", "--range", "3..1"],
        &["verify", "--range", "oops"],
        &["state", "--family", "nope", "--n", "0"],
        &["state", "--family", "osc", "--n", "0", "--normalization", "eop"],
        &["diagram", "--ladder", "d", "--range", "0..2"],
        &["series", "--kind", "alpha", "--n", "0"],
        &["frobnicate"],
    ] {
        assert_eq!(exherm(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn strict_promotes_soft_mismatches() {
    let lax = exherm(&["verify", "--suite", "operators"]);
    assert_eq!(lax.status.code(), Some(0));
    assert!(stdout(&lax).contains("1 soft-mismatch, 0 fail"));
    let strict = exherm(&["verify", "--suite", "operators", "--strict"]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn hard_failures_exit_one() {
    let o = exherm(&["verify", "--suite", "diagrams"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_report_and_cache_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &std::path::Path| {
        vec![
            "verify".to_string(),
            "--suite".into(),
            "updown".into(),
            "--suite".into(),
            "crosscheck".into(),
            "--range".into(),
            "-2..3".into(),
            "--cache".into(),
            cache.display().to_string(),
            "--json".into(),
            p.display().to_string(),
        ]
    };
    let run = |p: &std::path::Path| {
        let owned = args(p);
        let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
        exherm(&refs)
    };
    assert_eq!(run(&a).status.code(), Some(0));
    assert!(std::fs::read_dir(&cache).unwrap().count() >= 2);
    assert_eq!(run(&b).status.code(), Some(0));
    let ja = std::fs::read_to_string(&a).unwrap();
    assert_eq!(ja, std::fs::read_to_string(&b).unwrap());
    let v: serde_json::Value = serde_json::from_str(&ja).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["range"], serde_json::json!([-2, 3]));
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["anchor"].as_str().is_some_and(|s| !s.is_empty())));
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_exherm"))
        .args(["verify", "--suite", "crosscheck", "--range", "0..2"])
        .env("EXHERM_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn state_documents() {
    let o = exherm(&["state", "--family", "def", "--n", "-3", "--normalization", "eop"]);
    assert_eq!(stdout(&o), "(1)/(2 + 4*x^2) * E^-1\n");
    let o = exherm(&["state", "--family", "osc", "--n", "0", "--format", "latex"]);
    assert_eq!(stdout(&o), "e^{-\\frac{1}{2}x^{2}}\n");
    let o = exherm(&["state", "--family", "def", "--n", "1", "--normalization", "rodrigues", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["provenance"], "b†·psi(0)");
}

#[test]
fn diagram_documents() {
    let dot = exherm(&["diagram", "--ladder", "b", "--range", "-5..3", "--format", "dot"]);
    let text = stdout(&dot);
    assert!(text.starts_with("digraph b {"));
    assert!(text.contains("\"psi(0)\" -> \"psi(1)\""));
    assert_eq!(text, stdout(&exherm(&["diagram", "--ladder", "b", "--range", "-5..3", "--format", "dot"])));
    let json = exherm(&["diagram", "--ladder", "c", "--range", "-6..8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let raises: Vec<(String, String)> = v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["op"] == "c†")
        .map(|e| (e["src"].as_str().unwrap().to_string(), e["dst"].as_str().unwrap().to_string()))
        .collect();
    let plain_heads: Vec<&str> = ["psi(-3)", "psi(0)", "psi(1)", "psi(2)", "psi(3)", "psi(4)", "psi(5)"]
        .into_iter()
        .filter(|&s| raises.iter().any(|(a, _)| a == s))
        .filter(|&s| !raises.iter().any(|(a, b)| b == s && a.starts_with("psi(")))
        .collect();
    assert_eq!(plain_heads, ["psi(-3)", "psi(1)", "psi(2)"], "{raises:?}");
    let empty = exherm(&["diagram", "--ladder", "b", "--range", "1..0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&empty)).unwrap();
    assert!(v["nodes"].as_array().unwrap().is_empty());
}

#[test]
fn series_document() {
    let o = exherm(&["series", "--kind", "nu", "--n", "-1", "--order", "6"]);
    assert_eq!(stdout(&o), "nu_-1\nx^0: 0\nx^1: 1\nx^2: 0\nx^3: 2\nx^4: 0\nx^5: 12/5\nx^6: 0\n+ O(x^7)\n");
}
