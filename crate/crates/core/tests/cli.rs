use std::fs;
use std::process::Command;

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gauge-orbits"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn reduce_cancels_retracing() {
    let (code, out, _) = run(&["reduce", "[[0,1],[0,-1]]", "--graph", "loop"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"anchor":"m"}"#);
}

#[test]
fn reduce_keeps_reduced_word() {
    let (code, out, _) = run(&["reduce", "[[0,1],[1,-1],[0,1]]", "--graph", "figure-eight"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "[[0,1],[1,-1],[0,1]]");
}

#[test]
fn reduce_rejects_malformed_words() {
    assert_eq!(run(&["reduce", "[[0,2]]", "--graph", "loop"]).0, 1);
    assert_eq!(run(&["reduce", "[[0,1]", "--graph", "loop"]).0, 1);
    // theta edges all leave m, so e0·e1 is not composable
    assert_eq!(run(&["reduce", "[[0,1],[1,1]]", "--graph", "theta"]).0, 1);
    assert_eq!(run(&["reduce", "[[0,1]]"]).0, 1);
}

#[test]
fn stabilizer_reports() {
    let dir = tempfile::tempdir().unwrap();
    let single = dir.path().join("single.json");
    fs::write(&single, json!({"vertices": ["m"], "base": "m", "edges": []}).to_string()).unwrap();
    let conn = dir.path().join("a.json");
    fs::write(&conn, json!({"graph": "single.json", "group": "S3", "edges": {}}).to_string()).unwrap();
    let (code, out, err) = run(&["stabilizer", conn.to_str().unwrap(), "--output", "json"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stabilizer_order"], 6);
    assert_eq!(v["orbit_type"]["order"], 6);

    let (_, out, _) = run(&[
        "stabilizer",
        r#"{"graph":"figure-eight","group":"S3","edges":{"0":"(12)","1":"(123)"}}"#,
        "--output",
        "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stabilizer_order"], 1);
    assert_eq!(v["orbit_type"]["representative"], json!(["e"]));

    let (_, out, _) = run(&["stabilizer", r#"{"graph":"theta","group":"Z4","edges":{"0":"1","1":"3","2":"2"}}"#]);
    assert!(out.contains("|B(A)|: 4"), "{out}");
}

#[test]
fn stabilizer_budget_exit() {
    let (code, _, err) = run(&["stabilizer", r#"{"graph":"theta","group":"S3","edges":{"0":"e","1":"e","2":"e"}}"#, "--budget", "1"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn overrides_replace_file_fields() {
    let (code, out, _) = run(&["orbit-type", r#"{"edges":{"0":"(12)"}}"#, "--graph", "loop", "--group", "S3"]);
    assert_eq!(code, 0);
    assert!(out.contains("order 2, 3 conjugates"), "{out}");
}

#[test]
fn project_subdivided_edge() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.json");
    fs::write(
        &table,
        json!({
            "coarse": {"vertices": ["m", "a"], "base": "m", "edges": [{"id": 0, "src": "m", "dst": "a"}]},
            "fine": {"vertices": ["m", "a", "c"], "base": "m",
                     "edges": [{"id": 1, "src": "m", "dst": "c"}, {"id": 2, "src": "c", "dst": "a"}]},
            "vertex_map": {"m": "m", "a": "a"},
            "edge_words": {"0": [[1, 1], [2, 1]]}
        })
        .to_string(),
    )
    .unwrap();
    let conn = dir.path().join("a.json");
    fs::write(&conn, json!({"group": "S3", "edges": {"1": "(12)", "2": "(13)"}}).to_string()).unwrap();
    let (code, out, err) = run(&["project", table.to_str().unwrap(), conn.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["edges"]["0"], "(132)");

    let wrong = dir.path().join("b.json");
    fs::write(&wrong, json!({"graph": "loop", "group": "S3", "edges": {"0": "e"}}).to_string()).unwrap();
    assert_eq!(run(&["project", table.to_str().unwrap(), wrong.to_str().unwrap()]).0, 1);
}

#[test]
fn same_type_verdicts() {
    let a = r#"{"graph":"loop","group":"S3","edges":{"0":"(12)"}}"#;
    let (code, out, _) = run(&["same-type", a, a]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "same-type: true\nwitness: e");
    let moved = r#"{"graph":"loop","group":"S3","edges":{"0":"(23)"}}"#;
    assert!(run(&["same-type", a, moved]).1.starts_with("same-type: true"));
    let full = r#"{"graph":"figure-eight","group":"S3","edges":{"0":"(12)","1":"(123)"}}"#;
    let abelian = r#"{"graph":"figure-eight","group":"S3","edges":{"0":"(123)","1":"(132)"}}"#;
    let (code, out, _) = run(&["same-type", abelian, full, "--output", "json"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap(), json!({"same_type": false, "witness": null}));
}

#[test]
fn enumerate_quotient_counts() {
    let (code, out, _) = run(&["enumerate-quotient", "--graph", "figure-eight", "--group", "S3", "--output", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["classes"].clone(), v["ad_classes"].clone()), (json!(11), json!(11)));
    assert_eq!(run(&["enumerate-quotient", "--graph", "barbell", "--group", "Q8", "--budget", "10"]).0, 3);
    assert_eq!(run(&["enumerate-quotient", "--graph", "nowhere", "--group", "S3"]).0, 1);
}

#[test]
fn check_is_deterministic_and_passes() {
    let args = ["check", "--seed", "7", "--trials", "3", "--output", "json"];
    let (code, first, err) = run(&args);
    assert_eq!(code, 0, "{err}");
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["prng"], "ChaCha8Rng");
    assert_eq!(v["status"], "pass");
}

#[test]
fn check_reports_injected_fault() {
    let (code, out, _) = run(&["check", "--trials", "5", "--suite", "action", "--inject-fault", "corrupt-action", "--output", "json"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    let suite = &v["suites"]["action"];
    assert!(suite["failed"].as_u64().unwrap() > 0);
    assert!(suite["counterexample"]["detail"].is_string());
}

#[test]
fn check_budget_exit() {
    let (code, _, _) = run(&["check", "--trials", "2", "--suite", "orbit-stabilizer,factorization", "--budget", "1"]);
    assert_eq!(code, 3);
}

#[test]
fn check_rejects_bad_config() {
    assert_eq!(run(&["check", "--suite", "nope"]).0, 1);
    assert_eq!(run(&["check", "--trials", "0"]).0, 1);
    assert_eq!(run(&["check", "--closure-cap", "0"]).0, 1);
    assert_eq!(run(&["check", "--group", "Z0"]).0, 1);
}

#[test]
fn library_entry_point_captures_output() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = gauge_orbits::cli::run(["gauge-orbits", "reduce", "[[1,1],[1,-1],[0,1]]", "--graph", "figure-eight"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap().trim(), "[[0,1]]");
}
