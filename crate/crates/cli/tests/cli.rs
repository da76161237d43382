use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run_in(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whurwitz"))
        .args(args)
        .env("WHURWITZ_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    let cache = tempfile::tempdir().unwrap();
    run_in(cache.path(), args)
}

fn json(out: &Output) -> Vec<Value> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice::<Value>(&out.stdout).unwrap().as_array().unwrap().clone()
}

#[test]
fn hurwitz_tree_count() {
    let rows = json(&run(&["hurwitz", "--genus", "0", "--lambda", "3"]));
    assert_eq!(rows[0]["value"], "3");
    let rows = json(&run(&["hurwitz", "--genus", "1", "--lambda", "2,1"]));
    assert!(rows[0]["value"].is_string());
}

#[test]
fn identities_suite_passes() {
    let out = run(&["verify", "identities", "--max-m", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn g333_all_classes_match() {
    let rows = json(&run(&["verify", "main", "--family", "3,3,3", "--all-classes"]));
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["match"] == true));
    let lr: Vec<u64> = rows.iter().map(|r| r["lr"].as_u64().unwrap()).collect();
    assert!(lr.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn cutjoin_rows_match() {
    let rows = json(&run(&["verify", "cutjoin", "--preset", "B3"]));
    assert!(rows.iter().all(|r| r["match"] == true && r["cutjoin_rhs"] == r["ffull_bruteforce"]));
}

#[test]
fn tsv_and_json_agree() {
    let args = ["verify", "main", "--preset", "B3", "--all-classes"];
    let rows = json(&run(&args));
    let mut tsv_args = vec!["--format", "tsv"];
    tsv_args.extend(args);
    let out = run(&tsv_args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let body: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    assert_eq!(body.len(), rows.len());
    for (cells, row) in body.iter().zip(&rows) {
        let obj = row.as_object().unwrap();
        assert_eq!(obj.keys().map(String::as_str).collect::<Vec<_>>(), header);
        for (cell, value) in cells.iter().zip(obj.values()) {
            let expected = match value {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                v => v.to_string(),
            };
            assert_eq!(*cell, expected);
        }
    }
}

#[test]
fn output_is_deterministic_and_cache_independent() {
    let cache = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "main", "--family", "4,4,3"][..],
        &["rgs", "list", "--preset", "H3"][..],
        &["count", "full", "--preset", "D4"][..],
    ] {
        let cold = run_in(cache.path(), args);
        let warm = run_in(cache.path(), args);
        let fresh = run(args);
        assert!(cold.status.success(), "{args:?}: {}", String::from_utf8_lossy(&cold.stderr));
        assert_eq!(cold.stdout, warm.stdout, "{args:?}");
        assert_eq!(cold.stdout, fresh.stdout, "{args:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["count", "full", "--preset", "Z9"][..],
        &["count", "full", "--family", "3,2,2"][..],
        &["count", "full", "--family", "2,1,2", "--element", "{not json"][..],
        &["count", "full", "--family", "2,1,2", "--preset", "B2"][..],
        &["count", "full", "--preset", "F4"][..],
        &["frobnicate"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn budget_exceeded_exit_3() {
    let out = run(&["count", "full", "--family", "9,1,9"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget exceeded"));
}

#[test]
fn poset_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("b2.dot");
    let rows = json(&run(&["poset", "--preset", "B2", "--dot", dot.to_str().unwrap()]));
    assert_eq!(rows[0]["maximal_chains"], "48");
    assert_eq!(rows[0]["lemma_holds"], true);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), rows[0]["covers"].as_u64().unwrap() as usize);
}

#[test]
fn rows_follow_documented_schema() {
    let schema: Value = serde_json::from_str(
        &std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/verification_row.schema.json"))
            .unwrap(),
    )
    .unwrap();
    let items = &schema["items"];
    let required: Vec<&str> = items["required"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let tags = items["properties"]["case_tag"]["enum"].as_array().unwrap();
    for args in
        [&["verify", "main", "--family", "3,1,2", "--all-classes"][..], &["verify", "main", "--preset", "H3"][..]]
    {
        for row in json(&run(args)) {
            let obj = row.as_object().unwrap();
            assert_eq!(obj.keys().map(String::as_str).collect::<Vec<_>>(), required);
            assert!(tags.contains(&row["case_tag"]), "{}", row["case_tag"]);
        }
    }
}
