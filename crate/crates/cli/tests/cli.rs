use std::path::Path;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn pnsieve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pnsieve"))
        .args(["--no-cache"])
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn assert_schema(name: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).take(5).collect(),
    };
    panic!("{name} output violates schema: {msgs:?}");
}

#[test]
fn analyze_verified_pair() {
    let out = pnsieve(&["analyze", "5", "15", "--json"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_schema("analyze", &doc);
    assert_eq!(doc["tag"], "VERIFIED_SIEVE");
    assert_eq!(doc["certificate"]["config"]["d"], "2");
    assert_eq!(doc["certificate"]["Lambda"]["decimal"], "57.7227");
}

#[test]
fn analyze_screen_pair_matches_schema() {
    let out = pnsieve(&["analyze", "78125", "40", "--json"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_schema("analyze", &doc);
    assert_eq!(doc["tag"], "VERIFIED_SCREEN");
}

#[test]
fn analyze_exception_exits_two() {
    let out = pnsieve(&["analyze", "5", "6", "--json"]);
    assert_eq!(code(&out), 2);
    let doc = stdout_json(&out);
    assert_schema("analyze", &doc);
    assert_eq!(doc["tag"], "POSSIBLE_EXCEPTION");
    assert!(doc["certificate"].is_null());
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["analyze", "6", "7"][..],
        &["analyze", "5", "2"],
        &["--bogus"],
        &["analyze", "5"],
        &["tables", "--which", "3"],
        &["oracle", "--p", "5", "--m", "3", "--f", "x^ / ", "find"],
        &["oracle", "--p", "5", "--m", "3", "--a", "9", "find"],
    ] {
        let out = pnsieve(args);
        assert_eq!(code(&out), 64, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&pnsieve(&["--help"])), 0);
    assert_eq!(code(&pnsieve(&["--version"])), 0);
    assert_eq!(code(&pnsieve(&["scan", "--help"])), 0);
}

#[test]
fn factor_text_and_json() {
    let out = pnsieve(&["factor", "5", "15"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2^2 * 11 * 31 * 71 * 181 * 1741");
    let doc = stdout_json(&pnsieve(&["factor", "25", "12", "--json"]));
    assert_schema("factor", &doc);
    assert_eq!(doc["value"], "59604644775390624");
    assert_eq!(doc["complete"], true);
}

#[test]
fn factor_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("factors.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_pnsieve"))
            .env("PNSIEVE_CACHE", &file)
            .args(["factor", "5", "36"])
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(code(&first), 0);
    assert!(file.exists(), "cache file written");
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn table_one_holds_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t1.csv");
    let out = pnsieve(&["tables", "--which", "1", "--json", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_schema("tables", &doc);
    assert_eq!(doc.as_array().unwrap().len(), 18);
    let rows: Vec<pnsieve::report::CsvRow> = pnsieve::report::read_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), 18);
    assert_eq!((rows[0].q, rows[0].m, rows[0].d.as_str()), (5, 15, "2"));
    assert!(rows.iter().all(|r| r.holds));
}

#[test]
fn both_tables_flag_the_failing_rows() {
    let out = pnsieve(&["tables", "--json"]);
    assert_eq!(code(&out), 1);
    let doc = stdout_json(&out);
    assert_schema("tables", &doc);
    let failing: Vec<(u64, u64)> = doc
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| !r["report"]["holds"].as_bool().unwrap())
        .map(|r| (r["table"].as_u64().unwrap(), r["index"].as_u64().unwrap()))
        .collect();
    assert_eq!(failing, vec![(2, 10), (2, 13)]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 10"));
}

#[test]
fn small_scan_matches_schema() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let out = pnsieve(&["scan", "--kmax", "2", "--mmax", "12", "--json", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_schema("scan", &doc);
    let exceptions: Vec<(u64, u64)> = serde_json::from_value(doc["exceptions"].clone()).unwrap();
    assert_eq!(
        exceptions,
        vec![(5, 5), (5, 6), (5, 7), (5, 8), (5, 9), (5, 10), (5, 12), (25, 5), (25, 6), (25, 8)]
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 8);
    assert!(text.lines().next().unwrap().ends_with("holds,status,bounds_used"));
}

#[test]
fn oracle_suites_hold_on_f81() {
    let out = pnsieve(&["oracle", "--p", "3", "--m", "4", "--samples", "5", "identities", "weil", "counts", "find"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_schema("oracle", &doc);
    let records = doc.as_array().unwrap();
    for check in ["rho", "eta", "tau", "orthogonality", "weil_mult", "counting_bound", "sieve_inequality", "find"] {
        assert!(records.iter().any(|r| r["check"] == check), "no {check} record");
    }
}

#[test]
fn oracle_find_with_function() {
    let out = pnsieve(&["oracle", "--p", "5", "--k", "1", "--m", "3", "--f", "x^3+x+1 / x", "--a", "1", "find"]);
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_schema("oracle", &doc);
    assert!(doc[0]["witness"].is_string());
}

#[test]
fn oracle_rejects_oversized_field() {
    let out = pnsieve(&["oracle", "--p", "5", "--k", "3", "--m", "5", "identities"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}
