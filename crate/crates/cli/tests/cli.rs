use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bhlower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhlower"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = bhlower(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    bhlower(args).status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn construct_writes_t3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t3.json");
    ok(&["construct", "--m", "3", "--out", p(&path)]);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["arity"], 3);
    assert_eq!(doc["dims"], serde_json::json!([4, 4, 4]));
    assert_eq!(doc["entries"].as_array().unwrap().len(), 16);
}

#[test]
fn norm_of_constructed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t3.json");
    ok(&["construct", "--m", "3", "--out", p(&path)]);
    for method in ["exact", "recursive"] {
        let doc: Value =
            serde_json::from_str(&ok(&["norm", p(&path), "--method", method])).unwrap();
        assert_eq!(doc["value"], 4);
        assert_eq!(doc["witness"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn recursive_norm_rejects_other_forms() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    fs::write(
        &path,
        r#"{"arity": 2, "dims": [2, 2], "entries": [[[1, 1], 1]]}"#,
    )
    .unwrap();
    assert_eq!(code(&["norm", p(&path), "--method", "recursive"]), 1);
    let doc: Value = serde_json::from_str(&ok(&["norm", p(&path)])).unwrap();
    assert_eq!(doc["value"], 1);
}

#[test]
fn table_formats() {
    let text = ok(&["table", "--max-m", "3"]);
    assert!(text.contains("= C_2  ="));
    assert!(text.contains("2^(5/6)"));
    let csv = ok(&["table", "--max-m", "3", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,lower,upper,lower_exact,upper_exact");
    assert_eq!(lines.len(), 3);
    assert!(ok(&["table", "--max-m", "3", "--format", "md"]).starts_with("| m |"));
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c4.json");
    ok(&["certify", "--m", "4", "--out", p(&cert)]);
    let out = ok(&["verify", p(&cert)]);
    assert!(out.starts_with("PASS m = 4"), "{out}");
}

#[test]
fn certify_a_form_file() {
    let dir = tempfile::tempdir().unwrap();
    let form = dir.path().join("t2.json");
    let cert = dir.path().join("c.json");
    ok(&["construct", "--m", "2", "--out", p(&form)]);
    ok(&["certify", "--form", p(&form), "--out", p(&cert)]);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["sup_norm"]["method"], "exhaustive");
    assert_eq!(doc["lower_bound"]["two_exp"], "1/2");
    assert!(ok(&["verify", p(&cert)]).starts_with("PASS"));
}

#[test]
fn tampered_value_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c4.json");
    ok(&["certify", "--m", "4", "--out", p(&cert)]);
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    doc["sup_norm"]["value"] = 9.into();
    fs::write(&cert, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = bhlower(&["verify", p(&cert)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sup_norm.witness"));
}

#[test]
fn swapped_digest_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let c2 = dir.path().join("c2.json");
    let c3 = dir.path().join("c3.json");
    ok(&["certify", "--m", "2", "--out", p(&c2)]);
    ok(&["certify", "--m", "3", "--out", p(&c3)]);
    let d2: Value = serde_json::from_str(&fs::read_to_string(&c2).unwrap()).unwrap();
    let mut d3: Value = serde_json::from_str(&fs::read_to_string(&c3).unwrap()).unwrap();
    d3["form_digest"] = d2["form_digest"].clone();
    fs::write(&c3, serde_json::to_string(&d3).unwrap()).unwrap();
    let out = bhlower(&["verify", p(&c3)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("form_digest"));
}

#[test]
fn search_report_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    ok(&[
        "search",
        "--n",
        "2",
        "--m",
        "2",
        "--restarts",
        "20",
        "--out",
        p(&report),
    ]);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!((doc["best_ratio"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert!(ok(&["verify", p(&report)]).starts_with("PASS m = 2"));

    let exhaustive = dir.path().join("e.json");
    ok(&[
        "search",
        "--n",
        "2",
        "--m",
        "2",
        "--strategy",
        "exhaustive",
        "--alphabet",
        "-1,1",
        "--out",
        p(&exhaustive),
    ]);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&exhaustive).unwrap()).unwrap();
    assert_eq!(doc["evaluations"], 16);
}

#[test]
fn report_with_foreign_form_fails() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    ok(&["search", "--n", "2", "--m", "2", "--out", p(&report)]);
    let mut doc: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    doc["form"]["entries"] = serde_json::json!([[[1, 1], 1]]);
    fs::write(&report, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(code(&["verify", p(&report)]), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["construct", "--m", "1"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["norm", "/nonexistent/form.json"]), 1);
    assert_eq!(code(&["certify", "--m", "5", "--method", "exact"]), 2);
    assert_eq!(code(&["construct", "--m", "12"]), 2);
    assert_eq!(
        code(&["search", "--n", "3", "--m", "3", "--strategy", "exhaustive"]),
        2
    );
    assert_eq!(code(&["--help"]), 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&["norm", p(&bad)]), 1);
    assert_eq!(code(&["verify", p(&bad)]), 1);
}

#[test]
fn outputs_are_reproducible() {
    let args = [
        "search",
        "--n",
        "3",
        "--m",
        "2",
        "--seed",
        "9",
        "--threads",
        "1",
    ];
    assert_eq!(ok(&args), ok(&args));
    let many = [
        "search",
        "--n",
        "3",
        "--m",
        "2",
        "--seed",
        "9",
        "--threads",
        "3",
    ];
    let a: Value = serde_json::from_str(&ok(&args)).unwrap();
    let b: Value = serde_json::from_str(&ok(&many)).unwrap();
    assert_eq!(a["best_ratio"], b["best_ratio"]);
    assert_eq!(ok(&["certify", "--m", "5"]), ok(&["certify", "--m", "5"]));
}
