use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn quillen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quillen")).args(args).env_remove("QUILLEN_CORPUS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn cp2_model_and_barcodes() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("cp2.model.json");
    let o = quillen(&["model", "build", p(&corpus("cp2_filtration.json")), "--out", p(&model)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&model).unwrap();
    assert!(text.contains("\"kind\": \"persistence-quillen-model\""));

    let o = quillen(&["barcode", p(&model), "pi", "--format", "csv"]);
    assert_eq!(stdout(&o), "degree,birth,death\n2,2,inf\n3,2,4\n5,4,inf\n");
    let o = quillen(&["barcode", p(&model), "h", "--format", "csv"]);
    assert_eq!(stdout(&o), "degree,birth,death\n0,2,inf\n2,2,inf\n4,4,inf\n");
    // The complex file works directly as well.
    let o = quillen(&["barcode", p(&corpus("cp2_filtration.json")), "pi", "--format", "csv", "-N", "7"]);
    assert_eq!(stdout(&o), "degree,birth,death\n2,2,inf\n3,2,4\n5,4,inf\n");
}

#[test]
fn constant_s3_pi() {
    let o = quillen(&["barcode", p(&corpus("s3_constant.json")), "pi", "--format", "csv"]);
    assert_eq!(stdout(&o), "degree,birth,death\n3,0,inf\n");
}

#[test]
fn h_mode_rejects_free_only_models() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let o = quillen(&["model", "build", p(&corpus("cancelling_pair.json")), "--free-only", "--out", p(&model)]);
    assert!(o.status.success());
    let o = quillen(&["barcode", p(&model), "h"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("minimal"));
}

#[test]
fn distances() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.json");
    std::fs::write(&a, "degree,birth,death\n2,0,inf\n3,0,2\n").unwrap();
    std::fs::write(&b, "degree,birth,death\n2,1,inf\n3,1,3\n").unwrap();
    std::fs::write(
        &c,
        r#"{"format_version": 1, "name": "c", "kind": "pi", "bars": [{"degree": 4, "birth": "0", "death": "inf"}]}"#,
    )
    .unwrap();
    assert_eq!(stdout(&quillen(&["distance", p(&a), p(&a), "--format", "csv"])), "0\n");
    assert_eq!(stdout(&quillen(&["distance", p(&a), p(&b), "--format", "csv"])), "1\n");
    assert_eq!(stdout(&quillen(&["distance", p(&a), p(&c), "--format", "csv"])), "inf\n");
    let json = stdout(&quillen(&["distance", p(&a), p(&b), "--solver", "exhaustive"]));
    assert!(json.contains("\"distance\": \"1\""), "{json}");
}

#[test]
fn stability_shift_and_delay() {
    let o = quillen(&["stability", p(&corpus("cp2_filtration.json")), "--shift", "1/2", "-N", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["holds"], true);
    assert_eq!(report["pi_distance"], "1/2");
    assert_eq!(report["certificate_bound"], "1/2");
    assert_eq!(report["homotopy_interleaving_distance"], "not computed");

    let o = quillen(&["stability", p(&corpus("cp2_filtration.json")), "--delay", "1:1", "-N", "7"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["pi_distance"], "1");
    assert_eq!(report["certificate_bound"], "1");

    let o = quillen(&["stability", p(&corpus("cp2_filtration.json")), p(&corpus("s3_constant.json"))]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["certificate_bound"], "not available");
    assert_eq!(report["input_bound"], "not available");
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, r#"{"format_version": 1, "name": "e", "stages": []}"#).unwrap();
    let o = quillen(&["model", "build", p(&empty)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no stages"));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"format_version": 1, "name": "b", "stages": [{"value": "0", "cells": [{"name": "v", "dimension": 2, "attach": "[v,q]"}]}]}"#,
    )
    .unwrap();
    let o = quillen(&["model", "build", p(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error at `v`") || stderr(&o).contains("parse error at `q`"), "{}", stderr(&o));

    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, "{\n  \"format_version\": 1,\n  \"name\": \"u\",\n  \"colour\": 3,\n  \"stages\": []\n}").unwrap();
    let o = quillen(&["model", "build", p(&unknown)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let o = quillen(&["model", "build", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_truncation_exits_3() {
    let o = quillen(&["model", "build", p(&corpus("cp2_filtration.json")), "-N", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = quillen(&["selftest", "-N", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("truncation"));
}

#[test]
fn mutated_selftest_exits_4_at_the_ce_check() {
    let o = quillen(&["selftest", "--mutate"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("cecobar d²=0"), "{}", stderr(&o));
}

#[test]
fn corpus_override_by_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(corpus("s3_constant.json"), dir.path().join("s3_constant.json")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_quillen"))
        .args(["selftest"])
        .env("QUILLEN_CORPUS", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("s3_constant stage 0"));
    assert!(!out.contains("cp2_filtration"));
}
