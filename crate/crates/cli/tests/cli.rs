use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn epw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epw")).args(args).output().expect("run epw")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn assert_valid(schema: &str, instance: &Value) {
    let text = std::fs::read_to_string(schema_dir().join(schema)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| format!("{e} at {}", e.instance_path)).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

fn write_coordinate_lagrangian(dir: &Path) -> PathBuf {
    let basis: Vec<Vec<String>> = (0..10)
        .map(|r| (0..20).map(|c| if r == c { "1" } else { "0" }.to_string()).collect())
        .collect();
    let path = dir.join("zero.json");
    std::fs::write(&path, serde_json::json!({"field": "Q", "basis": basis}).to_string()).unwrap();
    path
}

#[test]
fn every_report_matches_its_schema() {
    let cases: &[(&[&str], &str)] = &[
        (&["sample", "--seed", "7", "--field", "Fp", "--prime", "101"], "sample.schema.json"),
        (&["check", "--seed", "1"], "check.schema.json"),
        (&["sextic", "--prime", "101"], "sextic.schema.json"),
        (&["sextic", "--prime", "101", "--cross-check"], "sextic.schema.json"),
        (&["strata"], "strata.schema.json"),
        (&["dual"], "dual.schema.json"),
        (&["verify-duality", "--points", "3"], "verify-duality.schema.json"),
        (&["local-models", "--limit", "2"], "local-models.schema.json"),
        (&["chern"], "chern.schema.json"),
        (&["mukai", "--mode", "septic", "--prime", "101"], "mukai.schema.json"),
        (&["mukai", "--mode", "quadrics", "--prime", "101"], "mukai.schema.json"),
        (&["mukai", "--mode", "multiplicity", "--prime", "101"], "mukai.schema.json"),
        (&["symplectic-unique"], "symplectic-unique.schema.json"),
    ];
    for (args, schema) in cases {
        let out = epw(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        assert_eq!(r["passed"], true, "{args:?}");
        assert_eq!(r["tool"]["version"], env!("CARGO_PKG_VERSION"));
        assert_valid(schema, &r);
    }
}

#[test]
fn chern_report_values() {
    let r = report(&epw(&["chern"]));
    assert_eq!(r["cF"], serde_json::json!([1, -6, 18, -34, 42, -42]));
    assert_eq!(r["wa_class"], 40);
    assert_eq!(r["match"], true);
    let derived: Vec<i64> = r["constants"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["source"] == "derived")
        .map(|c| c["value"].as_i64().unwrap())
        .collect();
    assert_eq!(derived, vec![42, -42]);
}

#[test]
fn sample_then_sextic_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let out = epw(&["sample", "--seed", "7", "--field", "Fp", "--prime", "101", "--out", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let out = epw(&["sextic", "--in", a.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["degree"], 6);
    assert_eq!(r["field"], serde_json::json!({"Fp": 101}));

    // the bare Lagrangian member is accepted too
    let sample: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_valid("lagrangian.schema.json", &sample["lagrangian"]);
    let bare = dir.path().join("bare.json");
    std::fs::write(&bare, sample["lagrangian"].to_string()).unwrap();
    let again = report(&epw(&["sextic", "--in", bare.to_str().unwrap()]));
    assert_eq!(again["sextic"], r["sextic"]);
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        &["sextic", "--seed", "3", "--prime", "101"][..],
        &["strata", "--seed", "2"][..],
        &["verify-duality", "--seed", "5", "--points", "2"][..],
    ] {
        let a = epw(args);
        let b = epw(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn compact_output_is_one_line() {
    let out = epw(&["chern", "--json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn degenerate_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_coordinate_lagrangian(dir.path());
    let out = epw(&["sextic", "--in", zero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate-A"));
}

#[test]
fn failed_verification_exits_with_one() {
    // the zero graph has a decomposable element, so certification fails
    let dir = tempfile::tempdir().unwrap();
    let zero = write_coordinate_lagrangian(dir.path());
    let out = epw(&["check", "--in", zero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["passed"], false);
    assert_valid("check.schema.json", &r);
}

#[test]
fn malformed_input_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_coordinate_lagrangian(dir.path());
    let good: Value = serde_json::from_str(&std::fs::read_to_string(&zero).unwrap()).unwrap();
    let cases: Vec<(Value, &str)> = vec![
        ({ let mut v = good.clone(); v["basis"][2][7] = "x".into(); v }, "basis[2][7]"),
        ({ let mut v = good.clone(); v["basis"][3] = serde_json::json!(["1"]); v }, "basis[3]"),
        ({ let mut v = good.clone(); v["field"] = serde_json::json!({"Fp": 4}); v }, "field"),
        ({ let mut v = good.clone(); v["colour"] = 1.into(); v }, "colour"),
        ({ let mut v = good.clone(); v.as_object_mut().unwrap().remove("basis"); v }, "basis"),
        ({ let mut v = good.clone(); v["basis"][0][0] = 5.into(); v }, "basis[0][0]"),
    ];
    for (i, (value, field)) in cases.into_iter().enumerate() {
        let path = dir.path().join(format!("bad{i}.json"));
        std::fs::write(&path, value.to_string()).unwrap();
        let out = epw(&["sextic", "--in", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "case {i}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "case {i}: {err}");
    }
    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(epw(&["sextic", "--in", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["sextic", "--prime", "4"][..],
        &["sextic", "--prime", "3"][..],
        &["mukai"][..],
        &["mukai", "--mode", "cubic"][..],
        &["sextic", "--in", "/nonexistent/a.json"][..],
    ] {
        assert_eq!(epw(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn prime_mismatch_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    epw(&["sample", "--prime", "101", "--out", a.to_str().unwrap()]);
    assert_eq!(epw(&["strata", "--in", a.to_str().unwrap(), "--prime", "7"]).status.code(), Some(2));
}
