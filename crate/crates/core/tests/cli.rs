use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn altstar(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altstar")).args(args).current_dir(dir).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn with_catalog(names: &[&str]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for n in names {
        let out = altstar(&["catalog", n, "-o", &format!("{n}.json")], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    dir
}

#[test]
fn verify_theorem_on_zorn() {
    let dir = with_catalog(&["zorn"]);
    let out = altstar(&["verify-theorem", "zorn.json", "--idempotent", "e", "--n", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["theorem_equal"], Value::Bool(true));
    assert_eq!(v["hypotheses"], serde_json::json!({"idempotent": true, "spade": true, "club": true}));
    assert_eq!(v["spaces"]["star_derivation"], 6);
    assert!(v.get("failed_checks").is_none());
    assert_eq!(v["claims"].as_array().unwrap().len(), 9);
}

#[test]
fn solve_star_derivations_of_m2() {
    let dir = with_catalog(&["m2"]);
    let out = altstar(&["solve", "m2.json", "--space", "star-der"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["spaces"], serde_json::json!({"star_derivation": 3}));
    let ops = v["basis_operators"]["star_derivation"].as_array().unwrap();
    assert_eq!(ops.len(), 3);
    assert_eq!(ops[0].as_array().unwrap().len(), 8);
}

#[test]
fn solve_full_and_restricted_jordan() {
    let dir = with_catalog(&["m2"]);
    let full = report(&altstar(&["solve", "m2.json", "--space", "jordan", "--n", "3", "--full"], dir.path()));
    assert_eq!(full["spaces"]["jordan_n_full"], 3);
    let restricted = report(&altstar(&["solve", "m2.json", "--space", "jordan", "--n", "3"], dir.path()));
    assert_eq!(restricted["spaces"]["jordan_n_restricted"], 3);
}

#[test]
fn usage_errors() {
    let dir = with_catalog(&["m2"]);
    for args in [
        vec!["solve", "m2.json", "--space", "jordan"],
        vec!["solve", "m2.json", "--space", "der", "--full"],
        vec!["solve", "m2.json", "--space", "der", "--n", "3"],
        vec!["verify-theorem", "m2.json", "--idempotent", "e", "--n", "1"],
        vec!["peirce", "m2.json", "--idempotent", "nope"],
        vec!["catalog", "sedenions", "-o", "x.json"],
        vec!["bogus"],
    ] {
        let out = altstar(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn parse_errors_name_the_entry() {
    let dir = with_catalog(&["zorn"]);
    let text = std::fs::read_to_string(dir.path().join("zorn.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["table"][0][0][0] = Value::String("2/0".into());
    std::fs::write(dir.path().join("bad.json"), doc.to_string()).unwrap();
    let out = altstar(&["validate", "bad.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("table[0][0][0]"));

    std::fs::write(dir.path().join("trunc.json"), &text[..text.len() / 2]).unwrap();
    let out = altstar(&["validate", "trunc.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));
}

#[test]
fn broken_involution_is_reported_with_basis_pair() {
    let dir = with_catalog(&["m2"]);
    let text = std::fs::read_to_string(dir.path().join("m2.json")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    let dim = doc["dim"].as_u64().unwrap() as usize;
    for r in 0..dim {
        for c in 0..dim {
            doc["involution"][r][c] = Value::String(if r == c { "1" } else { "0" }.into());
        }
    }
    std::fs::write(dir.path().join("noinv.json"), doc.to_string()).unwrap();
    let out = altstar(&["validate", "noinv.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    assert_eq!(v["validation"]["valid"], Value::Bool(false));
    let first = &v["validation"]["failures"][0];
    assert_eq!(first["axiom"], "anti_automorphism");
    assert_eq!(first["tuple"].as_array().unwrap().len(), 2);
    assert_eq!(v["failed_checks"], serde_json::json!(["validation"]));
}

#[test]
fn peirce_report_on_zorn() {
    let dir = with_catalog(&["zorn"]);
    let out = altstar(&["peirce", "zorn.json", "--idempotent", "e"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["peirce"]["blocks"], serde_json::json!({"A11": 1, "A12": 3, "A21": 3, "A22": 1}));
    assert_eq!(v["peirce"]["rules_hold"], Value::Bool(true));
    let products = v["peirce"]["nonzero_off_diagonal_products"].as_array().unwrap();
    assert!(products.iter().any(|p| p["block"] == "A12"));
}

#[test]
fn peirce_by_coordinates_rejects_non_idempotent() {
    let dir = with_catalog(&["zorn"]);
    let out = altstar(&["peirce", "zorn.json", "--idempotent", "1,1,0,0,0,0,0,0"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    assert_eq!(v["hypotheses"]["idempotent"], Value::Bool(false));
    assert!(v.get("idempotent_error").is_some());
}

#[test]
fn claims_report_flags_stated_forms() {
    let dir = with_catalog(&["zorn"]);
    let out = altstar(&["claims", "zorn.json", "--idempotent", "e", "--n", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    let claims = v["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 17);
    let status = |id: &str| claims.iter().find(|c| c["id"] == id).unwrap()["status"].as_str().unwrap().to_string();
    assert_eq!(status("C5"), "flagged");
    assert_eq!(status("C6"), "flagged");
    assert_eq!(status("C9"), "flagged");
    assert_eq!(status("C12"), "pass");
    assert!(claims.iter().find(|c| c["id"] == "C6").unwrap().get("witness").is_some());
    assert!(claims.iter().find(|c| c["id"] == "C12").unwrap().get("witness").is_none());
    assert_eq!(v["pipeline"].as_array().unwrap().len(), 9);
}

#[test]
fn timing_is_opt_in() {
    let dir = with_catalog(&["m2"]);
    let plain = report(&altstar(&["validate", "m2.json"], dir.path()));
    assert!(plain.get("runtime_ms").is_none());
    let timed = report(&altstar(&["--timing", "validate", "m2.json"], dir.path()));
    assert!(timed["runtime_ms"].is_u64());
}

#[test]
fn exported_files_round_trip() {
    let dir = with_catalog(&["m3", "zorn", "m2sum"]);
    for (name, alg) in [
        ("m3", altstar::catalog::matrix_star_algebra(3).unwrap()),
        ("zorn", altstar::catalog::zorn_algebra()),
        ("m2sum", altstar::catalog::m2_sum()),
    ] {
        let back = altstar::file::parse_algebra_file(&dir.path().join(format!("{name}.json"))).unwrap();
        assert_eq!(back, alg, "{name}");
    }
}
