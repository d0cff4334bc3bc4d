use std::process::Command;

use k3lat_cli::{check_text, run, Outcome};
use serde_json::Value;

fn k3lat(args: &[&str]) -> Outcome {
    run(std::iter::once("k3lat").chain(args.iter().copied()))
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("{e}: {s}"))
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap();
    s.push('\n');
    s
}

fn check_of(v: &Value) -> Value {
    check_text(&render(v), "doc.json").unwrap().result
}

#[test]
fn legendre_exclusion_is_a_validation_error() {
    let out = k3lat(&["squares", "--n", "7", "--k", "3"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.is_empty());
    let err = json(&out.stderr);
    assert_eq!(err["error"]["code"], "legendre_exclusion");
    assert!(err["error"]["message"].as_str().unwrap().starts_with("Legendre exclusion"));
    assert_eq!(err["error"]["witness"], json(r#"{"a": 0, "b": 0}"#));
}

#[test]
fn odd_chain_class_is_nef() {
    let out = k3lat(&["nef", "--flavor", "odd", "--r", "5", "--class", "7,3,-1,-1,-1,-1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = json(&out.stdout);
    assert_eq!(doc["result"]["nef"], true);
    assert_eq!(doc["result"]["inequality_chain"], true);
}

#[test]
fn rank4_fixture_columns() {
    let out = k3lat(&["rank4", "--which", "1"]);
    assert_eq!(out.code, 0);
    let doc = json(&out.stdout);
    assert_eq!(doc["result"]["columns"], json("[[2,1,0,0,0],[-1,0,1,0,0],[-1,0,0,1,0],[-1,0,0,0,1]]"));
    let gram = doc["checks"].as_array().unwrap().iter().find(|c| c["name"] == "source_gram_matches_fixture").unwrap();
    assert_eq!(gram["pass"], true);
    assert_eq!(gram["details"]["gram"], json("[[2,-1,-1,-1],[-1,-2,0,0],[-1,0,-2,0],[-1,0,0,-2]]"));
}

#[test]
fn exit_codes() {
    // input validation
    assert_eq!(k3lat(&["lattice", "validate", "--d", "1", "--a", "0", "--b", "1"]).code, 1);
    assert_eq!(k3lat(&["cones", "enumerate", "--flavor", "odd", "--r", "6"]).code, 1);
    assert_eq!(k3lat(&["cremona", "--r", "4", "--ijk", "2,1,3", "--class", "1,0,0,0,0"]).code, 1);
    assert_eq!(k3lat(&["rank4", "--which", "1", "--split", "10,5,-2,-2,-2,-2"]).code, 1);
    assert_eq!(k3lat(&["nef", "--flavor", "odd", "--r", "5", "--class", "1,2"]).code, 1);
    // usage
    let out = k3lat(&["squares", "--n", "5", "--k", "6"]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out.stderr)["error"]["kind"], "usage");
    assert_eq!(k3lat(&["frobnicate"]).code, 1);
    // computation: the search ceiling
    let out = k3lat(&["squares", "--n", "100000000000", "--k", "3"]);
    assert_eq!(out.code, 2);
    assert_eq!(json(&out.stderr)["error"]["code"], "search_ceiling");
    // a Zariski input with L.D <= 0
    assert_eq!(k3lat(&["zariski", "--flavor", "even", "--r", "2", "--class", "0,-1,0"]).code, 1);
}

#[test]
fn help_and_version_succeed() {
    let out = k3lat(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("squares"));
    assert_eq!(k3lat(&["--version"]).code, 0);
}

#[test]
fn quiet_and_pretty() {
    let out = k3lat(&["--quiet", "squares", "--n", "29", "--k", "5"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let out = k3lat(&["squares", "--n", "29", "--k", "5", "--pretty"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("squares\n"));
    assert!(out.stdout.contains("PASS  sum_holds"));
    assert_eq!(k3lat(&["squares", "--n", "29", "--k", "5", "--pretty", "--json"]).code, 1);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--d", "4", "--a", "7", "--b", "-1", "--L", "1,1"];
    let a = k3lat(&args);
    let b = k3lat(&args);
    assert_eq!(a, b);
}

#[test]
fn rationals_are_lowest_terms_strings() {
    let out = k3lat(&["zariski", "--flavor", "odd", "--r", "4", "--class", "5,1,-3,0,0"]);
    let doc = json(&out.stdout);
    assert_eq!(doc["result"]["positive"], json(r#"["5/2","1","-1/2","0","0"]"#));
}

#[test]
fn incremented_matrix_entry_fails_gram_check() {
    let mut doc = json(&k3lat(&["embed", "--d", "3", "--a", "2", "--b", "-2", "--L", "1,1"]).stdout);
    let entry = &mut doc["result"]["initial_columns"][1][2];
    *entry = Value::from(entry.as_i64().unwrap() + 1);
    let r = check_of(&doc);
    assert_eq!(r["verified"], false);
    assert_eq!(r["first_divergence"]["check"], "gram_preserved");
    assert_eq!(r["first_divergence"]["recomputed"]["pass"], false);
}

#[test]
fn reordered_trace_fails_replay() {
    let mut doc = json(&k3lat(&["embed", "--d", "1", "--a", "3", "--b", "-1", "--L", "1,0"]).stdout);
    let steps = doc["result"]["trace"]["steps"].as_array_mut().unwrap();
    assert!(steps.len() >= 2);
    steps.swap(0, 1);
    let r = check_of(&doc);
    assert_eq!(r["verified"], false);
    assert_eq!(r["first_divergence"]["check"], "trace_replays");
}

#[test]
fn tampered_result_field_is_a_divergence() {
    let mut doc = json(&k3lat(&["squares", "--n", "100", "--k", "4"]).stdout);
    doc["result"]["parts"][0] = Value::from(7);
    let r = check_of(&doc);
    assert_eq!(r["verified"], false);
    assert_eq!(r["first_divergence"]["check"], "sum_holds");

    // consistent but stale checks: squares of a different n
    let mut doc = json(&k3lat(&["squares", "--n", "100", "--k", "4"]).stdout);
    doc["inputs"]["n"] = Value::from(101);
    let r = check_of(&doc);
    assert_eq!(r["first_divergence"]["check"], "inputs_match");
}

#[test]
fn reformatted_document_is_not_byte_identical() {
    let doc = json(&k3lat(&["squares", "--n", "100", "--k", "4"]).stdout);
    let r = check_text(&serde_json::to_string(&doc).unwrap(), "doc.json").unwrap().result;
    assert_eq!(r["first_divergence"]["reason"], "document_bytes_differ");
}

#[test]
fn schema_mismatches_exit_1() {
    let good = json(&k3lat(&["squares", "--n", "100", "--k", "4"]).stdout);
    let mut cases = Vec::new();
    cases.push("not json".to_string());
    let mut v = good.clone();
    v["schema_version"] = Value::from("2");
    cases.push(render(&v));
    let mut v = good.clone();
    v.as_object_mut().unwrap().remove("checks");
    cases.push(render(&v));
    let mut v = good.clone();
    v["command"] = Value::from("bogus");
    cases.push(render(&v));
    let mut v = good.clone();
    v["result"]["parts"] = Value::from("x");
    cases.push(render(&v));
    for text in cases {
        let e = check_text(&text, "doc.json").unwrap_err();
        assert_eq!(e.exit_code(), 1, "{e}");
    }
}

#[test]
fn pair_section_replays() {
    let out = k3lat(&["nefify", "--flavor", "even", "--r", "3", "--matrix", "1,0,0,0;0,-1,-1,0", "--L", "1,0", "--C", "0,1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let mut doc = json(&out.stdout);
    let pair = &doc["result"]["pair"];
    assert_eq!(pair["normalization"], "c_dot_r_non_positive");
    assert_eq!(pair["trace"].as_array().unwrap().len(), 2);
    assert_eq!(check_of(&doc)["verified"], true);
    doc["result"]["pair"]["trace"].as_array_mut().unwrap().swap(0, 1);
    assert_eq!(check_of(&doc)["first_divergence"]["check"], "pair_trace_replays");
}

#[test]
fn nefify_rejects_non_positive_square() {
    let out = k3lat(&["nefify", "--flavor", "odd", "--r", "5", "--matrix", "5,1,-2,0,0,0", "--L", "1"]);
    assert_eq!(out.code, 1);
    assert_eq!(json(&out.stderr)["error"]["code"], "precondition");
}

#[test]
fn binary_round_trip_through_a_file() {
    let bin = env!("CARGO_BIN_EXE_k3lat");
    let out = Command::new(bin).args(["a3", "--a", "5", "--b", "7"]).output().unwrap();
    assert!(out.status.success());
    let path = std::env::temp_dir().join(format!("k3lat-cli-test-{}.json", std::process::id()));
    std::fs::write(&path, &out.stdout).unwrap();
    let chk = Command::new(bin).arg("check").arg("--file").arg(&path).output().unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(chk.status.code(), Some(0), "{}", String::from_utf8_lossy(&chk.stdout));
    let r = json(&String::from_utf8(chk.stdout).unwrap());
    assert_eq!(r["result"]["verified"], true);

    let missing = Command::new(bin).args(["check", "--file", "/nonexistent/k3lat.json"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(json(&String::from_utf8(missing.stderr).unwrap())["error"]["kind"], "io");
}
