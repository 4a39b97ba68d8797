use std::process::{Command, Output};

use kbeta::catalog::{self, CatalogKey};
use kbeta::gca::format;

fn kbeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kbeta")).args(args).env_remove("KBETA_DATA_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn validate_p33() {
    let o = kbeta(&["validate", "--family", "P33", "--p", "3", "--cap", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("passed: true"));
}

#[test]
fn rigidity_p33_lists_solutions() {
    let o = kbeta(&["rigidity", "--family", "P33", "--p", "3", "--cap", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("all surjective: true"), "{text}");
    assert!(text.contains("solution 0: "), "{text}");
}

#[test]
fn compare_has_two_matching_rows() {
    let o = kbeta(&["compare", "--family", "Ppn", "--p", "3", "--n", "4", "--cap", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    let dims = doc["dims"].as_array().unwrap();
    assert_eq!(dims.len(), 2);
    assert_eq!(dims[0]["values"], dims[1]["values"]);
    for field in ["command", "key", "checks", "passed", "solutions", "dims", "timings_ms"] {
        assert!(doc.get(field).is_some(), "{field}");
    }
}

#[test]
fn reports_are_byte_stable() {
    let args = ["weakgen", "--family", "P33", "--p", "3", "--cap", "8", "--json"];
    assert_eq!(kbeta(&args).stdout, kbeta(&args).stdout);
    let timed = json(&kbeta(&["hilbert", "--family", "P33", "--p", "3", "--timings", "--json"]));
    assert!(timed["timings_ms"].get("total").is_some());
}

#[test]
fn usage_and_data_errors_exit_with_two() {
    assert_eq!(kbeta(&["validate", "--family", "Nope", "--p", "3"]).status.code(), Some(2));
    assert_eq!(kbeta(&["validate", "--family", "Ppn", "--p", "3"]).status.code(), Some(2));
    assert_eq!(kbeta(&["validate", "--family", "P33", "--p", "3", "--cap", "0"]).status.code(), Some(2));
    assert_eq!(kbeta(&["validate", "--file", "/nonexistent/presentation.json"]).status.code(), Some(2));
    assert_eq!(kbeta(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_with_one_and_names_the_degree() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    let key = CatalogKey::p33();
    let pres = catalog::load(&key).unwrap();
    let index = pres.relations().iter().position(|r| r.label.as_deref() == Some("y*y' = 0")).unwrap();
    std::fs::write(dir.join(key.file_name()), format::to_string(&pres.without_relation(index))).unwrap();

    let o = Command::new(env!("CARGO_BIN_EXE_kbeta"))
        .args(["compare", "--family", "P33", "--p", "3", "--cap", "4"])
        .env("KBETA_DATA_DIR", dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("first failure: degree 2"), "{}", stdout(&o));

    let path = dir.join(key.file_name());
    let o = kbeta(&["compare", "--file", path.to_str().unwrap(), "--p", "3", "--n", "3", "--cap", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn budget_exhaustion_is_a_failed_check() {
    let o = kbeta(&["rigidity", "--family", "P33", "--p", "3", "--cap", "8", "--budget", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("search completed"));
}

#[test]
fn remaining_commands_run() {
    for args in [
        vec!["hilbert", "--family", "Pp3", "--p", "5", "--cap", "10"],
        vec!["betti", "--p", "3", "--n", "3", "--cap", "4"],
        vec!["betti", "--family", "Ppn", "--p", "3", "--n", "4", "--cap", "3"],
        vec!["bss", "--family", "Ppn", "--p", "3", "--n", "5"],
        vec!["tower", "--family", "Ppn", "--p", "3", "--n", "6"],
    ] {
        let o = kbeta(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}
