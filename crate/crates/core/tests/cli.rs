use std::process::{Command, Output};

use serde_json::Value;

fn rsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsl"))
        .args(args)
        .env_remove("RSL_BUDGET_SECS")
        .output()
        .expect("binary runs")
}

fn validator() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/rsl-1.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn json_of(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap_or_else(|e| panic!("not json ({e}): {}", String::from_utf8_lossy(bytes)))
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = validator().iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "schema errors: {errors:?}\n{v:#}");
}

const COMMANDS: &[&[&str]] = &[
    &["field-info", "--p", "7", "--k", "3"],
    &["subgroup", "--p", "13", "--d", "3", "--list"],
    &["sumset", "--p", "13", "--set", "0,1,3,9", "--restricted"],
    &["clique", "--p", "11", "--k", "2", "--d", "3", "--enumerate"],
    &["clique", "--p", "13", "--d", "2", "--graph", "gp"],
    &["certify", "--p", "13", "--d", "2", "--set", "0,1,3,9"],
    &["certify", "--p", "7", "--d", "2", "--set", "3,5,6", "--variant", "odd"],
    &["decomp", "--p", "13", "--k", "1", "--d", "2"],
    &["decomp", "--p", "5", "--k", "2", "--d", "2", "--mode", "subset0"],
    &["verify-thm", "--name", "1.4", "--format", "json"],
    &["density-scan", "--d", "3", "--s", "3", "--limit", "5000"],
    &["em-search", "--N", "30", "--d", "2"],
    &["em-verify", "--set", "6,19,30", "--d", "2"],
    &["sieve-bound", "--N", "1000000", "--d", "2"],
    &["sieve-bound", "--N", "1000000", "--d", "2", "--Q", "10"],
];

#[test]
fn every_command_emits_valid_json() {
    for args in COMMANDS {
        let out = rsl(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json_of(&out.stdout);
        assert_eq!(v["command"], args[0]);
        assert_valid(&v);
    }
}

#[test]
fn results_are_deterministic() {
    for args in COMMANDS {
        let a = json_of(&rsl(args).stdout);
        let b = json_of(&rsl(args).stdout);
        assert_eq!(a["result"], b["result"], "{args:?}");
    }
}

#[test]
fn serial_and_parallel_agree() {
    for args in [
        &["clique", "--p", "7", "--k", "3", "--d", "2", "--graph", "gps-nozero"][..],
        &["decomp", "--p", "13", "--d", "2"],
        &["em-search", "--N", "200"],
    ] {
        let serial: Vec<&str> = args.iter().copied().chain(["--workers", "1"]).collect();
        let a = json_of(&rsl(args).stdout);
        let b = json_of(&rsl(&serial).stdout);
        assert_eq!(a["result"], b["result"], "{args:?}");
    }
}

#[test]
fn decomp_lists_both_f13_solutions() {
    let v = json_of(&rsl(&["decomp", "--p", "13", "--k", "1", "--d", "2"]).stdout);
    assert_eq!(v["result"]["solutions"], serde_json::json!([[0, 1, 3, 9], [0, 4, 10, 12]]));
}

#[test]
fn usage_errors_exit_one() {
    let out = rsl(&["decomp", "--p", "13", "--unknown-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Usage:"), "{err}");
    let last = err.lines().last().unwrap();
    assert_valid(&json_of(last.as_bytes()));

    let out = rsl(&["subgroup", "--p", "13", "--d", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out.stderr);
    assert_eq!(v["error"]["kind"], "not_a_divisor");
    assert_valid(&v);
}

#[test]
fn failed_verification_exits_two() {
    let out = rsl(&["em-verify", "--set", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_valid(&json_of(&out.stdout));
}

#[test]
fn timeout_exits_three() {
    let out = rsl(&["em-search", "--N", "100000", "--budget", "0.001"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json_of(&out.stderr);
    assert_eq!(v["error"]["kind"], "timeout");
    assert_valid(&v);
}

#[test]
fn budget_env_is_read() {
    let out = Command::new(env!("CARGO_BIN_EXE_rsl"))
        .args(["em-search", "--N", "100000"])
        .env("RSL_BUDGET_SECS", "0.001")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_rsl"))
        .args(["em-search", "--N", "10"])
        .env("RSL_BUDGET_SECS", "soon")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_thm_csv_header() {
    for name in ["1.1", "1.5", "2.6"] {
        let out = rsl(&["verify-thm", "--name", name]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("theorem,instance,expected,observed,status"));
        assert!(lines.all(|l| l.starts_with(name) && l.ends_with(",PASS")), "{text}");
    }
}

#[test]
fn density_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = rsl(&["density-scan", "--d", "3", "--s", "1", "--limit", "1000", "--csv", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("p,in_window,window_boundary,digits_ok,in_Cd,in_D_tilde,alpha_p"));
    let summary = json_of(&out.stdout);
    assert_eq!(lines.count() as u64, summary["result"]["primes"].as_u64().unwrap());
}

#[test]
fn reproduce_quick_suite() {
    let out = rsl(&["reproduce", "--suite", "quick", "--format", "json"]);
    let v = json_of(&out.stdout);
    assert_valid(&v);
    assert_eq!(out.status.code(), Some(0), "{v:#}");
    assert_eq!(v["result"]["passed"], 12);
}

#[test]
fn reproduce_paper_suite_table() {
    let out = rsl(&["reproduce", "--suite", "paper"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.ends_with("12 passed, 0 failed\n"), "{text}");
}
