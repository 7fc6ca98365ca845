use std::process::{Command, Output};

use serde_json::Value;

fn tremor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tremor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = tremor(&all);
    (code(&out), serde_json::from_slice(&out.stdout).expect("valid json"))
}

#[test]
fn list_builtin_empty_and_missing() {
    let out = tremor(&["list"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 17);

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.toml");
    std::fs::write(&empty, "").unwrap();
    let out = tremor(&["list", "--catalog", empty.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());

    let out = tremor(&["list", "--catalog", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
}

#[test]
fn invalid_catalog_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "[[system]]\nid = \"x\"\n").unwrap();
    let out = tremor(&["check-all", "--catalog", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("x"));
}

#[test]
fn estimate_hydrogen() {
    let out = tremor(&["estimate", "hydrogen"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("PASS"));
    let (c, v) = json(&["estimate", "hydrogen"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["value"]["value"], "1.00e-34");
    let d = v["decades"].as_f64().unwrap();
    assert!((d + 0.82).abs() < 0.01);
    assert!(v["breakdown"]["keplerian_check"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn estimate_universe_modern_emits_note() {
    let (c, v) = json(&["estimate", "universe-gravity", "--set", "modern"]);
    assert_eq!(c, 0);
    let d = v["decades"].as_f64().unwrap();
    assert!((d - 1.25).abs() < 0.05);
    assert_eq!(v["verdict"], "informational");
    assert!(!v["notes"].as_array().unwrap().is_empty());
}

#[test]
fn estimate_failure_and_unknown_id() {
    assert_eq!(code(&tremor(&["estimate", "nosuch"])), 2);
    assert_eq!(code(&tremor(&["show", "nosuch"])), 2);
    assert_eq!(code(&tremor(&["estimate", "hydrogen", "--tolerance", "0.1"])), 1);
}

#[test]
fn show_entry() {
    let out = tremor(&["show", "screened-gamma2"]);
    assert_eq!(code(&out), 0);
    let (_, v) = json(&["show", "screened-gamma2"]);
    assert_eq!(v["force"]["action"]["R"], "0");
    assert_eq!(v["force"]["r_exp"], "-3");
}

#[test]
fn solve_examples() {
    let out = tremor(&["solve", "--target", "action", "--gen", "G,M,R"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "G^(1/2) M^(3/2) R^(1/2)");

    let out = tremor(&["solve", "--target", "force", "--gen", "e2,m,R,c", "--fix", "c=-1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("e2^(3/2) m^(-1/2) R^(-5/2)"));

    let (c, v) = json(&["solve", "--target", "force", "--gen", "e2,m,R,c", "--fix", "c=-2"]);
    assert_eq!(c, 0);
    assert_eq!(v["exponents"]["e2"], "2");
    assert_eq!(v["exponents"]["R"], "-3");

    let out = tremor(&["solve", "--target", "kg m^(2) s^(-1)", "--gen", "x:kg,y:m^(2) s^(-1)"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn solve_failures() {
    let out = tremor(&["solve", "--target", "action", "--gen", "m,R"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("inconsistent"));

    let (c, v) = json(&["solve", "--target", "force", "--gen", "e2,m,R,c"]);
    assert_eq!(c, 1);
    assert_eq!(v["status"], "underdetermined");
    assert_eq!(v["nullspace"].as_array().unwrap().len(), 1);

    assert_eq!(code(&tremor(&["solve", "--target", "action", "--gen", "zz"])), 2);
    assert_eq!(code(&tremor(&["solve", "--target", "nonsense!", "--gen", "G"])), 2);
    assert_eq!(
        code(&tremor(&[
            "solve", "--target", "action", "--gen", "G,M,R", "--fix", "G"
        ])),
        2
    );
    assert_eq!(code(&tremor(&["solve", "--target", "action", "--gen", "G,G"])), 2);
}

#[test]
fn thermal_commands() {
    let (c, v) = json(&["thermal", "equiv-temp", "--n", "1e23", "--global-time", "1e-2 s"]);
    assert_eq!(c, 0);
    assert_eq!(v["value"]["value"], "1.51e3");
    assert_eq!(v["value"]["unit"], "K");

    let (c, v) = json(&["thermal", "tau", "--temperature", "2.7 K"]);
    assert_eq!(c, 0);
    assert_eq!(v["value"]["unit"], "s");

    let (c, v) = json(&["thermal", "emittance", "--n", "1e12", "--set", "modern"]);
    assert_eq!(c, 0);
    assert_eq!(v["value"]["value"], "2.43e-6");

    let (c, v) = json(&[
        "thermal",
        "bec-velocity",
        "--temperature",
        "1e-6 K",
        "--n",
        "1e7",
        "--radius",
        "1e-4 m",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["value"]["value"], "6.61e-4");

    let (c, v) = json(&["thermal", "nucleons"]);
    assert_eq!(c, 0);
    assert_eq!(v["value"]["decade"], 76);

    assert_eq!(code(&tremor(&["thermal", "action", "--n", "1e6"])), 0);
    assert_eq!(code(&tremor(&["thermal", "action", "--n", "0.5"])), 1);
    assert_eq!(code(&tremor(&["thermal", "tau", "--temperature", "3 m"])), 1);
    assert_eq!(code(&tremor(&["thermal", "tau", "--temperature", "3 parsecs"])), 2);
}

#[test]
fn check_all_exit_codes() {
    let out = tremor(&["check-all"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("17 entries"));
    assert_eq!(code(&tremor(&["check-all", "--tolerance", "0.1"])), 1);
    assert_eq!(code(&tremor(&["check-all", "--tolerance", "-1"])), 2);
    assert_eq!(code(&tremor(&["check-all", "--set", "codata"])), 2);
    assert_eq!(code(&tremor(&["check-all", "--format", "yaml"])), 2);
}

#[test]
fn check_all_json_is_stable_and_sorted() {
    let a = tremor(&["check-all", "--format", "json"]);
    let b = tremor(&["check-all", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["summary"]["total"], 17);
    assert_eq!(v["summary"]["fail"], 0);
    let ids: Vec<&str> = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["system_id"].as_str().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted_keys = keys.clone();
    sorted_keys.sort();
    assert_eq!(keys, sorted_keys);
}
