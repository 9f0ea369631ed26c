use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn sepal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepal"))
        .args(args)
        .env_remove("SEPAL_BUDGET_STATES")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = sepal(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    (out.status.code().unwrap(), v)
}

#[test]
fn exit_codes_follow_status() {
    let e23 = fixture("e23.txt");
    let om = fixture("omega0_35.txt");
    assert_eq!(sepal(&["validate", "--graph", &e23]).status.code(), Some(0));
    assert_eq!(sepal(&["hsat", "check", "--graph", &e23, "--h", "w"]).status.code(), Some(1));
    let unknown = ["monoid", "congruent", "--graph", &om, "--x", "3v", "--y", "v", "--max-states", "3"];
    assert_eq!(sepal(&unknown).status.code(), Some(2));
    assert_eq!(sepal(&["validate", "--graph", "/nonexistent/graph.txt"]).status.code(), Some(3));
    assert_eq!(sepal(&["validate", "--bogus"]).status.code(), Some(3));
    assert_eq!(sepal(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_comes_from_flag_then_environment() {
    let om = fixture("omega0_35.txt");
    let args = ["--json", "monoid", "congruent", "--graph", &om, "--x", "3v", "--y", "v"];
    let out = Command::new(env!("CARGO_BIN_EXE_sepal"))
        .args(args)
        .env("SEPAL_BUDGET_STATES", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["provenance"]["budget"]["max_states"], 3);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--max-states", "100000"]);
    let out = Command::new(env!("CARGO_BIN_EXE_sepal"))
        .args(&with_flag)
        .env("SEPAL_BUDGET_STATES", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn reports_carry_provenance() {
    let (code, v) = json(&["verify", "phi0", "--graph", &fixture("e23.txt")]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["verb"], "verify");
    assert_eq!(v["payload"]["all_zero"], true);
    assert_eq!(v["provenance"]["graph_hash"].as_str().map(str::len), Some(64));
    assert!(!v["provenance"]["distinguished"].as_array().unwrap().is_empty());
}

#[test]
fn json_is_byte_identical_across_runs() {
    let w22 = fixture("w22.txt");
    for args in [
        vec!["--json", "verify", "phi1", "--graph", &w22],
        vec!["--json", "monoid", "present", "--graph", &w22],
        vec!["--json", "mnlab", "ideal-matrices", "--m", "2", "--n", "2"],
    ] {
        let a = sepal(&args);
        let b = sepal(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn constructed_graphs_parse_back() {
    let out = sepal(&["construct", "emn", "--m", "2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let printed = String::from_utf8(out.stdout).unwrap();
    assert_eq!(printed.trim_end(), std::fs::read_to_string(fixture("e23.txt")).unwrap().trim_end());
    let dir = std::env::temp_dir().join(format!("sepal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("resolved.txt");
    let resolved = sepal(&["construct", "resolve", "--graph", &fixture("e23.txt")]);
    std::fs::write(&path, &resolved.stdout).unwrap();
    let (code, v) = json(&["validate", "--graph", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(code, 0, "{v}");
}

#[test]
fn minimal_partition_values() {
    let (code, v) = json(&["mnlab", "example59", "--m", "4", "--n", "6"]);
    assert_eq!(code, 0);
    let p = &v["payload"];
    assert_eq!(p["group"]["text"], "Z/2");
    assert_eq!(p["quotient"]["group"]["text"], "Z/2");
}

#[test]
fn bad_expressions_are_errors() {
    let e23 = fixture("e23.txt");
    let (code, v) = json(&["nf", "--graph", &e23, "e1.3"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "error");
    assert_eq!(v["payload"]["code"], "expression");
    let (code, v) = json(&["nf", "--graph", &e23, "e3", "e3*"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["normal_form"], "v - e1 e1* - e2 e2*");
}
