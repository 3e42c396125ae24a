use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclic-units"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_datum(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn diagram_of_m11_lists_standard_levels() {
    let out = run(&["diagram", "--p", "3", "--n", "2", "--kind", "mab", "--a", "1", "--b", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let sums: Vec<&Value> = v["levels"].as_array().unwrap().iter().map(|l| &l["standard_sum"]).collect();
    assert_eq!(sums, vec![&serde_json::json!([[1, 2]]), &serde_json::json!([[1, 2]])]);
    assert_eq!(v["valid"], Value::Bool(true));
    assert_eq!(v["indecomposability_certificate"], Value::Bool(true));
}

#[test]
fn permutation_diagram_is_zero() {
    for i in ["0", "1", "2"] {
        let out = run(&["diagram", "--p", "3", "--n", "2", "--kind", "perm", "--i", i]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert!(v["levels"].as_array().unwrap().iter().all(|l| l["invariants"].as_array().unwrap().is_empty()));
    }
}

#[test]
fn bad_parameters_exit_2() {
    assert_eq!(run(&["diagram", "--p", "3", "--n", "2", "--kind", "mab", "--a", "0"]).status.code(), Some(2));
    assert_eq!(run(&["diagram", "--p", "4", "--n", "2", "--kind", "perm"]).status.code(), Some(2));
    assert_eq!(run(&["diagram", "--p", "3"]).status.code(), Some(2));
    assert_eq!(run(&["primes", "--p", "3", "--bound", "100", "--density"]).status.code(), Some(2));
}

#[test]
fn primes_below_forty() {
    let out = run(&["primes", "--p", "3", "--bound", "40"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "7\n13\n31\n");
}

#[test]
fn density_subcommand_and_flag_agree() {
    let a = run(&["density", "--p", "5", "--bound", "100000"]);
    let b = run(&["primes", "--p", "5", "--bound", "100000", "--density"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let observed = json(&a)["observed"].as_f64().unwrap();
    assert!((observed - 0.64).abs() < 0.06);
}

#[test]
fn predict_single_ramified_place() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_datum(
        &dir,
        "d.json",
        r#"{"p":3,"n":1,"r1":3,"r2":0,"ramified":[{"inertia_order":3,"decomposition_order":3}],
            "s_counts":[0,0],"regime":"HilbertCyclic"}"#,
    );
    let out_path = dir.path().join("report.json");
    let out = run(&["predict", "--input", &input, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["report"]["library_summands"], serde_json::json!([[[1, 0], 1]]));
    assert_eq!(v["report"]["minkowski_count"], serde_json::json!(2));
    assert_eq!(v["report"]["status"], serde_json::json!("Resolved"));
    assert!(v["tool_version"].as_str().unwrap().starts_with("cyclic-units"));
}

#[test]
fn predict_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_datum(
        &dir,
        "d.json",
        r#"{"p":3,"n":2,"r1":4,"r2":1,"ramified":[{"inertia_order":3,"decomposition_order":9},
            {"inertia_order":3,"decomposition_order":9},{"inertia_order":3,"decomposition_order":9}],
            "s_counts":[1,0,0],"regime":"HilbertCyclic","all_S_split":true}"#,
    );
    let first = run(&["predict", "--input", &input]);
    let second = run(&["predict", "--input", &input]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn predict_partial_exits_3() {
    // more places than the unit rank can absorb: negative free multiplicity
    let dir = tempfile::tempdir().unwrap();
    let places = vec![r#"{"inertia_order":3,"decomposition_order":3}"#; 5].join(",");
    let body = format!(r#"{{"p":3,"n":1,"r1":1,"r2":0,"ramified":[{places}],"s_counts":[0,0],"regime":"HilbertCyclic"}}"#);
    let input = write_datum(&dir, "d.json", &body);
    let out = run(&["predict", "--input", &input]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["report"]["status"], serde_json::json!("PartiallyResolved"));
}

#[test]
fn predict_unsupported_regimes_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let nonsplit = write_datum(
        &dir,
        "a.json",
        r#"{"p":3,"n":2,"r1":1,"r2":0,"ramified":[],"s_counts":[0,1,0],"regime":"HilbertCyclic"}"#,
    );
    assert_eq!(run(&["predict", "--input", &nonsplit]).status.code(), Some(4));
    let general = write_datum(
        &dir,
        "b.json",
        r#"{"p":3,"n":1,"r1":1,"r2":0,"ramified":[],"s_counts":[0,0],"regime":"General"}"#,
    );
    assert_eq!(run(&["predict", "--input", &general]).status.code(), Some(4));
}

#[test]
fn predict_rejects_bad_input_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let truncated = write_datum(&dir, "t.json", r#"{"p":3,"n":1,"r1":1,"#);
    assert_eq!(run(&["predict", "--input", &truncated]).status.code(), Some(2));
    let unknown = write_datum(
        &dir,
        "u.json",
        r#"{"p":3,"n":1,"r1":1,"r2":0,"ramified":[],"s_counts":[0,0],"regime":"HilbertCyclic","extra":1}"#,
    );
    assert_eq!(run(&["predict", "--input", &unknown]).status.code(), Some(2));
    let inconsistent = write_datum(
        &dir,
        "i.json",
        r#"{"p":3,"n":1,"r1":1,"r2":0,"ramified":[],"s_counts":[0,2],"regime":"HilbertCyclic","all_S_split":true}"#,
    );
    assert_eq!(run(&["predict", "--input", &inconsistent]).status.code(), Some(2));
    assert_eq!(run(&["predict", "--input", "/nonexistent/d.json"]).status.code(), Some(2));
}

#[test]
fn selftest_suites_pass() {
    for suite in ["lemma", "stability", "corollary", "all"] {
        let out = run(&["selftest", "--suite", suite, "--seed", "3"]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8(out.stdout).unwrap().contains(" 0 failed"));
    }
}
