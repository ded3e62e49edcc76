use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagwork")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("single JSON document")
}

#[test]
fn bott_example_is_exact() {
    let out = run(&["bott", "--weight", "-2,0", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim_end(),
        r#"{"kind":"single","degree":1,"weight":[-1,-1],"dimension":1}"#
    );
    assert_eq!(json(&["bott", "--weight", "-1,0"])["kind"], "zero");
    let flag = json(&["bott", "--weight", "1,0", "--flag", "0,1,3"]);
    assert_eq!(flag["dimension"], 3);
}

#[test]
fn hodge_of_full_flag() {
    let v = json(&["hodge", "--flag", "0,1,2,3"]);
    let expect: Value = serde_json::from_str("[[1,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,1]]").unwrap();
    assert_eq!(v, expect);
}

#[test]
fn omega_lists_weights() {
    let v = json(&["omega", "--flag", "0,1,2", "--p", "1"]);
    assert_eq!(v[0]["weight"], serde_json::json!([-1, 1]));
    assert_eq!(v[0]["multiplicity"], 1);
}

#[test]
fn grassmannian_positivity_not_refuted() {
    let args = ["positivity", "--builtin", "grassmannian:4,2", "--k", "1", "--s", "1", "--samples", "500", "--seed", "0"];
    let v = json(&args);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["tolerance"], 1e-9);
    assert_eq!(v["result"]["verdict"], "not_refuted");
}

#[test]
fn output_is_deterministic() {
    let args = ["positivity", "--builtin", "grassmannian:3,1", "--k", "0", "--s", "1", "--samples", "50", "--seed", "7"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["crosscheck", "--n", "2", "--samples", "5", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn tensor_file_input() {
    let t = flagwork::curvature::grassmannian_curvature(3, 1).unwrap();
    let path = std::env::temp_dir().join(format!("flagwork-cli-{}.json", std::process::id()));
    std::fs::write(&path, flagwork::curvature::to_json_value(&t).to_string()).unwrap();
    let from_file = json(&["bkn", "--tensor", path.to_str().unwrap(), "--p", "2", "--q", "1"]);
    let builtin = json(&["bkn", "--builtin", "grassmannian:3,1", "--p", "2", "--q", "1"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(from_file, builtin);
    assert_eq!(builtin["result"]["spectra"][0]["eigenvalues"].as_array().unwrap().len(), 4);
}

#[test]
fn vanish_reports() {
    let v = json(&["vanish", "K*E{n=3,r=2,griffiths_k=1} * det(E)", "--p", "0", "--q", "2"]);
    let reports = v.as_array().unwrap();
    let det = reports.iter().find(|r| r["theorem_id"] == "det_twist").unwrap();
    assert_eq!(det["conclusion"]["kind"], "vanishes");
    assert!(reports.iter().all(|r| r["conjectural"] == false));
    let v = json(&["vanish", "E{r=2,ks_positive=0:2}", "--n", "3", "--p", "2", "--q", "2", "--conjectural"]);
    assert!(v.as_array().unwrap().iter().any(|r| r["conjectural"] == true));
}

#[test]
fn sharpness_and_crosscheck() {
    let v = json(&["sharpness", "--n", "3", "--k", "1"]);
    assert_eq!(v["consistent"], true);
    assert_eq!(v["boundary_nonzero"], true);
    let v = json(&["crosscheck", "--nu", "1,-2,0.5", "--mu", "1,2,1"]);
    assert_eq!(v["result"]["pass"], true);
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["bott", "--weight", "1,x"],
        vec!["bott", "--weight", "1,0", "--rank", "3"],
        vec!["hodge", "--flag", "0,2,1"],
        vec!["positivity", "--builtin", "sphere:2", "--k", "0", "--s", "1"],
        vec!["bkn", "--tensor", "/nonexistent/tensor.json"],
        vec!["vanish", "E{r=2", "--n", "2", "--p", "0", "--q", "0"],
        vec!["vanish", "E{r=2}", "--p", "0", "--q", "0"],
        vec!["sharpness", "--n", "2", "--k", "2"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn table_format() {
    let out = run(&["hodge", "--flag", "0,1,3", "--format", "table"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1  0  0\n0  1  0\n0  0  1\n");
}
