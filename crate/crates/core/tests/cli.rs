use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn poincare(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poincare")).args(args).env_remove("POINCARE_LOG").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn present_writes_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d3.json");
    let o = poincare(&["present", "--input", &data("dihedral3.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["relations"], serde_json::json!(["a^2", "b^2", "(a*b)^3"]));
    assert_eq!(v["verification"]["passed"], true);
    let gap = std::fs::read_to_string(out.with_extension("gap")).unwrap();
    assert!(gap.contains("rels := [a^2, b^2, (a*b)^3];;"));
}

#[test]
fn gap_to_stdout() {
    let o = poincare(&["present", "--input", &data("z2.json"), "--format", "gap"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rels := [a*b*a^-1*b^-1];;"));
}

#[test]
fn modular_group_from_matrices() {
    let o = poincare(&["present", "--input", &data("psl2z.json"), "--format", "gap"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rels := [b^2, (a*b)^3];;"), "{}", stdout(&o));

    let o = poincare(&["dirichlet", "--input", &data("psl2z.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stable"], true);
    assert_eq!(v["faces"].as_array().unwrap().len(), 3);
}

#[test]
fn mismatched_pairing_is_reported() {
    let o = poincare(&["present", "--input", &data("dihedral3_perturbed.json")]);
    assert_eq!(o.status.code(), Some(2));
    let line = String::from_utf8(o.stderr).unwrap();
    let d: Value = serde_json::from_str(line.lines().next().unwrap()).unwrap();
    assert_eq!(d["code"], "PAIRING_MISMATCH");
    assert_eq!(d["side"], 1);
}

#[test]
fn bad_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"space\": 3}").unwrap();
    assert_eq!(poincare(&["present", "--input", p.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(poincare(&["present", "--input", "/nonexistent/job.json"]).status.code(), Some(1));
}

#[test]
fn non_positive_tolerance_is_rejected() {
    let o = poincare(&["present", "--input", &data("dihedral3.json"), "--tol", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn factor_and_verify() {
    let o = poincare(&["factor", "--input", &data("dihedral3.json"), "--word", "a*b*a"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["word"].is_string());
    assert_eq!(v["generators"].as_array().unwrap().len(), 2);

    let o = poincare(&["verify", "--input", &data("z2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn drawing_is_deterministic() {
    let args = ["draw", "--input", &data("dihedral3.json"), "--window-center", "0,0", "--window-radius", "1", "--seed", "3"];
    let (a, b) = (poincare(&args), poincare(&args));
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("<svg"));
    assert_eq!(a.stdout, b.stdout);
}
