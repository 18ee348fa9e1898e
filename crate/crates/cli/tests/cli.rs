use std::process::{Command, Output};

use serde_json::Value;

fn bundlecheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bundlecheck")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = bundlecheck(args);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (v, out.status.code().unwrap())
}

#[test]
fn lemma1_passes() {
    let (v, code) = json(&["verify", "lemma1", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["overall"], "PASS");
    let rec = &v["checks"][0];
    assert_eq!(rec["outputs"]["splitting"], "{1,-3}");
    assert_eq!(rec["outputs"]["h0"], 2);
}

#[test]
fn stability_at_two_is_stable() {
    let (v, code) = json(&["verify", "stability", "--N", "2", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["outputs"]["verdict"], "STABLE");
    assert_eq!(v["checks"][0]["status"], "PASS");
}

#[test]
fn stability_at_three_is_flagged_not_failed() {
    let (v, code) = json(&["verify", "stability", "--N", "3", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"][0]["status"], "FLAGGED");
    assert_eq!(v["checks"][0]["outputs"]["verdict"], "CONDITIONALLY_STABLE([(-3,2)])");
}

#[test]
fn polarization_one_is_a_usage_error() {
    let out = bundlecheck(&["verify", "stability", "--N", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("N>1 required"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_command_is_a_usage_error() {
    assert_eq!(bundlecheck(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(bundlecheck(&["verify", "stability", "--N", "two"]).status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let a = bundlecheck(&["verify", "all", "--format", "json"]);
    let b = bundlecheck(&["verify", "all", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let t1 = bundlecheck(&["verify", "all"]);
    let t2 = bundlecheck(&["verify", "all"]);
    assert_eq!(t1.stdout, t2.stdout);
}

#[test]
fn out_flag_writes_the_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let out = bundlecheck(&["verify", "chern", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let flagged = v["checks"].as_array().unwrap().iter().find(|c| c["id"] == "chern.degree_e(2,-1)").unwrap();
    assert_eq!(flagged["status"], "FLAGGED");
    assert_eq!(flagged["outputs"]["oracle"], "12*N + 6");
}

#[test]
fn p_file_changes_the_digest_and_can_fail() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.txt");
    std::fs::write(&small, "# small perturbation\n1/20 y^3 u w^2\n-1/30 y z^2 v w^2\n").unwrap();
    let (base, _) = json(&["verify", "lemma2", "--format", "json"]);
    let (pert, code) = json(&["verify", "lemma2", "--format", "json", "--p-file", small.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_ne!(base["input_digest"], pert["input_digest"]);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "-y^3 v w^2\n").unwrap();
    let (_, code) = json(&["verify", "lemma2", "--format", "json", "--p-file", bad.to_str().unwrap()]);
    assert_eq!(code, 1);

    let off = dir.path().join("off.txt");
    std::fs::write(&off, "y^3 w^3\n").unwrap();
    assert_eq!(bundlecheck(&["verify", "lemma1", "--p-file", off.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.txt");
    assert_eq!(bundlecheck(&["verify", "lemma1", "--p-file", missing.to_str().unwrap()]).status.code(), Some(2));
}
