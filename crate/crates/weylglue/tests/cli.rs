//! End-to-end tests of the installed binary: exit codes, JSON stability,
//! and file-driven subcommands.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weylglue"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weylglue-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write scratch file");
    path
}

#[test]
fn rootsys_json_is_correct_and_byte_stable() {
    let a = run(&["rootsys", "A1", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).expect("valid JSON");
    assert_eq!(v["weyl_order"], 2);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["num_positive_roots"], 1);
    assert_eq!(v["longest_word"], serde_json::json!([1]));
    let b = run(&["rootsys", "A1", "--json"]);
    assert_eq!(a.stdout, b.stdout, "JSON output must be byte-identical");

    let g2 = run(&["rootsys", "G2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&g2.stdout).expect("valid JSON");
    assert_eq!(v["weyl_order"], 12);
    assert_eq!(v["num_positive_roots"], 6);
}

#[test]
fn bad_input_and_usage_exit_codes() {
    assert_eq!(run(&["rootsys", "Z9"]).status.code(), Some(3));
    assert_eq!(run(&["rootsys"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(
        run(&["schubert", "A2", "--j0", "1"]).status.code(),
        Some(3),
        "incomplete triples without --all are rejected"
    );
}

#[test]
fn order_cap_exit_code() {
    let out = bin()
        .env("WEYLGLUE_MAX_ORDER", "10")
        .args(["rootsys", "B3"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(4));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("cap"), "stderr explains the cap: {msg}");
}

#[test]
fn schubert_sweep_passes() {
    let out = run(&["schubert", "A2", "--all", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["pass"], true);
    assert_eq!(v["num_checks"], 52);
}

#[test]
fn glued_homology_json_betti() {
    let out = run(&["glued-homology", "A2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["betti"], serde_json::json!([[0, 1], [1, 1]]));
    assert_eq!(v["h0_is_trivial_character"], true);
    assert_eq!(v["top_is_sign_character"], true);
}

#[test]
fn strat_induction_passes() {
    let out = run(&["strat-induction", "B2", "--j0", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["pass"], true);
    assert_eq!(v["base_case_cofinality"]["pass"], true);
}

#[test]
fn permutohedron_with_checks_passes() {
    let out = run(&["permutohedron", "A2", "--check-faces", "--homology"]);
    assert_eq!(out.status.code(), Some(0));
    // Rank 4 is gated behind --allow-rank4 and exits with the resource code.
    let out = run(&["permutohedron", "D4"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn glue_ff_on_file() {
    let path = scratch_file(
        "diagram.json",
        r#"{
  "poset": {"nodes": ["x", "y"], "leq_pairs": [[0, 1]]},
  "sets": {"0": ["p", "q"], "1": ["z"]},
  "maps": {"0,1": {"p": "z", "q": "z"}}
}"#,
    );
    let out = run(&["glue", "ff", "--diagram", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["agree"], true);
    assert_eq!(v["fully_faithful"], true);

    let bad = scratch_file("bad.json", "{ not json");
    let out = run(&["glue", "ff", "--diagram", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn glue_recollement_on_file() {
    let path = scratch_file(
        "poset.json",
        r#"{"nodes": ["a", "b", "c"], "leq_pairs": [[0, 1], [0, 2]]}"#,
    );
    let out = run(&[
        "glue",
        "recollement",
        "--poset",
        path.to_str().unwrap(),
        "--open",
        "1,2",
        "--seed",
        "7",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["pass"], true);

    // A non-up-closed subset is rejected as bad input.
    let out = run(&[
        "glue",
        "recollement",
        "--poset",
        path.to_str().unwrap(),
        "--open",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_all_smoke() {
    let out = run(&["verify-all", "A1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(v["pass"], true);
}
