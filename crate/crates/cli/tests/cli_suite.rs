//! End-to-end command tests: file formats, exit codes, determinism.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hopfoid"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("spawn hopfoid");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_dualize_reconstruct_roundtrip_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let pair: PathBuf = dir.path().join("pair.json");
    let alg = dir.path().join("alg.json");
    let recon = dir.path().join("recon.json");

    let (code, _, _) = run(&["gen", "pair-groupoid", "--n", "3", "--output", path_str(&pair)]);
    assert_eq!(code, 0);

    let (code, _, _) = run(&["dualize", "--input", path_str(&pair), "--output", path_str(&alg)]);
    assert_eq!(code, 0);
    let alg_doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&alg).unwrap()).unwrap();
    assert_eq!(alg_doc["type"], "algebroid");
    assert_eq!(alg_doc["basis"].as_array().unwrap().len(), 9);

    let report = dir.path().join("recon_report.json");
    let (code, _, _) = run(&[
        "reconstruct",
        "--input",
        path_str(&alg),
        "--output",
        path_str(&recon),
        "--report",
        path_str(&report),
    ]);
    assert_eq!(code, 0);
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["verdicts"]["is_groupoid_algebroid"], true);
    assert_eq!(rep["verdicts"]["arrow_count"], 9);

    let (code, stdout, _) = run(&["roundtrip", "--input", path_str(&pair)]);
    assert_eq!(code, 0);
    let rt: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(rt["verdicts"]["unit_is_isomorphism"], true);
    assert_eq!(rt["verdicts"]["triangle_counit_unit"], true);
    assert_eq!(rt["verdicts"]["triangle_spectral_unit"], true);
}

#[test]
fn corrupted_groupoid_input_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("pair.json");
    run(&["gen", "pair-groupoid", "--n", "2", "--output", path_str(&pair)]);
    // Corrupt one composition entry.
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&pair).unwrap()).unwrap();
    for triple in doc["compose"].as_array_mut().unwrap() {
        let t = triple.as_array().unwrap();
        if t[0] == "e_1_2" && t[1] == "e_2_1" {
            *triple = serde_json::json!(["e_1_2", "e_2_1", "e_2_2"]);
        }
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = dir.path().join("out.json");
    let (code, _, stderr) = run(&["dualize", "--input", path_str(&bad), "--output", path_str(&out)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("invalid"), "{stderr}");
}

#[test]
fn negative_verdicts_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let idem = dir.path().join("idem.json");
    run(&["gen", "idempotent-monoid", "--output", path_str(&idem)]);

    let g = dir.path().join("g.json");
    let report = dir.path().join("rep.json");
    let (code, _, _) = run(&[
        "reconstruct",
        "--input",
        path_str(&idem),
        "--output",
        path_str(&g),
        "--report",
        path_str(&report),
    ]);
    assert_eq!(code, 1);
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["verdicts"]["is_groupoid_algebroid"], false);
    assert_eq!(rep["verdicts"]["failure"]["rank_defect"], 1);
    // The written groupoid is the unit groupoid.
    let gd: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(gd["arrows"].as_array().unwrap().len(), 1);

    let ex2 = dir.path().join("ex2.json");
    run(&["gen", "dependent-grouplikes", "--output", path_str(&ex2)]);
    let (code, stdout, _) = run(&["classify", "--input", path_str(&ex2)]);
    assert_eq!(code, 1);
    let rep: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(rep["verdicts"]["is_sheaf_coalgebra"], false);
    assert_eq!(rep["verdicts"]["failure"]["point"], "2");
    assert_eq!(rep["verdicts"]["failure"]["rank_defect"], 1);
}

#[test]
fn solver_inapplicable_is_a_diagnostic_exit() {
    let dir = tempfile::tempdir().unwrap();
    let rot = dir.path().join("rot.json");
    run(&["gen", "rotation", "--output", path_str(&rot)]);
    let (code, _, stderr) = run(&["grouplikes", "--input", path_str(&rot)]);
    assert_eq!(code, 2);
    assert!(stderr.contains("solver"), "{stderr}");
}

#[test]
fn check_axioms_reports_named_failures() {
    let dir = tempfile::tempdir().unwrap();
    let prim = dir.path().join("prim.json");
    run(&["gen", "primitive-element", "--output", path_str(&prim)]);
    let (code, stdout, _) = run(&["check-axioms", "--input", path_str(&prim)]);
    assert_eq!(code, 1);
    let rep: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(rep["verdicts"]["axioms"]["iii_multiplicativity"]["ok"], false);
    assert_eq!(rep["verdicts"]["axioms"]["i_counit"]["ok"], true);

    let idem = dir.path().join("idem.json");
    run(&["gen", "idempotent-monoid", "--output", path_str(&idem)]);
    let (code, _, _) = run(&["check-axioms", "--input", path_str(&idem)]);
    assert_eq!(code, 0);
}

#[test]
fn grouplikes_listing_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let ex2 = dir.path().join("ex2.json");
    run(&["gen", "dependent-grouplikes", "--output", path_str(&ex2)]);
    let (code, out1, _) = run(&["grouplikes", "--input", path_str(&ex2)]);
    assert_eq!(code, 0);
    let (_, out2, _) = run(&["grouplikes", "--input", path_str(&ex2)]);
    assert_eq!(out1, out2);
    let rep: serde_json::Value = serde_json::from_str(&out1).unwrap();
    assert_eq!(rep["verdicts"]["grouplikes"]["1"].as_array().unwrap().len(), 2);
    assert_eq!(rep["verdicts"]["grouplikes"]["2"].as_array().unwrap().len(), 1);
}

#[test]
fn seeded_generation_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    run(&["gen", "random-union", "--seed", "42", "--output", path_str(&a)]);
    run(&["gen", "random-union", "--seed", "42", "--output", path_str(&b)]);
    assert_eq!(
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&b).unwrap()
    );
    let (code, _, _) = run(&["roundtrip", "--input", path_str(&a)]);
    assert_eq!(code, 0);

    let s = dir.path().join("s.json");
    run(&["gen", "random-sheaf", "--seed", "7", "--output", path_str(&s)]);
    let (code, _, _) = run(&["roundtrip", "--input", path_str(&s)]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_are_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let (code, _, _) = run(&["gen", "unknown-kind", "--output", path_str(&out)]);
    assert_eq!(code, 2);
    // Type mismatch: roundtrip over an algebroid.
    let idem = dir.path().join("idem.json");
    run(&["gen", "idempotent-monoid", "--output", path_str(&idem)]);
    let (code, _, _) = run(&["roundtrip", "--input", path_str(&idem)]);
    assert_eq!(code, 2);
    // Missing file.
    let (code, _, _) = run(&["classify", "--input", "/nonexistent.json"]);
    assert_eq!(code, 2);
}
