//! End-to-end tests of the binary: flags, job files, exit codes, and report
//! determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semiflow-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_flags_produce_a_schema1_report() {
    let out = run(&["classify", "--G", "1-z^2"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    let cls = &v["results"]["classification"];
    assert_eq!(cls["is_group"], true);
    assert_eq!(cls["theta_max"], 0.0);
    assert_eq!(cls["generates_semigroup"], true);
    assert!(v["errors"].as_array().unwrap().is_empty());
}

#[test]
fn invalid_expression_exits_nonzero() {
    let out = run(&["classify", "--G", "1 + sinh(z)"]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sinh"), "stderr: {err}");
}

#[test]
fn unknown_example_exits_nonzero() {
    let out = run(&["flow", "--example", "does-not-exist"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown example"), "stderr: {err}");
}

#[test]
fn two_symbol_sources_are_rejected() {
    let out = run(&["classify", "--G", "-z", "--example", "mobius-group"]);
    assert!(!out.status.success());
}

#[test]
fn matrix_diagonal_case_writes_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let spec = dir.path().join("spectrum.csv");
    let out = run(&[
        "matrix",
        "--G",
        "-z",
        "--N",
        "32",
        "--t",
        "1.0",
        "--out",
        report.to_str().unwrap(),
        "--spectrum-csv",
        spec.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let m = &v["results"]["matrix"];
    assert!(m["characterization_defect"].as_f64().unwrap() < 1e-8);
    assert!(m["expm_block_diff"].as_f64().unwrap() < 1e-8);
    let csv = std::fs::read_to_string(&spec).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,sigma"));
    assert_eq!(lines.next(), Some("0,1"));
    // σ_1 = e^{-1}
    let second = lines.next().unwrap();
    let sigma1: f64 = second.split(',').nth(1).unwrap().parse().unwrap();
    assert!((sigma1 - (-1.0f64).exp()).abs() < 1e-10);
}

#[test]
fn job_file_path_matches_flag_path() {
    let dir = tempfile::tempdir().unwrap();
    let report_a = dir.path().join("a.json");
    let report_b = dir.path().join("b.json");

    let out = run(&[
        "classify",
        "--G",
        "(1-z)^2",
        "--out",
        report_a.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let job = serde_json::json!({
        "command": "classify",
        "g": "(1-z)^2",
        "outputs": {"report": report_b}
    });
    let job_path = dir.path().join("job.json");
    std::fs::write(&job_path, serde_json::to_string(&job).unwrap()).unwrap();
    let out = run(&["--job", job_path.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let a = load_without_volatile(&report_a);
    let b = load_without_volatile(&report_b);
    assert_eq!(a["results"], b["results"]);
}

fn load_without_volatile(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v.as_object_mut().unwrap().remove("job");
    v
}

#[test]
fn reports_are_deterministic_outside_the_timing_block() {
    let dir = tempfile::tempdir().unwrap();
    let r1 = dir.path().join("r1.json");
    let r2 = dir.path().join("r2.json");
    for path in [&r1, &r2] {
        let out = run(&[
            "report-all",
            "--example",
            "linear-contraction",
            "--N",
            "24",
            "--t",
            "0.5",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    let mut a = load_without_volatile(&r1);
    let mut b = load_without_volatile(&r2);
    a.as_object_mut().unwrap().remove("job");
    b.as_object_mut().unwrap().remove("job");
    assert_eq!(a, b, "reports differ outside the timing block");
}

#[test]
fn list_examples_includes_the_catalogue() {
    let out = run(&["list-examples"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let names: Vec<&str> = v["results"]["examples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    for expected in ["mobius-group", "siskakis-log", "halfplane-affine", "lotto"] {
        assert!(names.contains(&expected), "{expected} missing from {names:?}");
    }
}

#[test]
fn halfplane_pipeline_reports_norms() {
    let out = run(&["halfplane", "--example", "halfplane-affine", "--t", "0.5", "--t", "1.0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let h = &v["results"]["halfplane"];
    assert!((h["delta"].as_f64().unwrap() + 1.0).abs() < 1e-6);
    let norms = h["norms"].as_array().unwrap();
    assert!((norms[0][1].as_f64().unwrap() - 0.25f64.exp()).abs() < 1e-6);
    assert!(h["group"].is_null());
}

#[test]
fn flow_command_checks_closed_forms_and_confinement() {
    let out = run(&["flow", "--example", "parabolic-analytic", "--t", "0.5", "--grid", "6"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let f = &v["results"]["flow"];
    assert!(f["closed_form_deviation"].as_f64().unwrap() < 1e-8);
    assert_eq!(f["dw_boundary"], true);
    for entry in f["sup_norms"].as_array().unwrap() {
        assert!(entry[1].as_f64().unwrap() < 1.0);
    }
}

#[test]
fn partial_failures_embed_errors_and_exit_one() {
    // G = z is not a generator: flow integration fails, but a report is
    // still produced with the failures embedded.
    let out = run(&["flow", "--G", "z", "--t", "0.5", "--grid", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert!(!v["errors"].as_array().unwrap().is_empty());
}
