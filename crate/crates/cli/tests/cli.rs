//! Behavior tests for the individual subcommands.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qrepeat"))
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_witness_spec(dir: &Path) -> PathBuf {
    let spec = dir.join("witness.json");
    fs::write(
        &spec,
        r#"{"paper": {"gamma2": 1.0471975511965976, "gamma3": 0.7853981633974483, "xi": [0.0, 0.6, 0.4]}}"#,
    )
    .unwrap();
    spec
}

#[test]
fn analyze_reports_the_witness_instance() {
    let dir = tmp_dir("analyze_witness");
    let spec = write_witness_spec(&dir);
    let json = dir.join("report.json");
    let out = bin()
        .arg("analyze")
        .arg(&spec)
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["flags"]["cp"], true);
    assert_eq!(report["flags"]["tp"], true);
    assert_eq!(report["flags"]["unital"], true);
    assert_eq!(report["flags"]["repeatable"], false);
    assert!(report["violations"]["repeatable"].as_f64().unwrap() > 1e-3);
    // Choi spectrum sums to the unit trace.
    let eigs = report["channel"]["choi_eigenvalues"].as_array().unwrap();
    let total: f64 = eigs.iter().map(|v| v.as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-10);
    // Provenance echoes the input.
    assert_eq!(report["provenance"]["input"]["paper"]["xi"][1], 0.6);
}

#[test]
fn analyze_flags_repeatable_family() {
    let dir = tmp_dir("analyze_repeatable");
    let spec = dir.join("gamma2_zero.json");
    fs::write(
        &spec,
        r#"{"paper": {"gamma2": 0.0, "gamma3": 1.0, "xi": [0.0, 0.0, 1.0]}}"#,
    )
    .unwrap();
    let json = dir.join("report.json");
    let out = bin()
        .arg("analyze")
        .arg(&spec)
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["flags"]["repeatable"], true);
    assert_eq!(report["flags"]["repeatable_to_depth"], true);
    assert_eq!(report["flags"]["unital"], true);
}

#[test]
fn dilate_round_trips_through_analyze() {
    let dir = tmp_dir("dilate_round_trip");
    let spec = write_witness_spec(&dir);

    let report_single = dir.join("single.json");
    let out = bin()
        .arg("analyze")
        .arg(&spec)
        .arg("--json")
        .arg(&report_single)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let dilation_spec = dir.join("dilation.json");
    let out = bin()
        .arg("dilate")
        .arg(&spec)
        .arg("--out")
        .arg(&dilation_spec)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let report_dilated = dir.join("dilated.json");
    let out = bin()
        .arg("analyze")
        .arg(&dilation_spec)
        .arg("--json")
        .arg(&report_dilated)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let single: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_single).unwrap()).unwrap();
    let dilated: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report_dilated).unwrap()).unwrap();

    // Same induced channel...
    for i in 0..3 {
        let ts = single["channel"]["t"][i].as_f64().unwrap();
        let td = dilated["channel"]["t"][i].as_f64().unwrap();
        assert!((ts - td).abs() < 1e-12);
        for j in 0..3 {
            let ms = single["channel"]["m"][i][j].as_f64().unwrap();
            let md = dilated["channel"]["m"][i][j].as_f64().unwrap();
            assert!((ms - md).abs() < 1e-12, "M[{i}][{j}]");
        }
    }
    // ...opposite repeatability verdicts.
    assert_eq!(single["flags"]["repeatable"], false);
    assert_eq!(dilated["flags"]["repeatable"], true);
}

#[test]
fn dilate_rejects_inadmissible_environment() {
    let dir = tmp_dir("dilate_reject");
    let spec = dir.join("bad.json");
    fs::write(
        &spec,
        r#"{"paper": {"gamma2": 1.0, "gamma3": 1.0, "xi": [0.1, 0.6, 0.4]}}"#,
    )
    .unwrap();
    let out = bin().arg("dilate").arg(&spec).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("xi_1 = 0"), "stderr: {stderr}");
}

#[test]
fn repeat_traces_the_environment_collapse() {
    let dir = tmp_dir("repeat_collapse");
    let spec = dir.join("collapse.json");
    fs::write(
        &spec,
        r#"{"paper": {"gamma2": 1.5707963267948966, "gamma3": 1.5707963267948966, "xi": [0.0, 1.0, 0.0]}}"#,
    )
    .unwrap();
    let seq = dir.join("zpoles.json");
    fs::write(&seq, "[[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]]").unwrap();

    let out = bin()
        .arg("repeat")
        .arg(&spec)
        .args(["--steps", "2", "--rho-seq"])
        .arg(&seq)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "step,drift,environment_purity");
    // Processing a z-pole state wipes the environment to the maximally mixed
    // state: drift 1/2 already at step 1, purity 1/2.
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "1");
    let drift: f64 = first[1].parse().unwrap();
    let purity: f64 = first[2].parse().unwrap();
    assert!((drift - 0.5).abs() < 1e-10, "drift {drift}");
    assert!((purity - 0.5).abs() < 1e-10, "purity {purity}");
}

#[test]
fn repeat_on_repeatable_spec_has_no_drift() {
    let dir = tmp_dir("repeat_flat");
    let spec = dir.join("flat.json");
    fs::write(
        &spec,
        r#"{"paper": {"gamma2": 0.0, "gamma3": 0.9, "xi": [0.3, 0.4, 0.5]}}"#,
    )
    .unwrap();
    let out = bin()
        .arg("repeat")
        .arg(&spec)
        .args(["--steps", "5", "--seed", "11"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    for line in String::from_utf8(out.stdout).unwrap().lines().skip(1) {
        let drift: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(drift <= 1e-10, "line {line}");
    }
}

#[test]
fn repeat_rejects_short_sequences() {
    let dir = tmp_dir("repeat_short");
    let spec = write_witness_spec(&dir);
    let seq = dir.join("short.json");
    fs::write(&seq, "[[0.0, 0.0, 1.0]]").unwrap();
    let out = bin()
        .arg("repeat")
        .arg(&spec)
        .args(["--steps", "3", "--rho-seq"])
        .arg(&seq)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mixture_spec_analyzes_as_repeatable() {
    let dir = tmp_dir("mixture");
    let spec = dir.join("mixture.json");
    // Equal phase-damping mixture of I and sigma3.
    fs::write(
        &spec,
        r#"{"mixture": {"weights": [0.5, 0.5], "unitaries": [
            [[[1,0],[0,0]],[[0,0],[1,0]]],
            [[[1,0],[0,0]],[[0,0],[-1,0]]]
        ]}}"#,
    )
    .unwrap();
    let json = dir.join("report.json");
    let out = bin()
        .arg("analyze")
        .arg(&spec)
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["flags"]["repeatable"], true);
    assert_eq!(report["flags"]["unital"], true);
    // Phase damping to the z-axis.
    let m = &report["channel"]["m"];
    assert!(m[0][0].as_f64().unwrap().abs() < 1e-12);
    assert!((m[2][2].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn custom_grid_runs_without_expectations() {
    let dir = tmp_dir("custom_grid");
    let grid = dir.join("grid.json");
    fs::write(
        &grid,
        r#"[{"gamma2": 0.0, "gamma3": 0.5, "xi": [0.0, 0.0, 1.0]}]"#,
    )
    .unwrap();
    let json = dir.join("rows.json");
    let out = bin()
        .arg("paper")
        .args(["--grid"])
        .arg(&grid)
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["matches_expectation"], serde_json::Value::Null);
    assert_eq!(rows[0]["repeatable"], true);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(0));
    assert_eq!(bin().arg("--version").output().unwrap().status.code(), Some(0));
}
