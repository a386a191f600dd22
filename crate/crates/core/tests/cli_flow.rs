//! End-to-end command flows: config parsing from disk, simulate artifacts,
//! bit-identical reruns, verify on checkpoints (including deliberately
//! corrupted ones), scan, and a small sweep.

use acflow::cli::{cmd_scan, cmd_simulate, cmd_sweep, cmd_verify, parse_config, serialize_config};
use std::path::Path;

fn smoke_config_text(eps_list: &str, t_end: f64, ckpt: usize) -> String {
    format!(
        r#"
[metric]
kind = "flat-torus"
side = 2.0

[interface]
kind = "circle"
center = [1.0, 1.0]
radius = 0.5

[run]
eps = {eps_list}
t_end = {t_end}
cadence = 1

[output]
checkpoint_every = {ckpt}
"#
    )
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn first_line(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines().next().unwrap_or("").to_string()
}

#[test]
fn parse_and_round_trip_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), &smoke_config_text("[0.08]", 0.1, 1));
    let cfg = parse_config(&path).unwrap();
    assert_eq!(cfg.run.eps, vec![0.08]);
    // Round trip through the serializer.
    let path2 = dir.path().join("round.toml");
    std::fs::write(&path2, serialize_config(&cfg)).unwrap();
    let back = parse_config(&path2).unwrap();
    assert_eq!(back, cfg);
    // Missing file is an io error, not a panic.
    assert!(parse_config(&dir.path().join("nope.toml")).is_err());
}

#[test]
fn simulate_writes_artifacts_and_to_spec() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(&write_config(dir.path(), &smoke_config_text("[0.08]", 0.1, 1))).unwrap();
    let out = dir.path().join("out");
    std::fs::create_dir_all(&out).unwrap();
    let pass = cmd_simulate(&cfg, &out, false).unwrap();
    assert!(pass, "simulate clauses failed");

    for (file, schema) in [
        ("diagnostics.csv", "# schema: acflow.diagnostics v1"),
        ("g_series.csv", "# schema: acflow.g_series v1"),
        ("dissipation.csv", "# schema: acflow.dissipation v1"),
        ("brakke.csv", "# schema: acflow.brakke_residual v1"),
    ] {
        let p = out.join(file);
        assert!(p.exists(), "{file} missing");
        assert_eq!(first_line(&p), schema, "{file} schema line");
    }
    assert!(out.join("ledger.txt").exists());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], serde_json::Value::Bool(true));
    let n_ckpt = std::fs::read_dir(out.join("checkpoints")).unwrap().count();
    assert!(n_ckpt >= 20, "{n_ckpt} checkpoints");

    // Determinism: a rerun produces byte-identical diagnostics.
    let out2 = dir.path().join("out2");
    std::fs::create_dir_all(&out2).unwrap();
    cmd_simulate(&cfg, &out2, false).unwrap();
    let a = std::fs::read(out.join("diagnostics.csv")).unwrap();
    let b = std::fs::read(out2.join("diagnostics.csv")).unwrap();
    assert_eq!(a, b, "diagnostics differ between identical runs");
}

#[test]
fn verify_passes_then_rejects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(&write_config(dir.path(), &smoke_config_text("[0.08]", 0.1, 1))).unwrap();
    let out = dir.path().join("out");
    std::fs::create_dir_all(&out).unwrap();
    assert!(cmd_simulate(&cfg, &out, false).unwrap());
    assert!(cmd_verify(&cfg, &out, false).unwrap(), "verify should pass on honest data");

    // Corrupt every checkpoint: scale the field by 2.
    let scene = cfg.scene_for(cfg.run.eps[0]);
    let grid = acflow::manifold::ChartGrid::build(&scene.metric).unwrap();
    let ckpt_dir = out.join("checkpoints");
    for entry in std::fs::read_dir(&ckpt_dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().map_or(false, |x| x == "ckpt") {
            let mut state = acflow::phasefield::read_checkpoint(&path, &grid).unwrap();
            for v in &mut state.u.values {
                *v *= 2.0;
            }
            acflow::phasefield::write_checkpoint(&path, &state).unwrap();
        }
    }
    let pass = cmd_verify(&cfg, &out, false).unwrap();
    assert!(!pass, "verify must fail on scaled fields");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("verify_report.json")).unwrap())
            .unwrap();
    let clauses = report["clauses"].as_array().unwrap();
    let failed: Vec<&str> = clauses
        .iter()
        .filter(|c| c["pass"] == serde_json::Value::Bool(false))
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"equipartition"), "failed clauses: {failed:?}");
    assert!(failed.contains(&"max-principle"), "failed clauses: {failed:?}");
}

#[test]
fn scan_reports_on_checkpoints() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config(&write_config(dir.path(), &smoke_config_text("[0.08]", 0.1, 1))).unwrap();
    let out = dir.path().join("out");
    std::fs::create_dir_all(&out).unwrap();
    assert!(cmd_simulate(&cfg, &out, false).unwrap());
    // Report-only by default: exit success regardless of probe outcomes.
    assert!(cmd_scan(&cfg, &out, false).unwrap());
    assert!(out.join("scan_report.json").exists());
    assert_eq!(
        first_line(&out.join("scan_violations.csv")),
        "# schema: acflow.scan_violations v1"
    );
    assert_eq!(
        first_line(&out.join("forward_density.csv")),
        "# schema: acflow.forward_density v1"
    );
}

#[test]
fn sweep_trends_on_two_widths() {
    let dir = tempfile::tempdir().unwrap();
    let cfg =
        parse_config(&write_config(dir.path(), &smoke_config_text("[0.16, 0.08]", 0.1, 0))).unwrap();
    let out = dir.path().join("out");
    std::fs::create_dir_all(&out).unwrap();
    let pass = cmd_sweep(&cfg, &out, 2, false).unwrap();
    let report_path = out.join("sweep_report.csv");
    assert_eq!(first_line(&report_path), "# schema: acflow.sweep_report v1");
    let text = std::fs::read_to_string(&report_path).unwrap();
    assert_eq!(text.lines().count(), 4, "schema + header + two rows");
    // Two-halving trend of the discrepancy mass must already show.
    assert!(pass, "sweep trend clauses failed: {text}");
    assert!(out.join("eps_0.16").join("diagnostics.csv").exists());
    assert!(out.join("eps_0.08").join("diagnostics.csv").exists());
}

#[test]
fn simulate_rejects_eps_lists() {
    let dir = tempfile::tempdir().unwrap();
    let cfg =
        parse_config(&write_config(dir.path(), &smoke_config_text("[0.16, 0.08]", 0.1, 0))).unwrap();
    let out = dir.path().join("out");
    std::fs::create_dir_all(&out).unwrap();
    assert!(cmd_simulate(&cfg, &out, false).is_err());
}
