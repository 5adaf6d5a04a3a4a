//! End-to-end tests of the `taba` binary: exit codes, stdout reports and
//! output files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_taba")
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

fn write_json(path: &Path, value: &serde_json::Value) {
    std::fs::write(path, serde_json::to_string_pretty(value).unwrap()).unwrap();
}

#[test]
fn relatedness_echoes_fixture_informativeness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("transfer.json");
    let log = fixtures().join("pascal_probe_log.json");
    let output = run(&["relatedness", log.to_str().unwrap(), "--tasks", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("1.13"), "{text}");
    assert!(text.contains("2.03"), "{text}");

    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file["values"][0][0], 1.0);
    assert_eq!(file["values"][1][1], 1.0);
    let info = file["informativeness"].as_array().unwrap();
    assert!((info[0].as_f64().unwrap() - 1.13).abs() < 1e-9);
    assert!((info[1].as_f64().unwrap() - 2.03).abs() < 1e-9);
}

#[test]
fn relatedness_unparseable_log_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let output = run(&["relatedness", bad.to_str().unwrap(), "--tasks", "2"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("cannot parse"));
}

#[test]
fn relatedness_missing_pair_is_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.json");
    // Only the 0 -> 1 direction is probed.
    write_json(
        &log,
        &serde_json::json!([{
            "step": 10, "source": 0, "target": 1,
            "score_joint": 0.5, "score_self_pair": 0.6, "score_base": 0.4
        }]),
    );
    let output = run(&["relatedness", log.to_str().unwrap(), "--tasks", "2"]);
    assert_eq!(output.status.code(), Some(3));
    assert!(stderr(&output).contains("1 -> 0"), "{}", stderr(&output));
}

#[test]
fn fit_beta_recovers_fixture_curve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fit.json");
    let curve = fixtures().join("pascal_seg_curve.json");
    let output = run(&["fit-beta", curve.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((file["beta"].as_f64().unwrap() - 0.997).abs() < 5e-4);
    assert!(file["residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn fit_beta_single_point_is_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("curve.json");
    write_json(&curve, &serde_json::json!({"task": "short", "points": [{"n": 5, "gain": 0.1}]}));
    let output = run(&["fit-beta", curve.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(4));
    assert!(stderr(&output).contains("at least 2 points"));
}

#[test]
fn allocate_pascal_uses_dp() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("alloc.json");
    let scenario = fixtures().join("pascal_voc.json");
    let output = run(&["allocate", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    assert!(stdout(&output).contains("solver: dp"));
    assert!(stdout(&output).contains("marginal_at_stop"));

    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file["solver"], "dp");
    let spent = file["spent"].as_u64().unwrap();
    assert!(spent <= 6300);
    let counts = file["counts"].as_object().unwrap();
    assert_eq!(counts.len(), 2);
    assert_eq!(
        counts["cls"].as_u64().unwrap() + 20 * counts["seg"].as_u64().unwrap(),
        spent
    );
}

#[test]
fn allocate_taskonomy_uses_greedy_with_bound_gap() {
    let scenario = fixtures().join("taskonomy.json");
    let output = run(&["allocate", scenario.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("solver: greedy"), "{text}");
    assert!(text.contains("continuous upper bound"), "{text}");
}

#[test]
fn allocate_dp_forced_on_taskonomy_is_exit_5() {
    let scenario = fixtures().join("taskonomy.json");
    let output = run(&["allocate", scenario.to_str().unwrap(), "--solver", "dp"]);
    assert_eq!(output.status.code(), Some(5));
    assert!(stderr(&output).contains("too large"));
}

#[test]
fn simulate_pascal_taba_row_is_maximal() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let scenario = fixtures().join("pascal_voc.json");
    let output = run(&["simulate", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = file["rows"].as_array().unwrap();
    assert_eq!(rows[0]["strategy"], "taba");
    let taba_gain = rows[0]["overall_gain"].as_f64().unwrap();
    for row in &rows[1..] {
        assert!(taba_gain >= row["overall_gain"].as_f64().unwrap(), "{row}");
    }
    let strategies: Vec<&str> = rows.iter().map(|r| r["strategy"].as_str().unwrap()).collect();
    assert_eq!(
        strategies,
        ["taba", "equal_new_images", "equal_budget", "single_task_cls", "single_task_seg", "same_images"]
    );
}

#[test]
fn simulate_sweep_on_five_task_world_is_exit_6() {
    let scenario = fixtures().join("taskonomy.json");
    let output = run(&["simulate", scenario.to_str().unwrap(), "--sweep"]);
    assert_eq!(output.status.code(), Some(6));
    assert!(stderr(&output).contains("exactly 2 tasks"));
}

#[test]
fn simulate_sweep_csv_has_requested_points() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let scenario = fixtures().join("pascal_voc.json");
    let output = run(&[
        "simulate",
        scenario.to_str().unwrap(),
        "--sweep",
        "--sweep-steps",
        "11",
        "--sweep-out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "split_fraction,delta_t");
    assert_eq!(lines.len(), 12);
    assert!(lines[1].starts_with("0.00000000e0,"));
    assert!(lines[11].starts_with("1.00000000e0,"));
}

#[test]
fn simulate_zero_budget_world_has_zero_gains() {
    let dir = tempfile::tempdir().unwrap();
    let mut scenario: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(fixtures().join("pascal_voc.json")).unwrap(),
    )
    .unwrap();
    scenario["task_set"]["budget"] = serde_json::json!(0);
    scenario["world"]["task_set"]["budget"] = serde_json::json!(0);
    let path = dir.path().join("zero.json");
    write_json(&path, &scenario);
    let out = dir.path().join("report.json");
    let output = run(&["simulate", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for row in file["rows"].as_array().unwrap() {
        assert_eq!(row["overall_gain"].as_f64().unwrap(), 0.0, "{row}");
    }
}

#[test]
fn run_writes_all_stage_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let scenario = fixtures().join("pascal_voc.json");
    let output = run(&[
        "run",
        scenario.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--sweep",
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    for name in ["transfer.json", "profile.json", "allocation.json", "report.json", "sweep.csv"] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }

    // The derived profile comes from the probe log and curves, not from the
    // scenario's bundled profile, and lands close to it.
    let profile: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("profile.json")).unwrap()).unwrap();
    assert!((profile["informativeness"][0].as_f64().unwrap() - 1.13).abs() < 1e-6);
    assert!((profile["beta"][1].as_f64().unwrap() - 0.997).abs() < 5e-4);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["rows"][0]["strategy"], "taba");
    assert_eq!(report["rows"][0]["solver"], "dp");
}

#[test]
fn missing_scenario_sections_are_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    write_json(&path, &serde_json::json!({"profile": {"informativeness": [1.0], "beta": [0.5]}}));
    let output = run(&["allocate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("neither task_set nor world"));

    let output = run(&["simulate", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("no world"));
}
