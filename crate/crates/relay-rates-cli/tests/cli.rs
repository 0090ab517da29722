//! End-to-end CLI checks: exit codes, validation mode, output files and
//! manifests, and the dmc/fading/geometry surfaces not covered by the
//! acceptance suite.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relay-rates"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn gaussian_scenario(out: Option<(&Path, &str)>) -> String {
    let output = match out {
        None => String::new(),
        Some((path, format)) => format!(
            r#","output":{{"path":"{}","format":"{format}"}}"#,
            path.display()
        ),
    };
    format!(
        r#"{{"model":"gaussian","parameters":{{"channel":{{"g12":0.1,"g1r":2.0,"g21":0.1,"g2r":0.5,"gr1":2.0,"gr2":0.5,"P":20.0}},"grid":{{"points":300}}}}{output},"seed":3}}"#
    )
}

#[test]
fn unknown_subcommand_exits_2() {
    let out = bin().arg("nonsense").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_scenario_file_exits_2_with_json_error() {
    let out = bin()
        .args(["gaussian", "check", "--scenario", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    let err: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(err["error"], "validation");
    assert!(err["message"].as_str().unwrap().contains("scenario"));
}

#[test]
fn invalid_channel_is_rejected_before_compute() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    write(
        &path,
        r#"{"model":"gaussian","parameters":{"channel":{"g12":0.1,"g1r":2.0,"g21":0.1,"g2r":0.5,"gr1":2.0,"gr2":0.5,"P":-3.0}},"seed":1}"#,
    );
    let out = bin()
        .args(["gaussian", "check", "--scenario"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_only_checks_schema_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("region.json");
    let target = dir.path().join("out.csv");
    write(&scenario, &gaussian_scenario(Some((&target, "csv"))));
    let out = bin()
        .args(["gaussian", "region", "--validate-only", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!target.exists(), "validate-only must not write outputs");
}

#[test]
fn region_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("region.json");
    let target = dir.path().join("out.csv");
    write(&scenario, &gaussian_scenario(Some((&target, "csv"))));
    let out = bin()
        .args(["gaussian", "region", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&target).unwrap();
    assert!(csv.starts_with("sigma2,R1,R2,scheme\n"));
    assert!(csv.contains("cf_original") && csv.contains("cf_nobinning") && csv.contains("nnc"));
    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("out.csv.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "gaussian region");
    assert_eq!(manifest["scenario"]["seed"], 3);
    assert_eq!(manifest["scenario"]["model"], "gaussian");
}

#[test]
fn check_results_match_figure_channels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig4.json");
    write(
        &path,
        r#"{"model":"gaussian","parameters":{"channel":{"g12":0.1,"g1r":2.0,"g21":0.1,"g2r":0.5,"gr1":0.5,"gr2":2.0,"P":20.0}},"seed":1}"#,
    );
    let out = bin()
        .args(["gaussian", "check", "--scenario"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["thm8"], false);
    assert_eq!(v["thm9"], true);
    assert_eq!(v["thm10"], true);
}

#[test]
fn sumrate_oracle_flag_reports_difference() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("sr.json");
    write(&scenario, &gaussian_scenario(None));
    let out = bin()
        .args(["gaussian", "sumrate", "--oracle", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["oracle_abs_diff"].as_f64().unwrap() <= 1e-6);
    assert!(v["sum_rate_nnc"].as_f64().unwrap() > 0.0);
}

#[test]
fn dmc_eval_oneway_round_trip() {
    // X uniform, Xr uniform, Y = Xr exactly, Yr = X exactly, Yh = Yr:
    // both schemes achieve exactly 1 bit.
    let mut probs = vec![0.0f64; 32];
    for x in 0..2usize {
        for xr in 0..2usize {
            // axes order (x, xr, y, yr, yh), row-major
            let y = xr;
            let yr = x;
            let yh = yr;
            probs[(((x * 2 + xr) * 2 + y) * 2 + yr) * 2 + yh] = 0.25;
        }
    }
    let scenario = serde_json::json!({
        "model": "oneway-dmc",
        "parameters": {"pmf": {
            "model": "oneway-dmc",
            "axes": [["x",2],["xr",2],["y",2],["yr",2],["yh",2]],
            "probs": probs,
        }},
        "seed": 1,
    });
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oneway.json");
    write(&path, &scenario.to_string());
    let out = bin()
        .args(["dmc", "eval", "--scenario"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let schemes = v["schemes"].as_array().unwrap();
    assert_eq!(schemes.len(), 2);
    for s in schemes {
        assert!((s["r1_bound"].as_f64().unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(s["feasible"], true);
    }
}

#[test]
fn dmc_eval_rejects_mismatched_model_tag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    write(
        &path,
        r#"{"model":"twrc-dmc","parameters":{"pmf":{"model":"oneway-dmc","axes":[["x",2]],"probs":[0.5,0.5]}},"seed":1}"#,
    );
    let out = bin().args(["dmc", "eval", "--scenario"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fading_check_symmetric_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fading.json");
    write(
        &path,
        r#"{"model":"fading","parameters":{"channel":{"d12":1.0,"d1r":0.5,"d2r":0.5,"alpha":2.0,"P":10.0}},"seed":1}"#,
    );
    let out = bin().args(["fading", "check", "--scenario"]).arg(&path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cor8"], true);
    assert_eq!(v["thm12"], true);
}

#[test]
fn geometry_map_emits_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.json");
    write(
        &path,
        r#"{"model":"geometry","parameters":{"mode":"equal_pathloss","alpha":2.0,"P":10.0,"user1":[-0.5,0.0],"user2":[0.5,0.0],"grid":{"xmin":-0.5,"xmax":0.5,"ymin":-0.5,"ymax":0.5,"step":0.5}},"seed":1}"#,
    );
    let out = bin().args(["geometry", "map", "--scenario"]).arg(&path).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x,y,same_region_g,same_sumrate_g,same_region_f,same_sumrate_f,undetermined"
    );
    // 3x3 grid; the two user positions are undetermined cells
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    let undetermined = rows.iter().filter(|r| r.ends_with(",1")).count();
    assert_eq!(undetermined, 2);
}

#[test]
fn reproduce_writes_figure_dataset_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["reproduce", "fig4", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("fig4_regions.csv")).unwrap();
    assert!(csv.starts_with("sigma2,R1,R2,scheme\n"));
    assert!(dir.path().join("fig4_regions.csv.manifest.json").exists());
}

#[test]
fn threads_env_var_is_respected() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("region.json");
    let a = dir.path().join("a.csv");
    write(&scenario, &gaussian_scenario(Some((&a, "csv"))));
    let out = bin()
        .env("RELAY_RATES_THREADS", "1")
        .args(["gaussian", "region", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert!(out.status.success());
    let single = std::fs::read(&a).unwrap();

    let scenario2 = dir.path().join("region2.json");
    let b = dir.path().join("b.csv");
    write(&scenario2, &gaussian_scenario(Some((&b, "csv"))));
    let out = bin()
        .args(["gaussian", "region", "--scenario"])
        .arg(&scenario2)
        .output()
        .unwrap();
    assert!(out.status.success());
    let multi = std::fs::read(&b).unwrap();
    assert_eq!(single, multi, "thread count must not change results");
}
