use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use divren::formats::parse_csv;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_divren"))
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(cmd: &str, config: &Path) -> Output {
    bin().args([cmd, "--config"]).arg(config).output().unwrap()
}

fn ok_stdout(cmd: &str, config: &Path) -> String {
    let out = run(cmd, config);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{cmd}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

fn minimal(dir: &TempDir) -> PathBuf {
    write_config(dir, "min.json", r#"{"format_version": 1}"#)
}

#[test]
fn series_rows_match_golden_partial_sums() {
    let dir = TempDir::new().unwrap();
    let text = ok_stdout("series", &minimal(&dir));
    let (meta, cols, rows) = parse_csv(&text).unwrap();
    assert_eq!(meta["schema"], "divren.series");
    assert_eq!(cols, ["N", "partial_sum", "abs_error"]);
    assert!((rows[5][1] - 1.7478728).abs() < 1e-7);
    assert!((rows[10][1] - 1.7478818).abs() < 1e-7);
    assert!((meta["z_exact"].as_f64().unwrap() - 1.7478812).abs() < 5e-7);
    let n_opt = meta["optimal_truncation"].as_u64().unwrap();
    assert!((11..=14).contains(&n_opt), "{n_opt}");
}

fn sweep_rows(dir: &TempDir, lambdas: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let cfg = write_config(
        dir,
        "sweep.json",
        &format!(r#"{{"format_version": 1, "sweep": {{"lambdas": {lambdas}}}}}"#),
    );
    let (_, cols, rows) = parse_csv(&ok_stdout("sweep", &cfg)).unwrap();
    (cols, rows)
}

#[test]
fn sweep_columns_behave() {
    let dir = TempDir::new().unwrap();
    let (cols, rows) = sweep_rows(&dir, "[0.0005, 0.001, 0.02, 0.2, 1.0]");
    let borel = cols.iter().position(|c| c == "borel_sum").unwrap();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    for row in &rows {
        let (lam, z) = (row[0], row[1]);
        // first correction is −(3√π/4)λ, so every column sits within 1.4λ of √π
        if lam <= 1e-3 {
            for v in &row[1..] {
                assert!((v - sqrt_pi).abs() < 1.4 * lam, "λ={lam}: {v}");
            }
        }
        if lam < 7.5e-4 {
            for v in &row[1..] {
                assert!((v - sqrt_pi).abs() < 1e-3);
            }
        }
        // the resummed value beats the best partial sum in the table
        let best = row[2..borel].iter().map(|v| (v - z).abs()).fold(f64::INFINITY, f64::min);
        assert!((row[borel] - z).abs() <= best.max(1e-12), "λ={lam}");
    }
}

#[test]
#[ignore = "at λ = 10⁻³ every column is √π − 1.33·10⁻³ to first order, outside the stated 10⁻³ window"]
fn sweep_small_lambda_within_one_thousandth() {
    let dir = TempDir::new().unwrap();
    let (_, rows) = sweep_rows(&dir, "[0.001]");
    for v in &rows[0][1..] {
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-3, "{v}");
    }
}

#[test]
fn report_counts_and_flow() {
    let dir = TempDir::new().unwrap();
    for (kernel, counts) in [("inverse_distance", (1, 1)), ("inverse_r4", (1, 1)), ("inverse_r6", (15, 2))] {
        let cfg = write_config(
            &dir,
            &format!("{kernel}.json"),
            &format!(r#"{{"format_version": 1, "report": {{"kernel": "{kernel}"}}}}"#),
        );
        let v: Value = serde_json::from_str(&ok_stdout("report", &cfg)).unwrap();
        let r = &v["result"];
        let c = &r["counterterms"];
        assert_eq!((c["total"].as_u64().unwrap(), c["rotation_invariant"].as_u64().unwrap()), counts);
        assert!(r["w_independence_residual"].as_f64().unwrap().abs() < 1e-6, "{kernel}");
        if kernel == "inverse_distance" {
            let ratio = r["rg_flow"]["slope_over_phi0"].as_f64().unwrap();
            assert!((ratio - 2.0).abs() < 0.02, "{ratio}");
        }
    }
}

#[test]
fn rgflow_differences_are_two_ln_two() {
    let dir = TempDir::new().unwrap();
    let text = ok_stdout("rgflow", &minimal(&dir));
    let (meta, _, rows) = parse_csv(&text).unwrap();
    let phi0 = meta["phi0"].as_f64().unwrap();
    for pair in rows.windows(2) {
        if pair[1][0] == 2.0 * pair[0][0] {
            assert!((pair[1][1] - pair[0][1] - 2.0 * std::f64::consts::LN_2 * phi0).abs() < 1e-3);
        }
    }
}

#[test]
fn every_command_is_deterministic_and_honours_out() {
    let dir = TempDir::new().unwrap();
    let cfg = minimal(&dir);
    for cmd in ["series", "sweep", "borel", "saddle", "sd", "extend", "rgflow", "report"] {
        let a = ok_stdout(cmd, &cfg);
        let b = ok_stdout(cmd, &cfg);
        assert_eq!(a, b, "{cmd}");
        let out = dir.path().join(format!("{cmd}.out"));
        let status = bin().args([cmd, "--config"]).arg(&cfg).arg("--out").arg(&out).status().unwrap();
        assert!(status.success());
        assert_eq!(std::fs::read_to_string(&out).unwrap(), a, "{cmd}");
    }
}

#[test]
fn unknown_field_is_a_config_error_with_position() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "bad.json", "{\n  \"format_version\": 1,\n  \"series\": {\"lamda\": 0.1}\n}\n");
    let out = run("series", &cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let e = stderr_json(&out);
    assert_eq!(e["exit_code"], 2);
    assert_eq!(e["error"]["kind"], "config");
    assert_eq!(e["error"]["line"], 3);
    assert!(e["error"]["message"].as_str().unwrap().contains("lamda"));
}

#[test]
fn version_and_range_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    for (name, body) in [
        ("version.json", r#"{"format_version": 7}"#),
        ("missing.json", r#"{}"#),
        ("lambda.json", r#"{"format_version": 1, "series": {"lambda": -1}}"#),
        ("syntax.json", r#"{"format_version": 1,"#),
    ] {
        let out = run("series", &write_config(&dir, name, body));
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert_eq!(stderr_json(&out)["error"]["kind"], "config", "{name}");
    }
    let out = run("series", &dir.path().join("absent.json"));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "io");
}

#[test]
fn usage_error_exits_two() {
    let out = bin().args(["nonsense", "--config", "x.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["exit_code"], 2);
}

#[test]
fn divergent_low_degree_limit_exits_three() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "div.json",
        r#"{"format_version": 1, "extend": {"extension": {"type": "low_sd",
            "kernel": {"type": "power_law", "exponent": 1.0}, "dim": 1, "sd": 0.5}}}"#,
    );
    let out = run("extend", &cfg);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let e = stderr_json(&out);
    assert_eq!(e["error"]["kind"], "numerical");
    assert_eq!(e["error"]["code"], "non_convergence");
    assert!(e["error"]["data"]["sequence"].as_array().unwrap().len() >= 4);
}

#[test]
fn exported_series_feeds_borel() {
    let dir = TempDir::new().unwrap();
    let coeffs = dir.path().join("toy.json");
    let cfg = write_config(
        &dir,
        "export.json",
        &serde_json::json!({
            "format_version": 1,
            "series": {"export_coefficients": coeffs},
            "borel": {"series_file": coeffs},
        })
        .to_string(),
    );
    ok_stdout("series", &cfg);
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&coeffs).unwrap()).unwrap();
    assert_eq!(file["coeffs"][0]["sign"], 1);
    let from_file: Value = serde_json::from_str(&ok_stdout("borel", &cfg)).unwrap();
    let toy_cfg = minimal(&dir);
    let direct: Value = serde_json::from_str(&ok_stdout("borel", &toy_cfg)).unwrap();
    assert_eq!(from_file["result"]["value"], direct["result"]["value"]);
    assert_eq!(from_file["result"]["source"], "file");
}
