use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ppi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = ppi(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn get(v: &Value, path: &[&str]) -> f64 {
    let mut v = v;
    for k in path {
        v = &v[*k];
    }
    v.as_f64()
        .unwrap_or_else(|| panic!("{path:?} missing in {v}"))
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn reproduce_from_sigmas() {
    let r = json(&[
        "reproduce",
        "--family",
        "gaussian",
        "--sigma1",
        "0.16",
        "--sigma2",
        "22.67",
    ]);
    assert!((get(&r, &["joint_lower"]) - 0.114569).abs() < 1e-5);
    assert!((get(&r, &["P_M_envelope"]) - 0.0628944).abs() < 1e-5);
    assert!((get(&r, &["defect_envelope"]) - 0.0516746).abs() < 2e-5);
    assert!((get(&r, &["sqrt_U"]) - 0.148119).abs() < 1e-5);
    assert!(get(&r, &["P_M_exact"]) < get(&r, &["P_M_envelope"]));
}

#[test]
fn reproduce_rectangle_bound() {
    let r = json(&["reproduce", "--family", "rectangle", "--u", "0.024"]);
    assert!((get(&r, &["defect_bound"]) - 0.072).abs() < 1e-3);
    assert!(r["sigma1"].is_null());
}

#[test]
fn suppression_and_sigma_forms_agree() {
    let a = json(&["reproduce", "--u", "0.022", "--csq", "0.8"]);
    let s1 = get(&a, &["sigma1"]).to_string();
    let s2 = get(&a, &["sigma2"]).to_string();
    assert!((get(&a, &["sigma1"]) - 0.1596).abs() < 1e-4);
    assert!((get(&a, &["sigma2"]) - 22.667).abs() < 1e-3);
    let b = json(&["reproduce", "--sigma1", &s1, "--sigma2", &s2]);
    for key in [
        "U",
        "P_L",
        "joint_lower",
        "P_M_envelope",
        "P_M_exact",
        "defect_exact",
    ] {
        let (x, y) = (get(&a, &[key]), get(&b, &[key]));
        assert!(
            (x - y).abs() <= 1e-7 * x.abs().max(1e-3),
            "{key}: {x} vs {y}"
        );
    }
}

#[test]
fn csv_report_lists_quantities() {
    let text = ok(&["reproduce", "--format", "csv"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("quantity,value"));
    let keys: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    for key in [
        "P_L",
        "P_B",
        "joint_lower",
        "sqrt_U",
        "P_M_envelope",
        "P_M_exact",
        "defect_envelope",
        "defect_exact",
        "ratio",
    ] {
        assert!(keys.contains(&key), "{key}");
    }
}

#[test]
fn coefficient_values() {
    let c = json(&["coeffs", "--csq", "1"]);
    assert!((get(&c, &["closed_form", "eta"]) - 0.01219).abs() < 1e-5);
    assert!((get(&c, &["closed_form", "gamma"]) - 0.9237).abs() < 1e-4);
    assert!(get(&c, &["difference", "eta"]).abs() < 1e-8);

    let c = json(&["coeffs", "--csq", "0.8"]);
    assert!((get(&c, &["quadrature", "eta"]) - 0.0017).abs() < 5e-5);
    assert!((get(&c, &["quadrature", "gamma"]) - 0.9733).abs() < 5e-5);

    let c = json(&["coeffs", "--family", "rectangle"]);
    for (key, want) in [("Csq", 1.0), ("eta", 0.0), ("gamma", 1.0)] {
        assert!((get(&c, &["closed_form", key]) - want).abs() < 1e-12);
        assert!((get(&c, &["quadrature", key]) - want).abs() < 1e-9);
    }
}

#[test]
fn propagated_profile_integrates_to_middle_probability() {
    let rows = csv_rows(&ok(&["propagate", "--x-max", "1", "--grid-points", "401"]));
    assert_eq!(rows.len(), 401);
    let trapezoid: f64 = rows
        .windows(2)
        .map(|w| 0.5 * (w[0][1] + w[1][1]) * (w[1][0] - w[0][0]))
        .sum();
    assert!((trapezoid - 0.054).abs() < 1e-3, "{trapezoid}");
    assert!((rows[0][4] - 0.0573).abs() < 1e-3);
    assert!(rows.iter().all(|r| r[4] == rows[0][4]));
}

#[test]
fn initial_profile_is_the_plus_state() {
    let rows = csv_rows(&ok(&[
        "propagate",
        "--t0",
        "--x-max",
        "0.5",
        "--grid-points",
        "201",
    ]));
    let trapezoid: f64 = rows
        .windows(2)
        .map(|w| 0.5 * (w[0][1] + w[1][1]) * (w[1][0] - w[0][0]))
        .sum();
    let r = json(&["reproduce"]);
    assert!((trapezoid - get(&r, &["P_L"])).abs() < 1e-4, "{trapezoid}");
}

#[test]
fn default_sweep_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let summary = dir.path().join("summary.json");
    ok(&[
        "sweep",
        "--output",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    let s: Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert!((get(&s, &["optimum", "U"]) - 0.022).abs() < 0.002);
    assert!((get(&s, &["optimum", "Csq"]) - 0.80).abs() < 0.05);
    assert!((get(&s, &["optimum", "value"]) - 0.052).abs() < 0.001);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("U,Csq,defect_bound"));
    assert_eq!(text.lines().count(), 1 + 200 * 200);
}

#[test]
fn rectangle_sweep_peaks_near_0_024() {
    let s = json(&["sweep", "--family", "rectangle", "--format", "json"]);
    assert!((get(&s, &["optimum", "U"]) - 0.024).abs() < 0.001);
    assert!((get(&s, &["refined", "value"]) - 0.072).abs() < 0.001);
}

#[test]
fn single_cell_sweep() {
    let rows = csv_rows(&ok(&[
        "sweep",
        "--u-min",
        "0.022",
        "--u-steps",
        "1",
        "--csq-min",
        "0.8",
        "--csq-steps",
        "1",
    ]));
    assert_eq!(rows.len(), 1);
    let r = json(&["reproduce", "--u", "0.022", "--csq", "0.8"]);
    assert!((rows[0][2] - get(&r, &["defect_bound"])).abs() < 1e-8);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &[
            "reproduce",
            "--u",
            "0.022",
            "--csq",
            "0.8",
            "--sigma1",
            "0.16",
            "--sigma2",
            "22.67",
        ][..],
        &["reproduce", "--sigma1", "0.16"],
        &["reproduce", "--u", "-1"],
        &["reproduce", "--family", "rectangle", "--csq", "0.5"],
        &["sweep", "--u-max", "0.5"],
        &["reproduce", "--tolerance", "0"],
        &["reproduce", "--bogus"],
    ] {
        assert_eq!(ppi(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failure_exits_3() {
    let out = ppi(&["coeffs", "--csq", "0.8", "--tolerance", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["reproduce"][..],
        &["coeffs", "--csq", "0.8", "--format", "csv"],
        &["propagate", "--grid-points", "51"],
        &["sweep", "--u-steps", "7", "--csq-steps", "5"],
    ] {
        let files: Vec<_> = (0..2)
            .map(|i| {
                let p = dir.path().join(format!("{}-{i}", args[0]));
                let mut full = args.to_vec();
                full.extend(["--output", p.to_str().unwrap()]);
                ok(&full);
                fs::read(&p).unwrap()
            })
            .collect();
        assert_eq!(files[0], files[1], "{args:?}");
    }
}

#[test]
fn floats_use_nine_significant_digits() {
    let text = ok(&["coeffs", "--csq", "0.8", "--format", "csv"]);
    let eta = text.lines().nth(2).unwrap().split(',').nth(1).unwrap();
    assert_eq!(eta, "1.72861305e-3");
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_values_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.json",
        r#"{"command": "reproduce", "family": "rectangle", "u": 0.03, "format": "csv"}"#,
    );
    let from_file = ok(&["reproduce", "--config", &cfg]);
    assert!(from_file.contains("U,3.00000000e-2"));
    let overridden = ok(&[
        "reproduce",
        "--config",
        &cfg,
        "--u",
        "0.024",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&overridden).unwrap();
    assert!((get(&v, &["defect_bound"]) - 0.072).abs() < 1e-3);

    let bad = write(dir.path(), "bad.json", r#"{"u": 0.02, "colour": "red"}"#);
    assert_eq!(ppi(&["reproduce", "--config", &bad]).status.code(), Some(2));
    let other = write(dir.path(), "other.json", r#"{"command": "sweep"}"#);
    assert_eq!(
        ppi(&["reproduce", "--config", &other]).status.code(),
        Some(2)
    );
}
