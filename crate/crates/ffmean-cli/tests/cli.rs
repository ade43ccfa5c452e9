//! End-to-end tests of the `ffmean` binary: output shapes, determinism,
//! and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn ffmean(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffmean"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("ffmean-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn cm_table_emits_agreeing_columns() {
    let out = ffmean(&["cm-table", "--max-m", "12"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# ffmean"));
    assert_eq!(lines.next().unwrap(), "m,cosine_sum,closed_form,fourier");
    let mut rows = 0;
    for line in lines {
        let cols: Vec<f64> = line.split(',').skip(1).map(|v| v.parse().unwrap()).collect();
        assert!((cols[0] - cols[1]).abs() < 1e-10 && (cols[1] - cols[2]).abs() < 1e-10);
        rows += 1;
    }
    assert_eq!(rows, 12);
}

#[test]
fn sigma_exact_and_float_agree_for_stock() {
    let exact = stdout(&ffmean(&[
        "sigma", "--spec", "stock:periodic3", "--n-max", "9", "--mode", "exact",
    ]));
    let float = stdout(&ffmean(&[
        "sigma", "--spec", "stock:periodic3", "--n-max", "9", "--mode", "float",
    ]));
    let parse = |text: &str| -> Vec<f64> {
        text.lines()
            .skip(2)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect()
    };
    let (e, f) = (parse(&exact), parse(&float));
    assert_eq!(e.len(), 10);
    for (a, b) in e.iter().zip(&f) {
        assert!((a - b).abs() < 1e-12);
    }
    // closed-form spot checks: 1, −1, 0, 2/3, −2/3, 0, …
    assert_eq!(e[0], 1.0);
    assert_eq!(e[1], -1.0);
    assert_eq!(e[2], 0.0);
    assert!((e[3] - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn verify_halasz_is_deterministic_and_passes() {
    let out_a = tmp("halasz-a.csv");
    let out_b = tmp("halasz-b.csv");
    for path in [&out_a, &out_b] {
        let out = ffmean(&[
            "verify-halasz",
            "--seeds",
            "6",
            "--n",
            "4,8",
            "--kappa",
            "0.5,1",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b, "same config and seed must be byte-identical");
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("n,kappa,lhs_perp"));
    assert_eq!(text.lines().count(), 2 + 6);
    let _ = std::fs::remove_file(out_a);
    let _ = std::fs::remove_file(out_b);
}

#[test]
fn oracle_compare_stock_all_passes() {
    let out = ffmean(&["oracle-compare", "--spec", "stock:all", "--q", "2", "--n-max", "4"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["all_pass"], serde_json::Value::Bool(true));
    assert_eq!(json["reports"].as_array().unwrap().len(), 7);
}

#[test]
fn oracle_compare_single_spec_shape() {
    let out = ffmean(&["oracle-compare", "--spec", "stock:smooth2", "--q", "3", "--n-max", "4"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["q"], 3);
    assert_eq!(json["n_max"], 4);
    assert_eq!(json["all_pass"], serde_json::Value::Bool(true));
    assert!(json["mismatches"].as_array().unwrap().is_empty());
    assert_eq!(json["spec"]["kind"], "smooth");
}

#[test]
fn smooth_table_ratio_at_least_one() {
    let out = ffmean(&["smooth-table", "--m", "2", "--n-max", "30"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in text.lines().skip(2).filter(|l| !l.starts_with('#')) {
        let ratio: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(ratio >= 1.0 - 1e-12, "line {line}");
    }
    // the strengthened lower bound's constant is reported, not asserted
    assert!(text.lines().any(|l| l.starts_with("# empirical_c=")));
}

#[test]
fn roots_command_recovers_double_root() {
    let out = ffmean(&["roots", "--sigma", "1,-2,1,0,0", "--q", "3"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["k"], 2);
    let roots = json["roots"].as_array().unwrap();
    for r in roots {
        assert!((r[0].as_f64().unwrap() - 3.0).abs() < 1e-3);
    }
    let chi = json["chi_from_power_sums"].as_array().unwrap();
    assert!((chi[0][0].as_f64().unwrap() + 2.0).abs() < 1e-4);
}

#[test]
fn example9_reports_bounded_scaled_error() {
    let out = ffmean(&["example9", "--seed", "3", "--points", "2", "--n-max", "256"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let err: f64 = last.split(',').nth(5).unwrap().parse().unwrap();
    assert!(err < 2.0, "n|err| = {err}");
}

#[test]
fn lipschitz_scan_small_run_passes() {
    let out = ffmean(&["lipschitz-scan", "--seeds", "2", "--n", "8,16", "--ell", "1,n/2"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    for line in text.lines().skip(2) {
        assert!(line.ends_with(",true"), "row failed: {line}");
    }
}

#[test]
fn bad_inputs_exit_nonzero() {
    let out = ffmean(&["sigma", "--spec", "stock:nonsense", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ffmean(&["roots", "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
    // non-terminating sigma is rejected loudly
    let out = ffmean(&["roots", "--sigma", "1,1,1", "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn spec_file_round_trip() {
    let path = tmp("spec.json");
    std::fs::write(&path, r#"{"kind": "explicit", "values": [[0.5, 0.0], [-0.25, 0.0]]}"#)
        .unwrap();
    let out = ffmean(&["sigma", "--spec", path.to_str().unwrap(), "--n-max", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let sigma1: f64 = text.lines().nth(3).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(sigma1, 0.5); // σ(1) = χ(1)
    let _ = std::fs::remove_file(path);
}
