//! End-to-end tests of the `digitlaw` binary: exit codes, JSON report
//! contents, and curve files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_digitlaw"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn fixture() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/population_2023.csv")
        .display()
        .to_string()
}

fn temp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("digitlaw-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn analyze_population_fixture() {
    let out = run(&["analyze", "--input", &fixture(), "--column", "population"]);
    let report = json_of(&out);
    assert_eq!(report["n"], 217);
    let chi2 = report["chi_square_benford"].as_f64().unwrap();
    assert!((chi2 - 7.609).abs() < 0.001, "chi2 {chi2}");
    let kl = report["kl_benford_nats"].as_f64().unwrap();
    assert!((kl - 0.01738).abs() < 1e-4, "kl {kl}");
    assert_eq!(report["first_digit"]["counts"][0], 68);
    assert!(report["provenance"]["input_hash"].is_string());
}

#[test]
fn analyze_single_value_and_column_by_index() {
    let dir = temp_dir("single");
    let path = dir.join("pi.csv");
    std::fs::write(&path, "value\n3.14159265358979\n").unwrap();
    let out = run(&[
        "analyze",
        "--input",
        path.to_str().unwrap(),
        "--column",
        "0",
    ]);
    let report = json_of(&out);
    assert_eq!(report["block_frequencies"]["3"], 1.0);
}

#[test]
fn analyze_rejects_empty_and_missing() {
    let dir = temp_dir("empty");
    let path = dir.join("empty.csv");
    std::fs::write(&path, "value\n").unwrap();
    let out = run(&[
        "analyze",
        "--input",
        path.to_str().unwrap(),
        "--column",
        "value",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["analyze", "--input", "/nonexistent.csv", "--column", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["analyze", "--input", &fixture(), "--column", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn profile_benford_curve_and_vector() {
    let dir = temp_dir("benford");
    let base = dir.join("benford");
    let out = run(&[
        "profile",
        "--family",
        "benford",
        "--grid",
        "101",
        "--out",
        base.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(base.with_extension("json")).unwrap())
            .unwrap();
    let v0 = report["first_digit_vector"][0].as_f64().unwrap();
    assert!((v0 - 2f64.log10()).abs() < 1e-12);

    let curve = std::fs::read_to_string(base.with_extension("csv")).unwrap();
    let mut lines = curve.lines();
    assert_eq!(lines.next(), Some("s,G"));
    let mut prev_s = -1.0;
    for line in lines {
        let mut parts = line.split(',');
        let s: f64 = parts.next().unwrap().parse().unwrap();
        let g: f64 = parts.next().unwrap().parse().unwrap();
        assert!(s > prev_s, "s not strictly increasing");
        assert!((g - s).abs() < 1e-12, "diagonal profile");
        prev_s = s;
    }
}

#[test]
fn profile_ratio_uniforms_midpoint() {
    let out = run(&["profile", "--family", "ratio-uniforms", "--grid", "11"]);
    assert!(out.status.success());
    let dir = temp_dir("ratio");
    let base = dir.join("ratio");
    run(&[
        "profile",
        "--family",
        "ratio-uniforms",
        "--grid",
        "11",
        "--out",
        base.to_str().unwrap(),
    ]);
    let curve = std::fs::read_to_string(base.with_extension("csv")).unwrap();
    let mid = curve.lines().nth(6).unwrap();
    let g: f64 = mid.split(',').nth(1).unwrap().parse().unwrap();
    assert!((g - 0.5).abs() < 1e-12, "G(0.5) = {g}");
}

#[test]
fn profile_powerlaw_kink_and_bad_family() {
    let dir = temp_dir("powerlaw");
    let base = dir.join("pl");
    let out = run(&[
        "profile",
        "--family",
        "powerlaw",
        "--params",
        "p=1,b=3.1623",
        "--grid",
        "2001",
        "--out",
        base.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let curve = std::fs::read_to_string(base.with_extension("csv")).unwrap();
    let points: Vec<(f64, f64)> = curve
        .lines()
        .skip(1)
        .map(|l| {
            let mut p = l.split(',');
            (
                p.next().unwrap().parse().unwrap(),
                p.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    // Slope collapses by ~10x across s = {log10 b} ~ 0.5; measured at
    // +-0.01 on the exponential branches the exact ratio is 10^0.98.
    let slope = |s: f64| {
        let i = (s * 2000.0) as usize;
        (points[i + 1].1 - points[i].1) / (points[i + 1].0 - points[i].0)
    };
    let ratio = slope(0.49) / slope(0.51);
    assert!(
        (ratio - 10f64.powf(0.98)).abs() < 0.05,
        "slope ratio {ratio}"
    );

    let out = run(&["profile", "--family", "no-such-family"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["profile", "--family", "powerlaw", "--params", "p=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invert_single_decade_log_cdf() {
    let dir = temp_dir("invert1");
    let base = dir.join("diag");
    run(&[
        "profile",
        "--family",
        "benford",
        "--grid",
        "513",
        "--out",
        base.to_str().unwrap(),
    ]);
    let out = run(&[
        "invert",
        "--input",
        base.with_extension("csv").to_str().unwrap(),
        "--window",
        "0",
        "1",
        "--grid",
        "512",
    ]);
    let report = json_of(&out);
    let f_tilde = report["f_tilde"].as_array().unwrap();
    // F(10^t) proportional to t: knot j sits at t = j/512.
    for j in [0, 128, 256, 384, 512] {
        let expect = j as f64 / 512.0;
        let got = f_tilde[j].as_f64().unwrap();
        assert!((got - expect).abs() < 1e-9, "knot {j}");
    }
}

#[test]
fn invert_three_decades_affine_v() {
    let dir = temp_dir("invert3");
    let base = dir.join("diag3");
    run(&[
        "profile",
        "--family",
        "benford",
        "--grid",
        "257",
        "--out",
        base.to_str().unwrap(),
    ]);
    let out = run(&[
        "invert",
        "--input",
        base.with_extension("csv").to_str().unwrap(),
        "--window",
        "-1",
        "2",
        "--grid",
        "256",
    ]);
    let report = json_of(&out);
    let v = report["v_knots"].as_array().unwrap();
    for (u, knot) in v.iter().enumerate() {
        let t = -1.0 + u as f64 / 256.0;
        assert!((knot.as_f64().unwrap() - t / 3.0).abs() < 1e-9, "t={t}");
    }
    assert!(report["kernel_energy"].as_f64().unwrap() < 1e-16);
}

#[test]
fn invert_round_trip_lognormal_window() {
    let dir = temp_dir("invertln");
    let base = dir.join("ln");
    run(&[
        "profile",
        "--family",
        "lognormal-window",
        "--params",
        "mu=3.45,sigma=2.07,m=0,n=3",
        "--grid",
        "1025",
        "--out",
        base.to_str().unwrap(),
    ]);
    let out = run(&[
        "invert",
        "--input",
        base.with_extension("csv").to_str().unwrap(),
        "--window",
        "0",
        "3",
        "--grid",
        "1024",
    ]);
    let report = json_of(&out);
    assert!(report["residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn invert_rejects_non_monotone_curve() {
    let dir = temp_dir("invertbad");
    let path = dir.join("bad.csv");
    std::fs::write(&path, "s,G\n0,0\n0.5,0.8\n0.75,0.4\n1,1\n").unwrap();
    let out = run(&[
        "invert",
        "--input",
        path.to_str().unwrap(),
        "--window",
        "0",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fit_population_fixture_and_determinism() {
    let args = [
        "fit",
        "--input",
        &fixture(),
        "--column",
        "population",
        "--boot-ks",
        "120",
        "--boot-chi2",
        "120",
        "--seed",
        "7",
    ];
    let out1 = run(&args);
    let report = json_of(&out1);
    let shape = report["shape"].as_f64().unwrap();
    assert!((shape - 0.467).abs() < 0.005, "shape {shape}");
    let d = report["ks_d"].as_f64().unwrap();
    assert!((d - 0.0454).abs() < 0.001, "D {d}");
    let aic = report["aic"].as_f64().unwrap();
    assert!((aic - 7630.8).abs() < 1.0, "aic {aic}");

    // Bit-identical rerun under the same seed.
    let out2 = run(&args);
    assert_eq!(out1.stdout, out2.stdout);

    let out = run(&[
        "fit",
        "--input",
        &fixture(),
        "--column",
        "population",
        "--boot-ks",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(2), "B below 100 is a usage error");
}

#[test]
fn em_benford_family_has_zero_deviation() {
    let out = run(&["em", "--family", "benford", "--params", "m=0,n=1"]);
    let report = json_of(&out);
    for row in report["rows"].as_array().unwrap() {
        assert!(row["j3"].as_f64().unwrap().abs() < 1e-10);
    }
}

#[test]
fn em_uniform_first_block() {
    let out = run(&[
        "em", "--family", "uniform", "--params", "b=1", "--k-min", "1", "--k-max", "1",
    ]);
    let report = json_of(&out);
    let row = &report["rows"][0];
    assert!((row["rho"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-9);
    let expect_j3 = 1.0 / 9.0 - 2f64.log10();
    assert!((row["j3"].as_f64().unwrap() - expect_j3).abs() < 1e-9);
}

#[test]
fn simulate_product_limit_is_near_benford() {
    let out = run(&[
        "simulate",
        "--family",
        "product-uniforms",
        "--params",
        "factors=20",
        "--n",
        "60000",
        "--seed",
        "3",
    ]);
    let report = json_of(&out);
    let shares = report["first_digit"]["shares"].as_array().unwrap();
    for (i, share) in shares.iter().enumerate() {
        let p = (1.0 + 1.0 / (i as f64 + 1.0)).log10();
        assert!(
            (share.as_f64().unwrap() - p).abs() < 0.01,
            "digit {}",
            i + 1
        );
    }
    // Reproducibility under a fixed seed.
    let again = run(&[
        "simulate",
        "--family",
        "product-uniforms",
        "--params",
        "factors=20",
        "--n",
        "60000",
        "--seed",
        "3",
    ]);
    assert_eq!(out.stdout, again.stdout);
}
