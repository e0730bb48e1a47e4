//! End-to-end tests of the muinf binary: flag handling, output formats,
//! exit codes, headers, checkpoint round-trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn muinf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_muinf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("muinf-cli-{}-{name}", std::process::id()));
    p
}

fn zeros_fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/zeta_zeros.txt")
}

#[test]
fn mu_at_128_prints_minus_one() {
    let out = muinf(&["mu", "--n", "128"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-1\n");
}

#[test]
fn mu_kinds() {
    let out = muinf(&["mu", "--n", "16", "--kind", "tau_inf"]);
    assert_eq!(stdout(&out), "2\n");
    let out = muinf(&["mu", "--n", "8", "--kind", "sigma_inf"]);
    assert_eq!(stdout(&out), "15\n");
    let out = muinf(&["mu", "--n", "4", "--kind", "mu"]);
    assert_eq!(stdout(&out), "0\n");
}

#[test]
fn factor_displays_prime_powers() {
    let out = muinf(&["factor", "--n", "12"]);
    assert_eq!(stdout(&out), "12 = 2^2 * 3\n");
    let out = muinf(&["factor", "--n", "1"]);
    assert_eq!(stdout(&out), "1 = 1\n");
}

#[test]
fn scan_final_record_matches_partial_sums() {
    let out = muinf(&["scan", "--kind", "mu_inf", "--x-max", "10", "--checkpoint-every", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# muinf"), "header missing: {text}");
    assert!(text.contains("\nx,msum,ratio,min_ratio,max_ratio,wm_over_logx\n"));
    assert!(text.contains("\n10,-2,"), "final record wrong: {text}");
}

#[test]
fn usage_errors_exit_two() {
    let out = muinf(&["scan", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = muinf(&["mu", "--n", "7", "--kind", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_input_file_exits_three() {
    let out = muinf(&[
        "scan",
        "--x-max",
        "100000",
        "--resume",
        "/nonexistent/checkpoint.txt",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_convolution_suite_passes() {
    let out = muinf(&["verify", "--suite", "convolution", "--limit", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS: convolution.inverse_pointwise"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let f = temp_path("scan-repeat.csv");
    let run = || {
        let out = muinf(&[
            "scan",
            "--x-max",
            "200000",
            "--checkpoint-every",
            "50000",
            "--output",
            f.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(&f).unwrap()
    };
    let a = run();
    let b = run();
    assert!(!a.is_empty() && a == b);
    let _ = std::fs::remove_file(f);
}

#[test]
fn out_dir_env_prefixes_relative_paths() {
    let dir = temp_path("outdir");
    std::fs::create_dir_all(&dir).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_muinf"))
        .args(["divisors", "--n", "12", "--system", "unitary", "--output", "div.csv"])
        .env("MUINF_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.join("div.csv")).unwrap();
    assert!(written.contains("\n1\n3\n4\n12\n"), "{written}");
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn checkpoint_resume_equals_straight_run() {
    let straight_csv = temp_path("straight.csv");
    let out = muinf(&[
        "scan",
        "--x-max",
        "200000",
        "--checkpoint-every",
        "25000",
        "--output",
        straight_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let ck = temp_path("half.ck");
    let out = muinf(&[
        "scan",
        "--x-max",
        "100000",
        "--checkpoint-every",
        "25000",
        "--checkpoint-out",
        ck.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let resumed_csv = temp_path("resumed.csv");
    let out = muinf(&[
        "scan",
        "--x-max",
        "200000",
        "--checkpoint-every",
        "25000",
        "--resume",
        ck.to_str().unwrap(),
        "--output",
        resumed_csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let straight = std::fs::read_to_string(&straight_csv).unwrap();
    let resumed = std::fs::read_to_string(&resumed_csv).unwrap();
    // Records beyond the checkpoint agree line for line with the straight run.
    let data_rows: Vec<&str> = resumed.lines().skip(2).collect();
    assert_eq!(data_rows.len(), 4); // 125000, 150000, 175000, 200000
    for line in data_rows {
        assert!(straight.contains(line), "resumed line missing: {line}");
    }
    for f in [straight_csv, resumed_csv, ck] {
        let _ = std::fs::remove_file(f);
    }
}

#[test]
fn resume_kind_mismatch_is_rejected() {
    let ck = temp_path("mu.ck");
    let out = muinf(&[
        "scan",
        "--kind",
        "mu",
        "--x-max",
        "100000",
        "--checkpoint-out",
        ck.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = muinf(&[
        "scan",
        "--kind",
        "mu_inf",
        "--x-max",
        "200000",
        "--resume",
        ck.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(ck);
}

#[test]
fn walk_reports_spec_columns() {
    let out = muinf(&[
        "walk", "--n", "400", "--trials", "2000", "--seed", "7", "--c-list", "1,2",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("c,empirical_prob,gaussian_prob,cheb_bound,slack"));
    assert_eq!(text.lines().count(), 4); // header comment + columns + 2 rows
}

#[test]
fn walk_lil_with_m_ratio_column() {
    let out = muinf(&[
        "walk", "--lil", "--n-max", "1024", "--trials", "500", "--with-m-ratio",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("n,quantile25,median,quantile75,m_inf_ratio"));
    assert!(text.contains("\n1024,"));
}

#[test]
fn explicit_joins_measured_and_formula() {
    let out = muinf(&[
        "explicit",
        "--kind",
        "classical",
        "--zeros",
        zeros_fixture().to_str().unwrap(),
        "--t-cutoff",
        "100",
        "--depth",
        "1",
        "--x-grid",
        "100:100:1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("x,measured,explicit_sum,abs_err"));
    // M(100) = 1.
    assert!(text.contains("\n100,1,"), "{text}");
    // Zeros digest recorded in the header.
    assert!(text.contains("zeros=sha256:"));
}

#[test]
fn series_zeta_at_two() {
    let out = muinf(&["series", "--op", "zeta", "--sigma", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(2).unwrap();
    let fields: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(fields[0], 2.0);
    let pi = std::f64::consts::PI;
    assert!((fields[2] - pi * pi / 6.0).abs() < 1e-10, "{row}");
    assert_eq!(fields[3], 0.0);
}

#[test]
fn series_bounds_grid_has_no_violations() {
    let out = muinf(&[
        "series",
        "--op",
        "bounds",
        "--sigma-grid",
        "1.05:3:5",
        "--t-grid",
        "0:30:5",
        "--depth",
        "3",
    ]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("75 checks, 0 violations"), "{err}");
}

#[test]
fn json_format_mirrors_csv_columns() {
    let out = muinf(&[
        "scan",
        "--x-max",
        "100000",
        "--checkpoint-every",
        "50000",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["tool"], "muinf");
    assert_eq!(doc["config"]["x_max"], 100000);
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[1]["x"], 100000);
    assert_eq!(records[1]["msum"], -62);
}

#[test]
fn convolve_inverse_table() {
    let out = muinf(&["convolve", "--op", "inverse", "--f", "one", "--limit", "10"]);
    assert!(out.status.success());
    let text = stdout(&out);
    // Inverse of 1 under the infinitary convolution is μ∞.
    for (n, v) in [(1, 1), (2, -1), (3, -1), (4, -1), (8, 1), (10, 1)] {
        assert!(text.contains(&format!("\n{n},{v}")), "missing {n},{v} in {text}");
    }
}

#[test]
fn failed_run_leaves_no_partial_output() {
    let target = temp_path("partial.csv");
    let out = muinf(&[
        "explicit",
        "--zeros",
        "/nonexistent/zeros.txt",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!target.exists());
    let tmp = target.with_extension("csv.tmp");
    assert!(!tmp.exists());
}
