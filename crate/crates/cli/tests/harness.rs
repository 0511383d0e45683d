//! Harness-level integration tests: report schema stability, oracle/count
//! separation, and end-to-end runs of the installed binary with its
//! documented exit codes.

use std::process::Command;

use sfft_cli::config::{Algorithm, TrialConfig};
use sfft_cli::trials::{render_csv, render_json, run_trials};

const BIN: &str = env!("CARGO_BIN_EXE_sfft-bench");

#[test]
fn golden_csv_for_fixed_seed() {
    let mut cfg = TrialConfig::new(Algorithm::Exact, 64, 2);
    cfg.magnitude_bound = 3.0;
    cfg.trials = 3;
    cfg.seed = 9;
    cfg.no_timing = true;
    let report = run_trials(&cfg).unwrap();
    let got = render_csv(&report);
    let want = "trial,success,l2_err,tail_err,samples,wall_ns,z_l0_peak\n\
                0,true,0,0,256,0,2\n\
                1,true,0,0,256,0,2\n\
                2,true,0,0,256,0,2\n";
    assert_eq!(got, want);
}

#[test]
fn json_schema_has_expected_fields() {
    let mut cfg = TrialConfig::new(Algorithm::Exact, 64, 2);
    cfg.magnitude_bound = 3.0;
    cfg.trials = 2;
    cfg.seed = 1;
    cfg.no_timing = true;
    let report = run_trials(&cfg).unwrap();
    let text = render_json(&report).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["config"]["algorithm"], "exact");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    for key in [
        "trial",
        "success",
        "l2_err",
        "tail_err",
        "samples",
        "wall_ns",
        "z_l0_peak",
    ] {
        assert!(v["rows"][0].get(key).is_some(), "missing row key {key}");
    }
    for key in [
        "success_rate",
        "median_l2_err",
        "p95_l2_err",
        "median_samples",
        "samples_per_shape",
    ] {
        assert!(v["aggregate"].get(key).is_some(), "missing aggregate {key}");
    }
}

#[test]
fn oracle_side_never_touches_the_counter() {
    let mut rng = sfft_core::rng::RngStream::new(77);
    let inst = sfft_cli::gen::gen_exact_sparse(256, 4, 7, &mut rng);
    let _ = inst.truth.tail_err(4);
    let _ = inst.truth.l2_norm();
    assert_eq!(inst.signal.reads(), 0);

    let inst = sfft_cli::gen::gen_noisy_sparse(256, 4, 50.0, 1.0, &mut rng);
    let _ = inst.truth.tail_err(4);
    assert_eq!(inst.signal.reads(), 0);
}

#[test]
fn binary_reports_and_exit_codes() {
    // Success path with CSV on stdout.
    let out = Command::new(BIN)
        .args([
            "exact", "--n", "256", "--k", "4", "--l", "7", "--trials", "4", "--seed", "3",
            "--no-timing",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("trial,success,"));
    assert_eq!(stdout.lines().count(), 5);

    // Unreachable threshold trips exit code 1.
    let out = Command::new(BIN)
        .args([
            "exact", "--n", "256", "--k", "4", "--trials", "2", "--threshold", "1.01",
            "--no-timing",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Usage error: n not a power of two.
    let out = Command::new(BIN)
        .args(["exact", "--n", "100", "--k", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // I/O error: unwritable output path.
    let out = Command::new(BIN)
        .args([
            "exact",
            "--n",
            "256",
            "--k",
            "4",
            "--trials",
            "1",
            "--out",
            "/nonexistent-dir/report.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_flags_and_const_overrides() {
    let dir = std::env::temp_dir().join(format!("sfft-bench-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("trial.cfg");
    std::fs::write(
        &cfg_path,
        "n = 256\nk = 4\nl = 7\ntrials = 3\nseed = 11\nconst.beta = 0.5\n",
    )
    .unwrap();

    // File supplies everything; flag overrides k.
    let out = Command::new(BIN)
        .args([
            "exact",
            "--config",
            cfg_path.to_str().unwrap(),
            "--k",
            "2",
            "--no-timing",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("n=256 k=2"), "stderr: {stderr}");

    // Constant overrides change the bin budget, visible in the sample count.
    let samples_of = |beta: &str| -> u64 {
        let out = Command::new(BIN)
            .args([
                "exact", "--n", "4096", "--k", "4", "--l", "1", "--trials", "1", "--seed", "5",
                "--no-timing", &format!("--const.beta={beta}"),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let stdout = String::from_utf8(out.stdout).unwrap();
        stdout
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .nth(4)
            .unwrap()
            .parse()
            .unwrap()
    };
    let lean = samples_of("0.9");
    let wide = samples_of("0.1");
    assert!(wide > lean, "beta=0.1 gave {wide} vs beta=0.9 {lean}");

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_passes() {
    let out = Command::new(BIN).arg("selftest").output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "stdout: {}",
        String::from_utf8_lossy(&out.stdout)
    );
}
