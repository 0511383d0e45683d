//! Scaling sweep: run trials over a grid of (n, k), record sample medians
//! and wall time, compare against the dense-FFT baseline, and fit the
//! sample count to the target shape.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;
use sfft_core::dft::fft_dense;
use sfft_core::rng::RngStream;

use crate::config::{Algorithm, OutputFormat, TrialConfig};
use crate::trials::{run_trials, sample_shape};
use crate::HarnessError;

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    /// k too close to n: the sparse algorithms are not expected to beat a
    /// dense transform there, so the point is flagged and excluded from
    /// the fit.
    pub degenerate: bool,
    pub success_rate: f64,
    pub median_samples: u64,
    pub median_wall_ns: u128,
    pub dense_fft_wall_ns: u128,
    /// median_samples / shape(n, k).
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub algorithm: Algorithm,
    pub trials_per_point: usize,
    pub rows: Vec<SweepRow>,
    /// max/min of `ratio` over non-degenerate rows.
    pub ratio_spread: Option<f64>,
}

/// A point is degenerate when k exceeds n/8 (bins can no longer spread
/// the spectrum).
pub fn is_degenerate(n: usize, k: usize) -> bool {
    k > n / 8
}

pub fn scaling_sweep(
    base: &TrialConfig,
    points: &[(usize, usize)],
) -> Result<SweepReport, HarnessError> {
    if points.is_empty() {
        return Err(HarnessError::Usage("sweep needs at least one grid point".into()));
    }
    let mut rows = Vec::with_capacity(points.len());
    for &(n, k) in points {
        if is_degenerate(n, k) {
            rows.push(SweepRow {
                n,
                k,
                degenerate: true,
                success_rate: 0.0,
                median_samples: 0,
                median_wall_ns: 0,
                dense_fft_wall_ns: 0,
                ratio: 0.0,
            });
            continue;
        }
        let mut cfg = base.clone();
        cfg.n = n;
        cfg.k = k;
        let report = run_trials(&cfg)?;
        let mut walls: Vec<u128> = report.rows.iter().map(|r| r.wall_ns).collect();
        walls.sort_unstable();
        rows.push(SweepRow {
            n,
            k,
            degenerate: false,
            success_rate: report.aggregate.success_rate,
            median_samples: report.aggregate.median_samples,
            median_wall_ns: walls[walls.len() / 2],
            dense_fft_wall_ns: if cfg.no_timing { 0 } else { dense_baseline_ns(n) },
            ratio: report.aggregate.median_samples as f64 / sample_shape(cfg.algorithm, n, k),
        });
    }
    let live: Vec<f64> = rows
        .iter()
        .filter(|r| !r.degenerate)
        .map(|r| r.ratio)
        .collect();
    let ratio_spread = if live.len() >= 2 {
        let lo = live.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = live.iter().cloned().fold(0.0f64, f64::max);
        Some(hi / lo)
    } else {
        None
    };
    Ok(SweepReport {
        algorithm: base.algorithm,
        trials_per_point: base.trials,
        rows,
        ratio_spread,
    })
}

/// Median wall time of a dense FFT at length n. This in-repo radix-2
/// baseline is far slower than a tuned FFT library, so crossover points
/// against it are indicative only.
fn dense_baseline_ns(n: usize) -> u128 {
    let mut rng = RngStream::new(12021);
    let vals: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.unit_f64() - 0.5, rng.unit_f64() - 0.5))
        .collect();
    let mut times: Vec<u128> = (0..5)
        .map(|_| {
            let t0 = Instant::now();
            let out = fft_dense(&vals).unwrap();
            std::hint::black_box(&out);
            t0.elapsed().as_nanos()
        })
        .collect();
    times.sort_unstable();
    times[times.len() / 2]
}

pub fn render_csv(report: &SweepReport) -> String {
    let mut out = String::from(
        "n,k,degenerate,success_rate,median_samples,median_wall_ns,dense_fft_wall_ns,ratio\n",
    );
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.k,
            r.degenerate,
            r.success_rate,
            r.median_samples,
            r.median_wall_ns,
            r.dense_fft_wall_ns,
            r.ratio
        ));
    }
    out
}

pub fn emit_report(
    report: &SweepReport,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<(), HarnessError> {
    let body = match format {
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => serde_json::to_string_pretty(report)?,
    };
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

/// Default sweep preset: lean bin budget (about 4k bins after rounding)
/// with the offset parameter at its cap, and unit magnitude bound, so the
/// filter support stays well under n across the default grid.
pub fn default_sweep_config(algorithm: Algorithm) -> TrialConfig {
    let mut cfg = TrialConfig::new(algorithm, 4096, 4);
    cfg.trials = 9;
    cfg.magnitude_bound = 1.0;
    cfg.consts.beta = Some(0.45);
    cfg.consts.c_alpha = Some(1.0);
    cfg
}

/// The documented sublinear corridor: n/k fixed at 1024 plus a deep-sparse
/// and a dense-end probe.
pub fn default_grid() -> Vec<(usize, usize)> {
    vec![
        (1 << 12, 4),
        (1 << 13, 8),
        (1 << 14, 16),
        (1 << 15, 32),
        (1 << 16, 64),
        (1 << 16, 256),
    ]
}
