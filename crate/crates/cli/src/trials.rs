//! Trial runner: seeded, reproducible batches with per-trial sample
//! accounting and machine-readable reports.
//!
//! Trials run in a worker pool with one random stream per trial index, and
//! results are reduced in index order, so output is seed-stable regardless
//! of worker count.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sfft_core::dft::idft_slice;
use sfft_core::exact::noiseless_sparse_fft_traced;
use sfft_core::general::sparse_fft_traced;
use sfft_core::reduction::full_dft_via_sparse_traced;
use sfft_core::rng::RngStream;
use sfft_core::signal::SparseSpectrum;

use crate::config::{Algorithm, OutputFormat, TrialConfig};
use crate::gen::{self, TruthSpectrum};
use crate::HarnessError;

#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub success: bool,
    pub l2_err: f64,
    pub tail_err: f64,
    pub samples: u64,
    pub wall_ns: u128,
    pub z_l0_peak: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialAggregate {
    pub success_rate: f64,
    pub median_l2_err: f64,
    pub p95_l2_err: f64,
    pub median_samples: u64,
    /// Median samples divided by the target shape: k·log₂n for the exact
    /// algorithms, k·log₂n·log₂(n/k) for the general one.
    pub samples_per_shape: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialReport {
    pub config: TrialConfig,
    pub rows: Vec<TrialRow>,
    pub aggregate: TrialAggregate,
}

impl TrialReport {
    pub fn passes_threshold(&self) -> bool {
        self.aggregate.success_rate >= self.config.threshold
    }
}

/// Shape normalizer for the sample-count fit.
pub fn sample_shape(algorithm: Algorithm, n: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let log_n = (n as f64).log2();
    match algorithm {
        Algorithm::Exact | Algorithm::Reduction => k as f64 * log_n,
        Algorithm::General => {
            let log_nk = ((n / k.max(1)) as f64).log2().max(1.0);
            k as f64 * log_n * log_nk
        }
    }
}

pub fn run_trials(cfg: &TrialConfig) -> Result<TrialReport, HarnessError> {
    cfg.validate().map_err(HarnessError::Usage)?;
    let rows: Result<Vec<TrialRow>, HarnessError> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_one_trial(cfg, t))
        .collect();
    let rows = rows?;

    let successes = rows.iter().filter(|r| r.success).count();
    let mut errs: Vec<f64> = rows.iter().map(|r| r.l2_err).collect();
    errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut samples: Vec<u64> = rows.iter().map(|r| r.samples).collect();
    samples.sort_unstable();
    let median_samples = samples[samples.len() / 2];
    let aggregate = TrialAggregate {
        success_rate: successes as f64 / rows.len() as f64,
        median_l2_err: errs[errs.len() / 2],
        p95_l2_err: errs[((errs.len() as f64 * 0.95).ceil() as usize).clamp(1, errs.len()) - 1],
        median_samples,
        samples_per_shape: median_samples as f64 / sample_shape(cfg.algorithm, cfg.n, cfg.k),
    };
    Ok(TrialReport {
        config: cfg.clone(),
        rows,
        aggregate,
    })
}

fn run_one_trial(cfg: &TrialConfig, trial: usize) -> Result<TrialRow, HarnessError> {
    let mut rng = RngStream::substream(cfg.seed, trial as u64);
    match cfg.algorithm {
        Algorithm::Exact => {
            let inst = gen::gen_exact_sparse(
                cfg.n,
                cfg.k,
                cfg.magnitude_bound.max(1.0) as i64,
                &mut rng,
            );
            let exact_cfg = cfg.consts.exact_config();
            let before = inst.signal.reads();
            let start = Instant::now();
            let (z, trace) = noiseless_sparse_fft_traced(
                &inst.signal,
                cfg.k,
                cfg.magnitude_bound,
                &exact_cfg,
                &mut rng,
            )?;
            let wall = start.elapsed().as_nanos();
            let samples = inst.signal.reads() - before;
            Ok(finish_row(cfg, trial, &inst.truth, &z, samples, wall, trace.peak_support()))
        }
        Algorithm::General => {
            let inst = gen::gen_noisy_sparse(
                cfg.n,
                cfg.k,
                cfg.head_magnitude(),
                cfg.noise_sigma,
                &mut rng,
            );
            let gen_cfg = cfg.consts.general_config();
            let before = inst.signal.reads();
            let start = Instant::now();
            let (z, trace) = sparse_fft_traced(
                &inst.signal,
                cfg.k,
                cfg.eps,
                cfg.delta,
                &gen_cfg,
                &mut rng,
            )?;
            let wall = start.elapsed().as_nanos();
            let samples = inst.signal.reads() - before;
            Ok(finish_row(cfg, trial, &inst.truth, &z, samples, wall, trace.peak_support()))
        }
        Algorithm::Reduction => {
            // k-dimensional integer spectrum, synthesized to a k-vector.
            let span = (2.0 * cfg.magnitude_bound + 1.0) as usize;
            let l = cfg.magnitude_bound as i64;
            let truth: Vec<_> = (0..cfg.k)
                .map(|_| {
                    num_complex::Complex64::new(
                        (rng.index(span) as i64 - l) as f64,
                        (rng.index(span) as i64 - l) as f64,
                    )
                })
                .collect();
            let x = idft_slice(&truth);
            let exact_cfg = cfg.consts.exact_config();
            let start = Instant::now();
            let (got, trace) = full_dft_via_sparse_traced(
                &x,
                cfg.n,
                cfg.magnitude_bound,
                &exact_cfg,
                &mut rng,
            )?;
            let wall = start.elapsed().as_nanos();
            let success = got == truth;
            let l2_err = got
                .iter()
                .zip(&truth)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            Ok(TrialRow {
                trial,
                success,
                l2_err,
                tail_err: sfft_core::signal::tail_err(&truth, cfg.k),
                samples: trace.samples_used,
                wall_ns: if cfg.no_timing { 0 } else { wall },
                z_l0_peak: trace.peak_support,
            })
        }
    }
}

fn finish_row(
    cfg: &TrialConfig,
    trial: usize,
    truth: &TruthSpectrum,
    z: &SparseSpectrum,
    samples: u64,
    wall_ns: u128,
    z_l0_peak: usize,
) -> TrialRow {
    let l2_err = truth.l2_distance(z);
    let tail = truth.tail_err(cfg.k);
    let success = match cfg.algorithm {
        Algorithm::Exact | Algorithm::Reduction => truth.matches_exactly(z),
        Algorithm::General => l2_err <= (1.0 + cfg.eps) * tail + cfg.delta * truth.l2_norm(),
    };
    TrialRow {
        trial,
        success,
        l2_err,
        tail_err: tail,
        samples,
        wall_ns: if cfg.no_timing { 0 } else { wall_ns },
        z_l0_peak,
    }
}

pub fn render_csv(report: &TrialReport) -> String {
    let mut out = String::from("trial,success,l2_err,tail_err,samples,wall_ns,z_l0_peak\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.trial, r.success, r.l2_err, r.tail_err, r.samples, r.wall_ns, r.z_l0_peak
        ));
    }
    out
}

pub fn render_json(report: &TrialReport) -> Result<String, HarnessError> {
    Ok(serde_json::to_string_pretty(report)?)
}

/// Emit to a file or stdout; I/O failures surface as exit code 3.
pub fn emit_report(
    report: &TrialReport,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<(), HarnessError> {
    let body = match format {
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => render_json(report)?,
    };
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}
