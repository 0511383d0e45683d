//! sfft-bench: generate test signals, run seeded trials of the sparse FFT
//! algorithms, count samples, and emit CSV/JSON reports.
//!
//! Exit codes: 0 success, 1 aggregate success rate below threshold,
//! 2 usage error, 3 I/O error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sfft_cli::config::{
    parse_config_file, Algorithm, ConstOverrides, OutputFormat, TrialConfig,
};
use sfft_cli::sweep::{self, scaling_sweep};
use sfft_cli::trials::{emit_report, run_trials};
use sfft_cli::HarnessError;

#[derive(Parser)]
#[command(
    name = "sfft-bench",
    about = "Benchmark harness for sublinear sparse Fourier transforms",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact recovery of integer-valued k-sparse spectra.
    Exact(TrialArgs),
    /// Approximate recovery of noisy spectra with the (1+eps) guarantee.
    General(TrialArgs),
    /// Full k-dimensional DFT via the periodization reduction.
    Reduce(TrialArgs),
    /// Sample-complexity sweep over a grid of (n, k).
    Sweep(SweepArgs),
    /// Fast self-check of the primitives and both algorithms.
    Selftest,
}

#[derive(Args)]
struct TrialArgs {
    /// Signal length (power of two).
    #[arg(long)]
    n: Option<usize>,
    /// Target sparsity.
    #[arg(long)]
    k: Option<usize>,
    /// Integer magnitude bound L for exact/reduce instances.
    #[arg(long)]
    l: Option<f64>,
    /// Approximation parameter for `general`.
    #[arg(long)]
    eps: Option<f64>,
    /// Additive-error parameter for `general`.
    #[arg(long)]
    delta: Option<f64>,
    /// Per-coordinate noise std for `general` instances.
    #[arg(long)]
    noise: Option<f64>,
    /// Planted head magnitude (default 20·noise·sqrt(n)/k).
    #[arg(long)]
    head: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Success-rate gate for the exit code (default 2/3).
    #[arg(long)]
    threshold: Option<f64>,
    /// Key-value config file; explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record wall_ns as 0 so reports are byte-stable.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// exact, general, or reduce.
    #[arg(long, default_value = "exact")]
    algorithm: String,
    /// Grid as comma-separated NxK pairs, e.g. 4096x4,8192x8.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, default_value_t = 9)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Maximum allowed max/min spread of the fitted sample ratio.
    #[arg(long)]
    max_spread: Option<f64>,
    #[arg(long)]
    no_timing: bool,
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("SFFT_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }

    let (args, consts) = match extract_const_overrides(std::env::args().collect()) {
        Ok(pair) => pair,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(args);
    match run(cli, consts) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

/// Pull `--const.<name> <value>` / `--const.<name>=<value>` pairs out of
/// the raw argument list before clap sees it.
fn extract_const_overrides(raw: Vec<String>) -> Result<(Vec<String>, ConstOverrides), String> {
    let mut out = Vec::with_capacity(raw.len());
    let mut consts = ConstOverrides::default();
    let mut it = raw.into_iter();
    while let Some(arg) = it.next() {
        if let Some(rest) = arg.strip_prefix("--const.") {
            let (name, value) = match rest.split_once('=') {
                Some((n, v)) => (n.to_string(), v.to_string()),
                None => {
                    let v = it
                        .next()
                        .ok_or_else(|| format!("--const.{rest} needs a value"))?;
                    (rest.to_string(), v)
                }
            };
            consts.set(&name, &value)?;
        } else {
            out.push(arg);
        }
    }
    Ok((out, consts))
}

fn run(cli: Cli, consts: ConstOverrides) -> Result<u8, HarnessError> {
    match cli.cmd {
        Cmd::Exact(a) => run_trial_cmd(Algorithm::Exact, a, consts),
        Cmd::General(a) => run_trial_cmd(Algorithm::General, a, consts),
        Cmd::Reduce(a) => run_trial_cmd(Algorithm::Reduction, a, consts),
        Cmd::Sweep(a) => run_sweep_cmd(a, consts),
        Cmd::Selftest => run_selftest(),
    }
}

fn parse_format(s: Option<&str>) -> Result<OutputFormat, HarnessError> {
    match s.unwrap_or("csv") {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(HarnessError::Usage(format!(
            "unknown format {other:?} (expected csv or json)"
        ))),
    }
}

fn run_trial_cmd(
    algorithm: Algorithm,
    args: TrialArgs,
    mut consts: ConstOverrides,
) -> Result<u8, HarnessError> {
    let file: BTreeMap<String, String> = match &args.config {
        Some(path) => parse_config_file(path).map_err(HarnessError::Usage)?,
        None => BTreeMap::new(),
    };
    // Explicit flags already sit in `consts` and win; file constants fill
    // the gaps.
    for (key, value) in &file {
        if let Some(name) = key.strip_prefix("const.") {
            let mut file_consts = ConstOverrides::default();
            file_consts.set(name, value).map_err(HarnessError::Usage)?;
            merge_missing(&mut consts, &file_consts);
        }
    }

    // Flag value if given, else config-file value, else the default.
    fn resolve<T: std::str::FromStr>(
        flag: Option<T>,
        file: &BTreeMap<String, String>,
        key: &str,
    ) -> Result<Option<T>, HarnessError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match file.get(key) {
            Some(s) => s.parse::<T>().map(Some).map_err(|_| {
                HarnessError::Usage(format!("bad value for {key}: {s:?}"))
            }),
            None => Ok(None),
        }
    }

    let defaults = TrialConfig::new(algorithm, 4096, 8);
    let mut cfg = defaults.clone();
    cfg.n = resolve(args.n, &file, "n")?.unwrap_or(defaults.n);
    cfg.k = resolve(args.k, &file, "k")?.unwrap_or(defaults.k);
    cfg.magnitude_bound = resolve(args.l, &file, "l")?.unwrap_or(defaults.magnitude_bound);
    cfg.eps = resolve(args.eps, &file, "eps")?.unwrap_or(defaults.eps);
    cfg.delta = resolve(args.delta, &file, "delta")?.unwrap_or(defaults.delta);
    cfg.noise_sigma = resolve(args.noise, &file, "noise")?.unwrap_or(defaults.noise_sigma);
    cfg.head_magnitude = resolve(args.head, &file, "head")?;
    cfg.trials = resolve(args.trials, &file, "trials")?.unwrap_or(defaults.trials);
    cfg.seed = resolve(args.seed, &file, "seed")?.unwrap_or(defaults.seed);
    cfg.threshold = resolve(args.threshold, &file, "threshold")?.unwrap_or(defaults.threshold);
    cfg.no_timing = args.no_timing;
    cfg.consts = consts;

    let format = parse_format(
        args.format
            .as_deref()
            .or(file.get("format").map(|s| s.as_str())),
    )?;
    let out = args
        .out
        .clone()
        .or_else(|| file.get("out").map(PathBuf::from));

    let report = run_trials(&cfg)?;
    emit_report(&report, format, out.as_deref())?;
    eprintln!(
        "{algorithm}: n={} k={} trials={} success_rate={:.4} median_samples={}",
        cfg.n, cfg.k, cfg.trials, report.aggregate.success_rate, report.aggregate.median_samples
    );
    Ok(if report.passes_threshold() { 0 } else { 1 })
}

fn merge_missing(target: &mut ConstOverrides, fallback: &ConstOverrides) {
    target.beta = target.beta.or(fallback.beta);
    target.c_alpha = target.c_alpha.or(fallback.c_alpha);
    target.c_f = target.c_f.or(fallback.c_f);
    target.c_b = target.c_b.or(fallback.c_b);
    target.c_cover = target.c_cover.or(fallback.c_cover);
    target.c_s = target.c_s.or(fallback.c_s);
    target.r_loc_max = target.r_loc_max.or(fallback.r_loc_max);
    target.r_est_max = target.r_est_max.or(fallback.r_est_max);
}

fn run_sweep_cmd(args: SweepArgs, consts: ConstOverrides) -> Result<u8, HarnessError> {
    let algorithm = match args.algorithm.as_str() {
        "exact" => Algorithm::Exact,
        "general" => Algorithm::General,
        "reduce" => Algorithm::Reduction,
        other => {
            return Err(HarnessError::Usage(format!(
                "unknown algorithm {other:?} (expected exact, general, reduce)"
            )))
        }
    };
    let points = match &args.grid {
        Some(spec) => parse_grid(spec).map_err(HarnessError::Usage)?,
        None => sweep::default_grid(),
    };
    let mut base = sweep::default_sweep_config(algorithm);
    base.trials = args.trials.max(1);
    base.seed = args.seed;
    base.no_timing = args.no_timing;
    // Explicit overrides win over the sweep presets.
    let mut merged = consts;
    merge_missing(&mut merged, &base.consts);
    base.consts = merged;

    let report = scaling_sweep(&base, &points)?;
    let format = parse_format(args.format.as_deref())?;
    sweep::emit_report(&report, format, args.out.as_deref())?;
    if let Some(spread) = report.ratio_spread {
        eprintln!(
            "sweep: ratio spread {spread:.3} over {} points",
            report.rows.len()
        );
        if let Some(max) = args.max_spread {
            return Ok(if spread <= max { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn parse_grid(spec: &str) -> Result<Vec<(usize, usize)>, String> {
    spec.split(',')
        .map(|pair| {
            let (n, k) = pair
                .split_once('x')
                .ok_or_else(|| format!("bad grid entry {pair:?} (expected NxK)"))?;
            let n = n.trim().parse().map_err(|_| format!("bad n in {pair:?}"))?;
            let k = k.trim().parse().map_err(|_| format!("bad k in {pair:?}"))?;
            Ok((n, k))
        })
        .collect()
}

fn run_selftest() -> Result<u8, HarnessError> {
    let mut failures = 0;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {}", name, if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    {
        use sfft_core::dft::{dft_slice, idft_slice};
        let vals: Vec<_> = (0..64)
            .map(|i| num_complex::Complex64::new((i % 5) as f64 - 2.0, (i % 3) as f64))
            .collect();
        let back = idft_slice(&dft_slice(&vals));
        let ok = back.iter().zip(&vals).all(|(a, b)| (a - b).norm() < 1e-9);
        check("dense transform round trip", ok);
    }
    {
        let w = sfft_core::build_flat_window(256, 4, 1e-6, 0.25).unwrap();
        let ok = w.eval_ghat_prime(0) == 1.0
            && w.eval_ghat_prime(32) == 0.0
            && (0.0..=1.0).contains(&w.eval_ghat_prime(28));
        check("flat window band contract", ok);
    }
    {
        let mut cfg = TrialConfig::new(Algorithm::Exact, 1024, 8);
        cfg.magnitude_bound = 63.0;
        cfg.trials = 10;
        cfg.no_timing = true;
        let r = run_trials(&cfg)?;
        check("exact recovery (n=1024, k=8)", r.aggregate.success_rate >= 0.8);
    }
    {
        let mut cfg = TrialConfig::new(Algorithm::General, 2048, 4);
        cfg.trials = 10;
        cfg.no_timing = true;
        let r = run_trials(&cfg)?;
        check(
            "general recovery (n=2048, k=4)",
            r.aggregate.success_rate >= 2.0 / 3.0,
        );
    }
    {
        let mut cfg = TrialConfig::new(Algorithm::Reduction, 64, 4);
        cfg.magnitude_bound = 31.0;
        cfg.trials = 10;
        cfg.no_timing = true;
        let r = run_trials(&cfg)?;
        check("reduction (k=4, n=64)", r.aggregate.success_rate >= 2.0 / 3.0);
    }

    if failures == 0 {
        println!("selftest: all checks passed");
        Ok(0)
    } else {
        println!("selftest: {failures} check(s) failed");
        Ok(1)
    }
}
