//! Approximate k-sparse recovery for general signals.
//!
//! Location runs a t-ary search: each level splits every bin's candidate
//! region into t subregions and votes on them with randomized stride-β
//! phase measurements, shrinking the region by a factor t/4 per level.
//! Estimation takes per-candidate medians (real and imaginary separately)
//! over fresh random permutations. The outer loop repeats on the residual
//! with geometrically tightening budgets.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::bins::hash_to_bins;
use crate::error::{Error, Result};
use crate::modarith::mul_mod;
use crate::permute::PermutationParams;
use crate::rng::RngStream;
use crate::signal::{SparseSpectrum, TimeSignal};
use crate::window::cached_flat_window;

/// Tunable constants; defaults are the smallest values that pass the
/// statistical acceptance suite.
#[derive(Clone, Copy, Debug)]
pub struct GeneralConfig {
    /// Round shrink schedule f_r = c_f/r².
    pub c_f: f64,
    /// Offset parameter α_r = c_alpha·f_r².
    pub c_alpha: f64,
    /// Bin budget term c_b·k·α_r·f_r/ε.
    pub c_b: f64,
    /// Bin floor c_cover·k_r·(1 + 1/ε_r), covering the heavy set.
    pub c_cover: f64,
    /// Vote acceptance threshold scale: s = c_s·α^{1/3}.
    pub c_s: f64,
    /// R_loc = ceil(r_loc_scale·ln(t/α)/ln(1/α)), clamped.
    pub r_loc_scale: f64,
    pub r_loc_bounds: (usize, usize),
    /// R_est = ceil(r_est_scale·log₂(B/(α·k))), clamped to an odd count.
    pub r_est_scale: f64,
    pub r_est_bounds: (usize, usize),
    /// Safety cap on outer rounds.
    pub max_rounds: usize,
}

impl Default for GeneralConfig {
    fn default() -> Self {
        Self {
            c_f: 0.25,
            c_alpha: 1.0,
            c_b: 8.0,
            c_cover: 16.0,
            c_s: 0.25,
            r_loc_scale: 2.0,
            r_loc_bounds: (4, 24),
            r_est_scale: 4.0,
            r_est_bounds: (5, 31),
            max_rounds: 8,
        }
    }
}

/// Parameters of one outer round.
#[derive(Clone, Copy, Debug)]
pub struct RoundPlan {
    pub f: f64,
    pub eps: f64,
    pub alpha: f64,
    pub k: f64,
    pub bins: usize,
    pub r_est: usize,
}

/// The full r-dependent schedule.
#[derive(Clone, Debug)]
pub struct GeneralSchedule {
    pub n: usize,
    pub k: usize,
    pub eps: f64,
    pub rounds: Vec<RoundPlan>,
    pub branching: usize,
}

/// Build the schedule: R is the first horizon with ∏ f_r < 1/k, and each
/// round r gets ε_r = f_r·ε, α_r = c_alpha·f_r², k_r = k·∏_{i<r} f_i, and
/// a power-of-two bin count ≤ n.
pub fn plan_rounds(n: usize, k: usize, eps: f64, cfg: &GeneralConfig) -> GeneralSchedule {
    let branching = (n.max(16)).ilog2() as usize;
    let mut rounds = Vec::new();
    if k == 0 {
        return GeneralSchedule {
            n,
            k,
            eps,
            rounds,
            branching,
        };
    }
    let mut prod = 1.0f64;
    for r in 1..=cfg.max_rounds {
        let f = cfg.c_f / (r * r) as f64;
        let eps_r = f * eps;
        let alpha = (cfg.c_alpha * f * f).clamp(1e-6, 0.25);
        let k_r = k as f64 * prod;
        let theorem_term = cfg.c_b * k as f64 * alpha * f / eps;
        let cover_term = cfg.c_cover * k_r * (1.0 + 1.0 / eps_r);
        // Bins need real width: past n/8 the flat region of each bin
        // degenerates and frequencies land on the stop boundary.
        let cap = (n / 8).max(1);
        let bins = (theorem_term.max(cover_term).max(8.0).ceil() as usize)
            .next_power_of_two()
            .min(cap);
        let r_est = {
            let raw = (cfg.r_est_scale * (bins as f64 / (alpha * k_r)).log2()).ceil();
            let clamped = (raw.max(0.0) as usize).clamp(cfg.r_est_bounds.0, cfg.r_est_bounds.1);
            if clamped.is_multiple_of(2) {
                (clamped + 1).min(cfg.r_est_bounds.1 | 1)
            } else {
                clamped
            }
        };
        rounds.push(RoundPlan {
            f,
            eps: eps_r,
            alpha,
            k: k_r,
            bins,
            r_est,
        });
        prod *= f;
        if prod * (k as f64) < 1.0 {
            break;
        }
    }
    GeneralSchedule {
        n,
        k,
        eps,
        rounds,
        branching,
    }
}

/// Circular distance on phases: min over wraps of |x − y + 2πγ|.
pub fn circ_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(TAU);
    d.min(TAU - d)
}

fn r_loc_rounds(branching: usize, alpha: f64, cfg: &GeneralConfig) -> usize {
    let raw = (cfg.r_loc_scale * (branching as f64 / alpha).ln() / (1.0 / alpha).ln()).ceil();
    (raw.max(1.0) as usize).clamp(cfg.r_loc_bounds.0, cfg.r_loc_bounds.1)
}

/// One voting level: for each live region, split into `branching`
/// subregions and vote with `r_loc` stride-β phase measurements. Regions
/// with no majority winner return ⊥ (None).
#[allow(clippy::too_many_arguments)]
pub fn locate_inner(
    x: &TimeSignal,
    zhat: &SparseSpectrum,
    window: &std::sync::Arc<crate::window::FlatWindowPair>,
    sigma: usize,
    b: usize,
    lefts: &[Option<f64>],
    width: f64,
    branching: usize,
    r_loc: usize,
    s: f64,
    rng: &mut RngStream,
) -> Result<Vec<Option<f64>>> {
    let n = x.n();
    let bins = window.bins();
    debug_assert_eq!(lefts.len(), bins);
    let t = branching as f64;
    let mut votes = vec![0u32; bins * branching];
    let sigma_b = mul_mod(sigma, b, n) as f64;

    for _ in 0..r_loc {
        let a = rng.index(n);
        let beta_lo = (s * n as f64 * t / (4.0 * width)).ceil() as u64;
        let beta_hi = ((s * n as f64 * t / (2.0 * width)).floor() as u64).min(n as u64 - 1);
        let beta = if beta_lo > beta_hi || beta_hi == 0 {
            1
        } else {
            rng.range_inclusive(beta_lo.clamp(1, beta_hi), beta_hi)
        };
        let pa = PermutationParams::new(n, sigma, a, b, bins)?;
        let pb = pa.with_shift((a + (beta % n as u64) as usize) % n);
        let u = hash_to_bins(x, zhat, &pa, window)?;
        let u_shift = hash_to_bins(x, zhat, &pb, window)?;

        for (j, left) in lefts.iter().enumerate() {
            let Some(l) = left else { continue };
            let uj = u.u_hat[j];
            let uj_shift = u_shift.u_hat[j];
            if uj.norm_sqr() == 0.0 || uj_shift.norm_sqr() == 0.0 {
                continue;
            }
            let c_j = {
                let mut p = (uj / uj_shift).arg();
                if p < 0.0 {
                    p += TAU;
                }
                p
            };
            for q in 0..branching {
                let midpoint = l + (q as f64 + 0.5) * width / t;
                let theta = (TAU * (midpoint + sigma_b) / n as f64).rem_euclid(TAU);
                let predicted = (beta as f64 * theta).rem_euclid(TAU);
                if circ_dist(predicted, c_j) < s * PI {
                    votes[j * branching + q] += 1;
                }
            }
        }
    }

    let majority = r_loc as u32 / 2;
    let out = lefts
        .iter()
        .enumerate()
        .map(|(j, left)| {
            let l = (*left)?;
            (0..branching)
                .find(|q| votes[j * branching + q] > majority)
                .map(|q| l + q as f64 * width / t)
        })
        .collect();
    Ok(out)
}

/// Iterated narrowing: one (σ, b) shared across levels, each level calling
/// `locate_inner` with the region width shrunk by t/4. Surviving singleton
/// positions map back through the permutation inverse.
pub fn locate_signal(
    x: &TimeSignal,
    zhat: &SparseSpectrum,
    bins: usize,
    alpha: f64,
    delta: f64,
    cfg: &GeneralConfig,
    rng: &mut RngStream,
) -> Result<Vec<usize>> {
    let n = x.n();
    let window = cached_flat_window(n, bins, delta, alpha)?;
    let sigma = rng.odd(n);
    let b = rng.index(n);
    let branching = (n.max(16)).ilog2() as usize;
    let t_prime = (branching as f64 / 4.0).max(2.0);
    let w0 = n as f64 / bins as f64;
    let levels = ((w0 + 1.0).ln() / t_prime.ln()).ceil().max(1.0) as usize;
    let r_loc = r_loc_rounds(branching, alpha, cfg);
    let s = (cfg.c_s * alpha.cbrt()).clamp(1e-4, 0.45);

    // Regions start centered on each bin: bin j owns [jn/B − n/2B, jn/B + n/2B).
    let mut lefts: Vec<Option<f64>> = (0..bins)
        .map(|j| Some(j as f64 * w0 - w0 / 2.0))
        .collect();
    let mut width = w0;
    for _ in 0..levels {
        lefts = locate_inner(
            x, zhat, &window, sigma, b, &lefts, width, branching, r_loc, s, rng,
        )?;
        width /= t_prime;
    }

    let p = PermutationParams::new(n, sigma, 0, b, bins)?;
    let mut found = BTreeSet::new();
    for left in lefts.into_iter().flatten() {
        let tau = (left.ceil() as i64).rem_euclid(n as i64) as usize;
        found.insert(p.invert_location(tau));
    }
    Ok(found.into_iter().collect())
}

/// Median-of-measurements estimation over fresh (σ, a, b) per round;
/// returns the k′ largest estimates restricted to their indices.
#[allow(clippy::too_many_arguments)]
pub fn estimate_values(
    x: &TimeSignal,
    zhat: &SparseSpectrum,
    k_prime: usize,
    candidates: &[usize],
    bins: usize,
    alpha: f64,
    delta: f64,
    r_est: usize,
    rng: &mut RngStream,
) -> Result<SparseSpectrum> {
    let n = x.n();
    let mut what = SparseSpectrum::new(n);
    if candidates.is_empty() || k_prime == 0 {
        return Ok(what);
    }
    let r_est = r_est.max(1);
    let window = cached_flat_window(n, bins, delta, alpha)?;
    let mut measurements = Vec::with_capacity(r_est);
    for _ in 0..r_est {
        let p = PermutationParams::random(n, bins, rng.index(n), rng)?;
        measurements.push(hash_to_bins(x, zhat, &p, &window)?);
    }

    let mut estimates: Vec<(usize, Complex64)> = Vec::with_capacity(candidates.len());
    let mut res = Vec::with_capacity(r_est);
    let mut ims = Vec::with_capacity(r_est);
    for &i in candidates {
        res.clear();
        ims.clear();
        for m in &measurements {
            let p = &m.perm;
            let h = p.bin_of(i);
            let rot = crate::dft::omega_pow(
                n,
                mul_mod(mul_mod(p.shift_a(), p.sigma(), n), i, n),
            )
            .conj();
            let est = m.u_hat[h] * rot;
            res.push(est.re);
            ims.push(est.im);
        }
        let est = Complex64::new(median(&mut res), median(&mut ims));
        estimates.push((i, est));
    }

    // Keep the k′ largest magnitudes; ties resolved by lower index.
    estimates.sort_by(|a, b| {
        b.1.norm_sqr()
            .partial_cmp(&a.1.norm_sqr())
            .unwrap()
            .then_with(|| a.0.cmp(&b.0))
    });
    for &(i, v) in estimates.iter().take(k_prime) {
        what.set(i, v);
    }
    Ok(what)
}

fn median(values: &mut [f64]) -> f64 {
    debug_assert!(!values.is_empty());
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values[values.len() / 2]
}

/// Per-round telemetry from a traced run.
#[derive(Clone, Debug)]
pub struct GeneralTrace {
    pub rounds: Vec<GeneralRoundTrace>,
}

#[derive(Clone, Debug)]
pub struct GeneralRoundTrace {
    pub bins: usize,
    pub alpha: f64,
    pub candidates: usize,
    pub z_support_after: usize,
}

impl GeneralTrace {
    pub fn peak_support(&self) -> usize {
        self.rounds
            .iter()
            .map(|r| r.z_support_after)
            .max()
            .unwrap_or(0)
    }
}

/// Outer loop: locate, estimate the top 3k_r candidates, accumulate, and
/// repeat on the residual. `delta` is the additive-error parameter; the
/// internal hashing precision is δ/n so leakage stays below the target.
pub fn sparse_fft(
    x: &TimeSignal,
    k: usize,
    eps: f64,
    delta: f64,
    cfg: &GeneralConfig,
    rng: &mut RngStream,
) -> Result<SparseSpectrum> {
    Ok(sparse_fft_traced(x, k, eps, delta, cfg, rng)?.0)
}

pub fn sparse_fft_traced(
    x: &TimeSignal,
    k: usize,
    eps: f64,
    delta: f64,
    cfg: &GeneralConfig,
    rng: &mut RngStream,
) -> Result<(SparseSpectrum, GeneralTrace)> {
    let n = x.n();
    if k > n {
        return Err(Error::SparsityTooLarge { k, n });
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::ParamRange {
            name: "eps",
            value: eps,
            range: "(0, 1]",
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::ParamRange {
            name: "delta",
            value: delta,
            range: "(0, 1)",
        });
    }
    let delta_inner = delta / n as f64;
    let schedule = plan_rounds(n, k, eps, cfg);
    let mut zhat = SparseSpectrum::new(n);
    let mut trace = GeneralTrace { rounds: Vec::new() };
    for plan in &schedule.rounds {
        let candidates = locate_signal(x, &zhat, plan.bins, plan.alpha, delta_inner, cfg, rng)?;
        let k_prime = (3.0 * plan.k).ceil() as usize;
        let what = estimate_values(
            x,
            &zhat,
            k_prime,
            &candidates,
            plan.bins,
            plan.alpha,
            delta_inner,
            plan.r_est,
            rng,
        )?;
        zhat.merge(&what);
        trace.rounds.push(GeneralRoundTrace {
            bins: plan.bins,
            alpha: plan.alpha,
            candidates: candidates.len(),
            z_support_after: zhat.support_size(),
        });
    }
    Ok((zhat, trace))
}
