//! Exact recovery of integer-valued k-sparse spectra.
//!
//! Each inner pass hashes the residual spectrum to B bins twice, with
//! modulation shifts a = 0 and a = 1. For a bin holding a single isolated
//! coefficient, the phase of the ratio of the two measurements is linear
//! in the coefficient's index, so one division locates it exactly and
//! rounding recovers its integer value. The outer loop peels recovered
//! coefficients and shrinks the bin count geometrically.

use num_complex::Complex64;

use crate::bins::hash_to_bins;
use crate::error::{Error, Result};
use crate::modarith::mul_mod;
use crate::permute::PermutationParams;
use crate::rng::RngStream;
use crate::signal::{SparseSpectrum, TimeSignal};
use crate::window::cached_flat_window;

/// Tunable constants for the exact recovery loop.
#[derive(Clone, Copy, Debug)]
pub struct ExactConfig {
    /// Bin-load constant: B_t = next power of two ≥ k_t/β.
    pub beta: f64,
    /// Offset-parameter scale: α_t = min(1/4, c_alpha·2^{−t/2}).
    pub c_alpha: f64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        Self {
            beta: 1.0 / 32.0,
            c_alpha: 1.0 / 8.0,
        }
    }
}

/// Derived parameters for one run.
#[derive(Clone, Copy, Debug)]
pub struct ExactParams {
    pub k: usize,
    pub magnitude_bound: f64,
    pub delta: f64,
    pub rounds: usize,
}

impl ExactParams {
    pub fn derive(n: usize, k: usize, magnitude_bound: f64) -> Self {
        let l = magnitude_bound.max(1.0);
        Self {
            k,
            magnitude_bound: l,
            delta: 1.0 / (4.0 * (n as f64) * (n as f64) * l),
            rounds: if k == 0 { 0 } else { 1 + k.ilog2() as usize },
        }
    }
}

/// Per-round telemetry from a traced run.
#[derive(Clone, Debug)]
pub struct ExactTrace {
    pub round_bins: Vec<usize>,
    pub round_alpha: Vec<f64>,
    /// Snapshot of the running estimate after each round.
    pub z_after: Vec<SparseSpectrum>,
}

impl ExactTrace {
    pub fn peak_support(&self) -> usize {
        self.z_after
            .iter()
            .map(|z| z.support_size())
            .max()
            .unwrap_or(0)
    }
}

fn bin_count(k_t: usize, beta: f64, n: usize) -> usize {
    // Capped at n/8 so every bin keeps a usable flat region.
    let cap = (n / 8).max(2);
    let raw = (k_t as f64 / beta).ceil().max(2.0) as usize;
    raw.next_power_of_two().min(cap)
}

/// One location-and-estimation pass over the residual x̂ − ẑ with fresh
/// random (σ, b). Returns the recovered pairs ŵ.
pub fn noiseless_inner(
    x: &TimeSignal,
    k_t: usize,
    zhat: &SparseSpectrum,
    alpha: f64,
    delta: f64,
    cfg: &ExactConfig,
    rng: &mut RngStream,
) -> Result<SparseSpectrum> {
    let n = x.n();
    let sigma = rng.odd(n);
    let b = rng.index(n);
    let bins = bin_count(k_t, cfg.beta, n);
    noiseless_inner_with_params(x, zhat, sigma, b, bins, delta, alpha)
}

/// Deterministic core of the inner pass, with the permutation pinned.
pub fn noiseless_inner_with_params(
    x: &TimeSignal,
    zhat: &SparseSpectrum,
    sigma: usize,
    b: usize,
    bins: usize,
    delta: f64,
    alpha: f64,
) -> Result<SparseSpectrum> {
    let n = x.n();
    let window = cached_flat_window(n, bins, delta, alpha)?;
    let p0 = PermutationParams::new(n, sigma, 0, b, bins)?;
    let p1 = p0.with_shift(1);
    let u = hash_to_bins(x, zhat, &p0, &window)?;
    let u_shift = hash_to_bins(x, zhat, &p1, &window)?;

    let sigma_inv = p0.sigma_inv();
    let mut what = SparseSpectrum::new(n);
    for j in 0..bins {
        let uj = u.u_hat[j];
        if uj.norm() <= 0.5 {
            continue;
        }
        let uj_shift = u_shift.u_hat[j];
        if uj_shift.norm_sqr() == 0.0 {
            continue;
        }
        let (i, v) = decode_bin(uj, uj_shift, sigma_inv, n);
        if v.re != 0.0 || v.im != 0.0 {
            // Conflicting writes to one index within a pass: last wins.
            what.set(i, v);
        }
    }
    Ok(what)
}

/// Two-measurement phase decode: the ratio's phase, scaled to [0, n) and
/// rounded, is σ·i mod n; the value is the rounded a = 0 measurement.
fn decode_bin(u: Complex64, u_shift: Complex64, sigma_inv: usize, n: usize) -> (usize, Complex64) {
    let ratio = u / u_shift;
    let mut phase = ratio.arg();
    if phase < 0.0 {
        phase += std::f64::consts::TAU;
    }
    let tau = (phase * n as f64 / std::f64::consts::TAU).round() as usize % n;
    let i = mul_mod(sigma_inv, tau, n);
    (i, Complex64::new(u.re.round(), u.im.round()))
}

/// Iterative peeling: round t targets sparsity k/2^t with B_t = k_t/β bins.
pub fn noiseless_sparse_fft(
    x: &TimeSignal,
    k: usize,
    magnitude_bound: f64,
    cfg: &ExactConfig,
    rng: &mut RngStream,
) -> Result<SparseSpectrum> {
    Ok(noiseless_sparse_fft_traced(x, k, magnitude_bound, cfg, rng)?.0)
}

pub fn noiseless_sparse_fft_traced(
    x: &TimeSignal,
    k: usize,
    magnitude_bound: f64,
    cfg: &ExactConfig,
    rng: &mut RngStream,
) -> Result<(SparseSpectrum, ExactTrace)> {
    let n = x.n();
    if k > n {
        return Err(Error::SparsityTooLarge { k, n });
    }
    let params = ExactParams::derive(n, k, magnitude_bound);
    let mut zhat = SparseSpectrum::new(n);
    let mut trace = ExactTrace {
        round_bins: Vec::new(),
        round_alpha: Vec::new(),
        z_after: Vec::new(),
    };
    for t in 0..params.rounds {
        let k_t = ((k + (1 << t) - 1) >> t).max(1);
        let alpha_t = (cfg.c_alpha * 0.5f64.powf(t as f64 / 2.0)).min(0.25);
        let what = noiseless_inner(x, k_t, &zhat, alpha_t, params.delta, cfg, rng)?;
        zhat.merge(&what);
        trace.round_bins.push(bin_count(k_t, cfg.beta, n));
        trace.round_alpha.push(alpha_t);
        trace.z_after.push(zhat.clone());
    }
    Ok((zhat, trace))
}
