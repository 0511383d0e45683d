//! Flat window functions: a time-domain filter G with small support whose
//! spectrum approximates an idealized band shape Ĝ′ that is exactly 1 on a
//! pass region, exactly 0 on a stop region, and in [0, 1] on the transition
//! band, with ‖Ĝ − Ĝ′‖∞ < δ.
//!
//! Construction: a Gaussian envelope times a sinc, folded modulo n. The
//! continuous prototype is G*(t) = exp(−2π²t²/σ²)·2C·sinc(2Ct), whose
//! Fourier transform is the boxcar [−C, C] smoothed by a Gaussian CDF:
//! Ĝ*(s) = Φ(σ(s+C)) − Φ(σ(s−C)). Folding one period of G* into [0, n)
//! gives a discrete filter whose unitary DFT aliases Ĝ* onto the grid.

use std::collections::HashMap;
use std::io::Write;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::error::{ensure_power_of_two, Error, Result};

const SQRT_TAU: f64 = 2.5066282746310002; // √(2π)

/// Gaussian CDF to absolute precision δ, in O(log(1/δ)) time.
///
/// Outside |t| ≤ √(2 ln(1/δ)) the result is a hard 0 or 1; inside, a
/// truncated odd series around 0. The hard cutoffs and the odd series
/// together give |Φ̃(t) + Φ̃(−t) − 1| ≤ 2δ.
pub fn gaussian_cdf_approx(t: f64, delta: f64) -> f64 {
    debug_assert!(delta > 0.0 && delta < 0.5);
    let bound = (2.0 * (1.0 / delta).ln()).sqrt();
    if t < -bound {
        return 0.0;
    }
    if t > bound {
        return 1.0;
    }
    // Φ(t) = 1/2 + pdf(t)·(t + t³/3 + t⁵/(3·5) + …)
    let pdf = (-t * t / 2.0).exp() / SQRT_TAU;
    let t2 = t * t;
    let mut term = t;
    let mut sum = t;
    let mut k = 1u32;
    while k < 2000 {
        term *= t2 / (2 * k + 1) as f64;
        sum += term;
        if (2 * k + 1) as f64 > t2 && term.abs() * pdf < delta * 0.125 {
            break;
        }
        k += 1;
    }
    0.5 + pdf * sum
}

/// Time-domain filter plus fast evaluator for its idealized spectrum.
pub struct FlatWindowPair {
    n: usize,
    bins: usize,
    delta: f64,
    alpha: f64,
    sigma_gauss: f64,
    c_box: f64,
    delta_inner: f64,
    pass_radius: f64,
    stop_radius: f64,
    g_support: Vec<(usize, f64)>,
}

impl FlatWindowPair {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn bins(&self) -> usize {
        self.bins
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn sigma_gauss(&self) -> f64 {
        self.sigma_gauss
    }
    pub fn c_box(&self) -> f64 {
        self.c_box
    }

    /// Nonzero time-domain entries (index, value).
    pub fn support(&self) -> &[(usize, f64)] {
        &self.g_support
    }

    /// Densified time-domain filter.
    pub fn g_dense(&self) -> Vec<Complex64> {
        let mut g = vec![Complex64::new(0.0, 0.0); self.n];
        for &(i, v) in &self.g_support {
            g[i] = Complex64::new(v, 0.0);
        }
        g
    }

    /// Idealized spectrum Ĝ′ at index `i` (interpreted mod n, signed
    /// representative in (−n/2, n/2]). Exact 0/1 outside the transition
    /// band in O(1); two CDF evaluations inside it.
    pub fn eval_ghat_prime(&self, i: i64) -> f64 {
        if self.bins == 1 {
            return 1.0;
        }
        let n = self.n as i64;
        let mut s = i.rem_euclid(n);
        if 2 * s > n {
            s -= n;
        }
        let mag = s.unsigned_abs() as f64;
        if mag <= self.pass_radius {
            return 1.0;
        }
        if mag >= self.stop_radius {
            return 0.0;
        }
        let x = s as f64 / self.n as f64;
        let hi = gaussian_cdf_approx(self.sigma_gauss * (x + self.c_box), self.delta_inner);
        let lo = gaussian_cdf_approx(self.sigma_gauss * (x - self.c_box), self.delta_inner);
        (hi - lo).clamp(0.0, 1.0)
    }

    /// Debug dump: CSV rows (i, G_i, Ghat_i, Ghat_prime_i). Computes the
    /// true spectrum by dense DFT, so this is for small n only.
    pub fn dump_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        let ghat = crate::dft::dft_slice(&self.g_dense());
        writeln!(w, "i,g,ghat,ghat_prime")?;
        let mut g = vec![0.0; self.n];
        for &(i, v) in &self.g_support {
            g[i] = v;
        }
        for i in 0..self.n {
            writeln!(
                w,
                "{},{},{},{}",
                i,
                g[i],
                ghat[i].re,
                self.eval_ghat_prime(i as i64)
            )?;
        }
        Ok(())
    }
}

/// Build the flat window pair for (n, B, δ, α).
///
/// B = 1 is the trivial all-pass pair: Ĝ′ ≡ 1 and G a scaled unit impulse.
/// Otherwise σ = (4B/α)√(2 ln(n/δ)) and C = (1−α/2)/(2B), with the filter
/// folded over the single period |j| < σ√(2 ln(n/δ)) and δ pre-divided by n.
pub fn build_flat_window(n: usize, bins: usize, delta: f64, alpha: f64) -> Result<FlatWindowPair> {
    ensure_power_of_two(n)?;
    if bins < 1 || bins > n {
        return Err(Error::ParamRange {
            name: "bins",
            value: bins as f64,
            range: "1 ≤ B ≤ n",
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::ParamRange {
            name: "delta",
            value: delta,
            range: "(0, 1)",
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::ParamRange {
            name: "alpha",
            value: alpha,
            range: "(0, 1)",
        });
    }

    if bins == 1 {
        return Ok(FlatWindowPair {
            n,
            bins,
            delta,
            alpha,
            sigma_gauss: 0.0,
            c_box: 0.5,
            delta_inner: delta / n as f64,
            pass_radius: n as f64,
            stop_radius: 2.0 * n as f64,
            g_support: vec![(0, (n as f64).sqrt())],
        });
    }

    let log_term = (n as f64 / delta).ln();
    let sigma = (4.0 * bins as f64 / alpha) * (2.0 * log_term).sqrt();
    let c_box = (1.0 - alpha / 2.0) / (2.0 * bins as f64);
    let radius = sigma * (2.0 * log_term).sqrt();
    // Beyond exp(−2π²t²/σ²) = e^{−60} the terms are below any tolerance
    // this construction targets; skip them.
    let radius_floor = sigma * (60.0 / (2.0 * std::f64::consts::PI.powi(2))).sqrt();
    let jmax = radius.min(radius_floor).floor() as i64;

    let sqrt_n = (n as f64).sqrt();
    let two_pi_sq = 2.0 * std::f64::consts::PI.powi(2);
    let mut g = vec![0.0f64; n];
    for j in -jmax..=jmax {
        let t = j as f64;
        if t.abs() >= radius {
            continue;
        }
        let envelope = (-two_pi_sq * t * t / (sigma * sigma)).exp();
        if envelope == 0.0 {
            continue;
        }
        let gstar = envelope * 2.0 * c_box * sinc(2.0 * c_box * t);
        let idx = (j.rem_euclid(n as i64)) as usize;
        g[idx] += sqrt_n * gstar;
    }
    let g_support: Vec<(usize, f64)> = g
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(i, &v)| (i, v))
        .collect();

    Ok(FlatWindowPair {
        n,
        bins,
        delta,
        alpha,
        sigma_gauss: sigma,
        c_box,
        delta_inner: delta / n as f64,
        pass_radius: (1.0 - alpha) * n as f64 / (2.0 * bins as f64),
        stop_radius: n as f64 / (2.0 * bins as f64),
        g_support,
    })
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

type CacheKey = (usize, usize, u64, u64);
static WINDOW_CACHE: Lazy<Mutex<HashMap<CacheKey, Arc<FlatWindowPair>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Shared cache of built windows, keyed on (n, B, δ, α). Construction cost
/// amortizes across trials; the returned pair is immutable.
pub fn cached_flat_window(n: usize, bins: usize, delta: f64, alpha: f64) -> Result<Arc<FlatWindowPair>> {
    let key = (n, bins, delta.to_bits(), alpha.to_bits());
    if let Some(hit) = WINDOW_CACHE.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build_flat_window(n, bins, delta, alpha)?);
    WINDOW_CACHE
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| built.clone());
    Ok(built)
}
