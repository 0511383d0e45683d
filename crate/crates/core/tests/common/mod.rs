//! Shared helpers for integration tests: instance generators and
//! oracle-side statistics.
#![allow(dead_code)] // each integration test compiles this module separately

use num_complex::Complex64;
use sfft_core::dft::omega_table;
use sfft_core::rng::RngStream;
use sfft_core::signal::TimeSignal;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Box-Muller standard normal pair.
pub fn normal_pair(rng: &mut RngStream) -> (f64, f64) {
    let u1 = (1.0 - rng.unit_f64()).max(1e-300);
    let u2 = rng.unit_f64();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = std::f64::consts::TAU * u2;
    (r * th.cos(), r * th.sin())
}

/// k distinct tones with nonzero integer parts in [−l, l]; the signal is
/// synthesized lazily (O(k) per sample) from the closed form.
pub fn gen_sparse_integer(
    n: usize,
    k: usize,
    l: i64,
    rng: &mut RngStream,
) -> (Vec<(usize, Complex64)>, TimeSignal) {
    let mut tones: Vec<(usize, Complex64)> = Vec::new();
    while tones.len() < k {
        let f = rng.index(n);
        if tones.iter().any(|&(g, _)| g == f) {
            continue;
        }
        let span = (2 * l + 1) as usize;
        let re = (rng.index(span) as i64 - l) as f64;
        let im = (rng.index(span) as i64 - l) as f64;
        if re == 0.0 && im == 0.0 {
            continue;
        }
        tones.push((f, c(re, im)));
    }
    let x = signal_from_tones(n, &tones);
    (tones, x)
}

/// Lazy time signal Σ_f v_f·e^{+2πi·f·j/n}/√n.
pub fn signal_from_tones(n: usize, tones: &[(usize, Complex64)]) -> TimeSignal {
    let tones = tones.to_vec();
    let tw = omega_table(n);
    let scale = 1.0 / (n as f64).sqrt();
    TimeSignal::from_fn(n, move |j| {
        let mut acc = c(0.0, 0.0);
        for &(f, v) in &tones {
            acc += v * tw[(f * j) % n].conj();
        }
        acc * scale
    })
    .unwrap()
}

/// Sample mean and standard error of the mean.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let m = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>()
        / (values.len().saturating_sub(1)).max(1) as f64;
    (m, (var / values.len() as f64).sqrt())
}

/// Standard error for a Bernoulli rate estimate.
pub fn rate_se(p_hat: f64, trials: usize) -> f64 {
    ((p_hat * (1.0 - p_hat)).max(1e-9) / trials as f64).sqrt()
}
