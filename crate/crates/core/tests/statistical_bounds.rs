//! Probability bounds on the hashing primitives, checked by Monte-Carlo
//! within three standard errors, plus the deterministic stride-progression
//! bound checked by exhaustive enumeration.

mod common;

use common::*;
use num_complex::Complex64;
use sfft_core::bins::hash_to_bins;
use sfft_core::dft::{idft_slice, omega_pow};
use sfft_core::modarith::mul_mod;
use sfft_core::permute::PermutationParams;
use sfft_core::rng::RngStream;
use sfft_core::signal::{tail_err, SparseSpectrum, TimeSignal};
use sfft_core::window::cached_flat_window;

#[test]
fn collision_rate_within_bound() {
    // P[some other support element shares i's bin] ≤ 4|S|/B.
    let n = 1024;
    let bins = 64;
    let mut rng = RngStream::new(314);
    let support: Vec<usize> = {
        let mut s = std::collections::BTreeSet::new();
        while s.len() < 8 {
            s.insert(rng.index(n));
        }
        s.into_iter().collect()
    };
    let i = support[0];
    let trials = 2000;
    let mut hits = 0;
    for _ in 0..trials {
        let p = PermutationParams::random(n, bins, 0, &mut rng).unwrap();
        let hi = p.bin_of(i);
        if support.iter().any(|&j| j != i && p.bin_of(j) == hi) {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / trials as f64;
    let bound = 4.0 * support.len() as f64 / bins as f64;
    assert!(
        p_hat <= bound + 3.0 * rate_se(p_hat, trials),
        "collision rate {p_hat} vs bound {bound}"
    );
}

#[test]
fn large_offset_rate_within_bound() {
    // P[|o(i)| ≥ (1−α)n/(2B)] ≤ α, up to offset-grid discretization.
    let n = 4096;
    let bins = 32;
    let alpha = 0.125;
    let threshold = ((1.0 - alpha) * n as f64 / (2.0 * bins as f64)) as i64;
    let mut rng = RngStream::new(2718);
    let i = 1234;
    let trials = 2000;
    let mut hits = 0;
    for _ in 0..trials {
        let p = PermutationParams::random(n, bins, 0, &mut rng).unwrap();
        if p.offset_of(i).abs() >= threshold {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / trials as f64;
    // The offset lattice has spacing 2B/n, so the continuous bound α can
    // be exceeded by up to two grid cells.
    let discretization = 2.0 * bins as f64 / n as f64;
    assert!(
        p_hat <= alpha + discretization + 3.0 * rate_se(p_hat, trials),
        "offset rate {p_hat} vs alpha {alpha}"
    );
}

#[test]
fn pairwise_stretch_bound_exhaustive() {
    // Over uniformly random odd σ: P[σj ∈ [−C, C] mod n] ≤ 4C/n, checked
    // exactly by enumerating all odd σ.
    let n: usize = 1024;
    for j in [1usize, 2, 3, 17, 64, 255, 512, 1023] {
        for c_half in [8usize, 32, 100] {
            let mut hits = 0usize;
            let mut total = 0usize;
            for sigma in (1..n).step_by(2) {
                let v = mul_mod(sigma, j, n);
                let signed = if 2 * v > n { v as i64 - n as i64 } else { v as i64 };
                if signed.unsigned_abs() as usize <= c_half {
                    hits += 1;
                }
                total += 1;
            }
            let bound = 4.0 * c_half as f64 / n as f64;
            assert!(
                hits as f64 / total as f64 <= bound,
                "j={j} C={c_half}: {hits}/{total} vs {bound}"
            );
        }
    }
}

#[test]
fn noise_event_rate_within_bound() {
    // P[tail energy hashed into i's bin ≥ err²/(αB)] ≤ 4α.
    let n = 1024;
    let bins = 64;
    let alpha = 0.0625;
    let k = 4;
    let eps = 1.0;
    let mut rng = RngStream::new(55);
    let mut xhat = vec![c(0.0, 0.0); n];
    for v in xhat.iter_mut() {
        let (a, b) = normal_pair(&mut rng);
        *v = c(0.05 * a, 0.05 * b);
    }
    let heads = [10usize, 333, 512, 900];
    for &f in &heads {
        xhat[f] = c(8.0, -3.0);
    }
    let err2 = tail_err(&xhat, k).powi(2);
    let mu2 = eps * err2 / k as f64;
    let heavy: Vec<usize> = (0..n).filter(|&i| xhat[i].norm_sqr() >= mu2).collect();
    let i = heads[1];

    let trials = 1500;
    let mut hits = 0;
    for _ in 0..trials {
        let p = PermutationParams::random(n, bins, 0, &mut rng).unwrap();
        let hi = p.bin_of(i);
        let bin_tail: f64 = (0..n)
            .filter(|&j| p.bin_of(j) == hi && !heavy.contains(&j))
            .map(|j| xhat[j].norm_sqr())
            .sum();
        if bin_tail >= err2 / (alpha * bins as f64) {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / trials as f64;
    assert!(
        p_hat <= 4.0 * alpha + 3.0 * rate_se(p_hat, trials),
        "noise-event rate {p_hat} vs 4α = {}",
        4.0 * alpha
    );
}

#[test]
fn hashing_noise_second_moment() {
    // For an eventless coordinate, the mean over the modulation shift a of
    // |û_{h(i)} − x̂′_i·ω^{aσi}|² is at most 2ρ²/(αB). Averaging over all
    // a ∈ [n] makes the cross terms vanish, so this is deterministic.
    let n = 1024;
    let bins = 64;
    let alpha = 0.25;
    let delta = 1e-8;
    let k = 4;
    let mut rng = RngStream::new(808);
    let mut xhat = vec![c(0.0, 0.0); n];
    for v in xhat.iter_mut() {
        let (a, b) = normal_pair(&mut rng);
        *v = c(0.05 * a, 0.05 * b);
    }
    let heads = [77usize, 300, 601, 1000];
    for &f in &heads {
        xhat[f] = c(8.0, 1.0);
    }
    let x = TimeSignal::from_values(idft_slice(&xhat)).unwrap();
    let zhat = SparseSpectrum::new(n);
    let window = cached_flat_window(n, bins, delta, alpha).unwrap();

    let l1: f64 = xhat.iter().map(|v| v.norm()).sum();
    let err2 = tail_err(&xhat, k).powi(2);
    let rho2 = err2 + delta * delta * n as f64 * l1 * l1;
    let mu2 = rho2 / k as f64;
    let heavy: Vec<usize> = (0..n).filter(|&i| xhat[i].norm_sqr() >= mu2).collect();
    let i = heads[0];

    // Find (σ, b) certified free of collision, large-offset, and
    // large-noise events for i.
    let mut chosen = None;
    for _ in 0..100 {
        let p = PermutationParams::random(n, bins, 0, &mut rng).unwrap();
        let hi = p.bin_of(i);
        let coll = heavy.iter().any(|&j| j != i && p.bin_of(j) == hi);
        let off = window.eval_ghat_prime(-p.offset_of(i)) != 1.0;
        let bin_tail: f64 = (0..n)
            .filter(|&j| p.bin_of(j) == hi && !heavy.contains(&j))
            .map(|j| xhat[j].norm_sqr())
            .sum();
        let noise = bin_tail >= err2 / (alpha * bins as f64);
        if !coll && !off && !noise {
            chosen = Some(p);
            break;
        }
    }
    let p0 = chosen.expect("no eventless permutation found");

    let mut acc = 0.0;
    for a in 0..n {
        let p = p0.with_shift(a);
        let m = hash_to_bins(&x, &zhat, &p, &window).unwrap();
        let rot = omega_pow(n, mul_mod(mul_mod(a, p.sigma(), n), i, n));
        acc += (m.u_hat[p.bin_of(i)] - xhat[i] * rot).norm_sqr();
    }
    let mean = acc / n as f64;
    let bound = 2.0 * rho2 / (alpha * bins as f64);
    assert!(
        mean <= bound * (1.0 + 1e-6) + 1e-9,
        "second moment {mean} vs bound {bound}"
    );
}

#[test]
fn stride_progression_bound_exhaustive() {
    // For β uniform over t consecutive integers in [m]: the number of β
    // with β·i mod n inside any l consecutive targets is at most
    // ⌈im/n⌉·(1 + ⌊l/i⌋). Fully deterministic; zero violations allowed.
    for n in [256usize, 1024, 4096] {
        let is = [1usize, 2, 3, 7, 32, 101, n / 4 + 1, n - 3];
        for &i in &is {
            for l in [1usize, 4, 17, 64] {
                for (m0, t) in [(1usize, 16usize), (7, 64), (n / 8 + 3, 32)] {
                    for s0 in [0usize, 5, n / 2] {
                        if s0 + l > n {
                            continue;
                        }
                        let m = m0 + t - 1;
                        let count = (m0..=m)
                            .filter(|&beta| {
                                let v = mul_mod(beta, i, n);
                                v >= s0 && v < s0 + l
                            })
                            .count() as u128;
                        let bound =
                            ((i as u128 * m as u128).div_ceil(n as u128)) * (1 + (l / i) as u128);
                        assert!(
                            count <= bound,
                            "n={n} i={i} l={l} m0={m0} t={t} s0={s0}: {count} > {bound}"
                        );
                    }
                }
            }
        }
    }
}

#[allow(dead_code)]
fn idft_tone(n: usize, f: usize, v: Complex64) -> Vec<Complex64> {
    let mut xhat = vec![c(0.0, 0.0); n];
    xhat[f] = v;
    idft_slice(&xhat)
}
