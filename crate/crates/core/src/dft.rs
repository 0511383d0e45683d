//! Dense transforms under the unitary convention: forward kernel
//! ω = e^{−2πi/n} with a 1/√n scale, so the transform preserves ℓ2 norms.
//!
//! `dft_naive` is the O(n²) ground-truth oracle; `fft_dense` is the
//! radix-2 workhorse the binning step uses.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::error::{ensure_power_of_two, Result};
use crate::signal::TimeSignal;

const TAU: f64 = std::f64::consts::TAU;

/// ω^m for ω = e^{−2πi/n}, i.e. e^{−2πi·m/n}.
#[inline]
pub fn omega_pow(n: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, -TAU * (m % n) as f64 / n as f64)
}

static OMEGA_TABLES: Lazy<Mutex<HashMap<usize, Arc<Vec<Complex64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached table of all n-th roots: entry m is e^{−2πi·m/n}. Shared across
/// callers that sit in per-sample hot loops.
pub fn omega_table(n: usize) -> Arc<Vec<Complex64>> {
    let mut cache = OMEGA_TABLES.lock().unwrap();
    cache
        .entry(n)
        .or_insert_with(|| Arc::new((0..n).map(|m| omega_pow(n, m)).collect()))
        .clone()
}

/// Brute-force unitary DFT of a counted signal. Reads every input element
/// once per output coefficient (n reads per output pass, n² total).
pub fn dft_naive(x: &TimeSignal) -> Vec<Complex64> {
    let n = x.n();
    let tw = twiddle_table(n, -1.0);
    let scale = 1.0 / (n as f64).sqrt();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += tw[(i * j) % n] * x.sample(j);
        }
        out.push(acc * scale);
    }
    out
}

/// Brute-force unitary DFT of a dense slice (no access counting).
pub fn dft_slice(x: &[Complex64]) -> Vec<Complex64> {
    naive_transform(x, -1.0)
}

/// Brute-force unitary inverse DFT.
pub fn idft_slice(x: &[Complex64]) -> Vec<Complex64> {
    naive_transform(x, 1.0)
}

fn naive_transform(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    let tw = twiddle_table(n, sign);
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in x.iter().enumerate() {
                acc += tw[(i * j) % n] * v;
            }
            acc * scale
        })
        .collect()
}

fn twiddle_table(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n)
        .map(|m| Complex64::from_polar(1.0, sign * TAU * m as f64 / n as f64))
        .collect()
}

/// Unitary radix-2 FFT; agrees with `dft_naive` to ~1e−12·√m. Rejects
/// lengths that are not powers of two.
pub fn fft_dense(x: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_power_of_two(x.len())?;
    let mut buf = x.to_vec();
    fft_forward_in_place(&mut buf);
    let scale = 1.0 / (x.len() as f64).sqrt();
    for v in &mut buf {
        *v *= scale;
    }
    Ok(buf)
}

/// Unitary radix-2 inverse FFT.
pub fn ifft_dense(x: &[Complex64]) -> Result<Vec<Complex64>> {
    ensure_power_of_two(x.len())?;
    let mut buf = x.to_vec();
    fft_inverse_in_place(&mut buf);
    let scale = 1.0 / (x.len() as f64).sqrt();
    for v in &mut buf {
        *v *= scale;
    }
    Ok(buf)
}

/// Unnormalized forward FFT, kernel e^{−2πi/m}. Length must be a power
/// of two.
pub fn fft_forward_in_place(buf: &mut [Complex64]) {
    fft_in_place(buf, -1.0);
}

/// Unnormalized backward FFT, kernel e^{+2πi/m}.
pub fn fft_inverse_in_place(buf: &mut [Complex64]) {
    fft_in_place(buf, 1.0);
}

fn fft_in_place(buf: &mut [Complex64], sign: f64) {
    let m = buf.len();
    debug_assert!(m.is_power_of_two());
    if m <= 1 {
        return;
    }
    let bits = m.trailing_zeros();
    for i in 0..m {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= m {
        let step = Complex64::from_polar(1.0, sign * TAU / len as f64);
        for base in (0..m).step_by(len) {
            let mut w = Complex64::new(1.0, 0.0);
            for off in 0..len / 2 {
                let u = buf[base + off];
                let v = buf[base + off + len / 2] * w;
                buf[base + off] = u + v;
                buf[base + off + len / 2] = u - v;
                w *= step;
            }
        }
        len <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_vec(n: usize, rng: &mut RngStream) -> Vec<Complex64> {
        (0..n)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn delta_transforms_to_constant() {
        let x = TimeSignal::from_values(vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ])
        .unwrap();
        let xh = dft_naive(&x);
        for v in xh {
            assert!((v - c(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_transforms_to_delta() {
        let x = TimeSignal::from_values(vec![c(1.0, 0.0); 4]).unwrap();
        let xh = dft_naive(&x);
        assert!((xh[0] - c(2.0, 0.0)).norm() < 1e-12);
        for v in &xh[1..] {
            assert!(v.norm() < 1e-12);
        }
    }

    // Independent double-loop oracle: per-term trig, no twiddle table.
    fn dft_reference(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        let scale = 1.0 / (n as f64).sqrt();
        (0..n)
            .map(|i| {
                let mut acc = c(0.0, 0.0);
                for (j, &v) in x.iter().enumerate() {
                    let ang = -TAU * ((i * j) % n) as f64 / n as f64;
                    acc += Complex64::from_polar(1.0, ang) * v;
                }
                acc * scale
            })
            .collect()
    }

    #[test]
    fn naive_matches_independent_reference() {
        let mut rng = RngStream::new(11);
        let vals = random_vec(8, &mut rng);
        let x = TimeSignal::from_values(vals.clone()).unwrap();
        let a = dft_naive(&x);
        let b = dft_reference(&vals);
        for (u, v) in a.iter().zip(&b) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn naive_reads_n_per_output_pass() {
        let x = TimeSignal::zeros(16).unwrap();
        dft_naive(&x);
        assert_eq!(x.reads(), 16 * 16);
    }

    #[test]
    fn fft_length_one_is_identity() {
        let out = fft_dense(&[c(3.0, -2.0)]).unwrap();
        assert_eq!(out, vec![c(3.0, -2.0)]);
    }

    #[test]
    fn fft_rejects_non_power_of_two() {
        assert!(fft_dense(&[c(0.0, 0.0); 6]).is_err());
    }

    #[test]
    fn fft_delta_case() {
        let out = fft_dense(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        for v in out {
            assert!((v - c(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn fft_matches_naive_on_all_small_lengths() {
        let mut rng = RngStream::new(29);
        let mut m = 1;
        while m <= 1024 {
            let vals = random_vec(m, &mut rng);
            let fast = fft_dense(&vals).unwrap();
            let slow = dft_slice(&vals);
            for (u, v) in fast.iter().zip(&slow) {
                assert!((u - v).norm() < 1e-9, "m={m}");
            }
            m <<= 1;
        }
    }

    #[test]
    fn parseval_and_round_trip() {
        let mut rng = RngStream::new(5);
        for n in [4usize, 32, 256] {
            let vals = random_vec(n, &mut rng);
            let x = TimeSignal::from_values(vals.clone()).unwrap();
            let xh = dft_naive(&x);
            let nx: f64 = vals.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let nh: f64 = xh.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            assert!((nx - nh).abs() <= 1e-9 * nx.max(1.0));
            let back = idft_slice(&xh);
            for (u, v) in back.iter().zip(&vals) {
                assert!((u - v).norm() < 1e-9);
            }
        }
    }
}
