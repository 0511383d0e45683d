//! Test-signal generators with retained ground truth.
//!
//! The generated signal handle is what the algorithm under test samples
//! (and what the sample counter meters); the oracle spectrum is kept
//! separately so evaluating success never touches the counter.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use sfft_core::dft::{ifft_dense, omega_table};
use sfft_core::rng::RngStream;
use sfft_core::signal::{SparseSpectrum, TimeSignal};

/// Ground-truth spectrum kept on the oracle side of a trial.
#[derive(Clone, Debug)]
pub enum TruthSpectrum {
    Sparse(SparseSpectrum),
    Dense(Vec<Complex64>),
}

impl TruthSpectrum {
    pub fn n(&self) -> usize {
        match self {
            TruthSpectrum::Sparse(s) => s.n(),
            TruthSpectrum::Dense(v) => v.len(),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        match self {
            TruthSpectrum::Sparse(s) => s.l2_norm(),
            TruthSpectrum::Dense(v) => v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    pub fn tail_err(&self, k: usize) -> f64 {
        match self {
            TruthSpectrum::Sparse(s) => s.tail_err(k),
            TruthSpectrum::Dense(v) => sfft_core::signal::tail_err(v, k),
        }
    }

    /// ℓ2 distance between the truth and a sparse estimate.
    pub fn l2_distance(&self, est: &SparseSpectrum) -> f64 {
        match self {
            TruthSpectrum::Sparse(s) => s.l2_distance(est),
            TruthSpectrum::Dense(v) => est.l2_distance_dense(v),
        }
    }

    /// Exact equality against a sparse estimate (integer spectra).
    pub fn matches_exactly(&self, est: &SparseSpectrum) -> bool {
        match self {
            TruthSpectrum::Sparse(s) => {
                s.support_size() == est.support_size()
                    && s.iter().all(|(&i, &v)| est.get(i) == v)
            }
            TruthSpectrum::Dense(v) => {
                v.iter().enumerate().all(|(i, &val)| est.get(i) == val)
            }
        }
    }
}

/// A generated trial instance: the counted signal plus its oracle truth.
pub struct Instance {
    pub signal: TimeSignal,
    pub truth: TruthSpectrum,
}

/// Draw k distinct frequencies with nonzero integer real/imaginary parts
/// in [−l, l]; the signal is synthesized lazily from the closed form, so
/// each sample costs O(k).
pub fn gen_exact_sparse(n: usize, k: usize, l: i64, rng: &mut RngStream) -> Instance {
    let tones = draw_integer_tones(n, k, l, rng);
    let signal = signal_from_tones(n, &tones);
    Instance {
        signal,
        truth: TruthSpectrum::Sparse(SparseSpectrum::from_pairs(n, tones)),
    }
}

pub fn draw_integer_tones(
    n: usize,
    k: usize,
    l: i64,
    rng: &mut RngStream,
) -> Vec<(usize, Complex64)> {
    assert!(k <= n, "sparsity exceeds length");
    assert!(l >= 1, "magnitude bound must be at least 1");
    let mut tones: Vec<(usize, Complex64)> = Vec::with_capacity(k);
    let span = (2 * l + 1) as usize;
    while tones.len() < k {
        let f = rng.index(n);
        if tones.iter().any(|&(g, _)| g == f) {
            continue;
        }
        let re = (rng.index(span) as i64 - l) as f64;
        let im = (rng.index(span) as i64 - l) as f64;
        if re == 0.0 && im == 0.0 {
            continue;
        }
        tones.push((f, Complex64::new(re, im)));
    }
    tones
}

/// Lazy synthesis x_j = (1/√n)·Σ_f v_f·e^{+2πi·f·j/n}.
pub fn signal_from_tones(n: usize, tones: &[(usize, Complex64)]) -> TimeSignal {
    let tones = tones.to_vec();
    let tw = omega_table(n);
    let scale = 1.0 / (n as f64).sqrt();
    TimeSignal::from_fn(n, move |j| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(f, v) in &tones {
            acc += v * tw[(f * j) % n].conj();
        }
        acc * scale
    })
    .unwrap()
}

/// k-sparse head of fixed magnitude and uniform phase, plus i.i.d. complex
/// Gaussian noise (std `noise_sigma` per real coordinate) across the whole
/// spectrum. The signal is synthesized eagerly by inverse FFT; the dense
/// oracle spectrum is retained.
pub fn gen_noisy_sparse(
    n: usize,
    k: usize,
    head_magnitude: f64,
    noise_sigma: f64,
    rng: &mut RngStream,
) -> Instance {
    assert!(k <= n);
    let mut xhat = vec![Complex64::new(0.0, 0.0); n];
    if noise_sigma > 0.0 {
        for v in xhat.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *v = Complex64::new(re * noise_sigma, im * noise_sigma);
        }
    }
    let mut placed = std::collections::BTreeSet::new();
    while placed.len() < k {
        let f = rng.index(n);
        if !placed.insert(f) {
            continue;
        }
        let phase = std::f64::consts::TAU * rng.unit_f64();
        xhat[f] += Complex64::from_polar(head_magnitude, phase);
    }
    let time = ifft_dense(&xhat).unwrap();
    Instance {
        signal: TimeSignal::from_values(time).unwrap(),
        truth: TruthSpectrum::Dense(xhat),
    }
}

/// Default head magnitude for noisy instances: 20·σ·√n/k.
pub fn default_head_magnitude(n: usize, k: usize, noise_sigma: f64) -> f64 {
    20.0 * noise_sigma * (n as f64).sqrt() / k as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use sfft_core::dft::dft_slice;

    #[test]
    fn zero_sparsity_gives_zero_signal() {
        let mut rng = RngStream::new(1);
        let inst = gen_exact_sparse(64, 0, 5, &mut rng);
        for i in 0..64 {
            assert_eq!(inst.signal.sample(i), Complex64::new(0.0, 0.0));
        }
        assert_eq!(inst.truth.tail_err(0), 0.0);
    }

    #[test]
    fn single_tone_matches_dense_transform() {
        let mut rng = RngStream::new(2);
        let n = 64;
        let inst = gen_exact_sparse(n, 1, 9, &mut rng);
        let dense = inst.signal.to_dense();
        let xhat = dft_slice(&dense);
        let TruthSpectrum::Sparse(truth) = &inst.truth else {
            panic!()
        };
        for i in 0..n {
            assert!((xhat[i] - truth.get(i)).norm() < 1e-9, "i={i}");
        }
    }

    #[test]
    fn generated_spectra_are_integer_and_in_range() {
        let mut rng = RngStream::new(3);
        for _ in 0..50 {
            let tones = draw_integer_tones(256, 10, 7, &mut rng);
            assert_eq!(tones.len(), 10);
            let mut seen = std::collections::BTreeSet::new();
            for (f, v) in tones {
                assert!(seen.insert(f));
                for part in [v.re, v.im] {
                    assert_eq!(part, part.round());
                    assert!(part.abs() <= 7.0);
                }
                assert!(v.norm_sqr() > 0.0);
            }
        }
    }

    #[test]
    fn zero_noise_reduces_to_sparse_instance() {
        let mut rng = RngStream::new(4);
        let n = 256;
        let inst = gen_noisy_sparse(n, 3, 10.0, 0.0, &mut rng);
        let TruthSpectrum::Dense(xhat) = &inst.truth else {
            panic!()
        };
        let nonzero = xhat.iter().filter(|v| v.norm_sqr() > 0.0).count();
        assert_eq!(nonzero, 3);
        assert_eq!(inst.truth.tail_err(3), 0.0);
        // time signal matches the inverse transform of the truth
        let dense = inst.signal.to_dense();
        let back = dft_slice(&dense);
        for i in 0..n {
            assert!((back[i] - xhat[i]).norm() < 1e-9);
        }
    }

    #[test]
    fn noise_tail_energy_concentrates() {
        // tail_err(x̂, k)² ≈ 2(n−k)σ² within 10%.
        let n = 8192;
        let k = 8;
        let sigma = 0.7;
        let mut rng = RngStream::new(5);
        let head = default_head_magnitude(n, k, sigma);
        let mut ratios = Vec::new();
        for _ in 0..8 {
            let inst = gen_noisy_sparse(n, k, head, sigma, &mut rng);
            let t2 = inst.truth.tail_err(k).powi(2);
            ratios.push(t2 / (2.0 * (n - k) as f64 * sigma * sigma));
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        assert!((mean - 1.0).abs() < 0.1, "ratio {mean}");
    }

    #[test]
    fn head_support_dominates_tail() {
        // With the default head magnitude, the top-k entries of the oracle
        // spectrum are the planted frequencies in at least 99% of trials.
        let n = 2048;
        let k = 8;
        let sigma = 1.0;
        let head = default_head_magnitude(n, k, sigma);
        let mut hits = 0;
        let trials = 300;
        for t in 0..trials {
            let mut rng = RngStream::substream(6, t);
            let inst = gen_noisy_sparse(n, k, head, sigma, &mut rng);
            let TruthSpectrum::Dense(xhat) = &inst.truth else {
                panic!()
            };
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| xhat[b].norm_sqr().partial_cmp(&xhat[a].norm_sqr()).unwrap());
            let top: std::collections::BTreeSet<usize> = idx[..k].iter().copied().collect();
            let planted: std::collections::BTreeSet<usize> = (0..n)
                .filter(|&i| xhat[i].norm() > head / 2.0)
                .collect();
            if top == planted {
                hits += 1;
            }
        }
        assert!(hits * 100 >= trials * 99, "{hits}/{trials}");
    }
}
