//! Shared instance builders for the criterion benchmarks.

use num_complex::Complex64;
use sfft_core::rng::RngStream;
use sfft_core::signal::TimeSignal;

/// Deterministic dense random signal.
pub fn dense_signal(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = RngStream::new(seed);
    (0..n)
        .map(|_| Complex64::new(rng.unit_f64() - 0.5, rng.unit_f64() - 0.5))
        .collect()
}

/// Lazy k-sparse integer-spectrum signal plus its planted tones.
pub fn sparse_signal(n: usize, k: usize, seed: u64) -> (Vec<(usize, Complex64)>, TimeSignal) {
    let mut rng = RngStream::new(seed);
    let tones = sfft_cli::gen::draw_integer_tones(n, k, 7, &mut rng);
    let signal = sfft_cli::gen::signal_from_tones(n, &tones);
    (tones, signal)
}
