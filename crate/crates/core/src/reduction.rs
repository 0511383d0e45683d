//! Full k-dimensional DFT via the exact sparse algorithm: periodize the
//! k-vector to length n, so its n-dimensional spectrum is supported
//! exactly on multiples of n/k, then recover those k coefficients.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{ensure_power_of_two, Error, Result};
use crate::exact::ExactConfig;
use crate::rng::RngStream;
use crate::signal::TimeSignal;

/// Periodic lift y_i = x_{i mod k}. Each read of y costs one counted read
/// of the underlying x.
pub fn lift(x: Arc<TimeSignal>, n: usize) -> Result<TimeSignal> {
    let k = x.n();
    ensure_power_of_two(n)?;
    if !n.is_multiple_of(k) {
        return Err(Error::BlockDoesNotDivide { k, n });
    }
    TimeSignal::from_fn(n, move |i| x.sample(i % k))
}

/// Compute the k-dimensional unitary DFT of `x` by lifting to n dimensions
/// and running exact sparse recovery with sparsity k. The raw lift carries
/// a √(n/k) scale relative to the k-dimensional spectrum; dividing the
/// lifted samples by that factor makes the lifted spectrum equal x̂ on
/// multiples of n/k — in particular it stays integer-valued whenever x̂
/// is, for every k dividing n.
pub fn full_dft_via_sparse(
    x: &[Complex64],
    n: usize,
    magnitude_bound: f64,
    cfg: &ExactConfig,
    rng: &mut RngStream,
) -> Result<Vec<Complex64>> {
    Ok(full_dft_via_sparse_traced(x, n, magnitude_bound, cfg, rng)?.0)
}

/// Telemetry from a reduction run.
#[derive(Clone, Copy, Debug)]
pub struct ReductionTrace {
    /// Counted reads of the underlying k-dimensional vector.
    pub samples_used: u64,
    /// Largest support the running estimate reached.
    pub peak_support: usize,
}

pub fn full_dft_via_sparse_traced(
    x: &[Complex64],
    n: usize,
    magnitude_bound: f64,
    cfg: &ExactConfig,
    rng: &mut RngStream,
) -> Result<(Vec<Complex64>, ReductionTrace)> {
    let k = x.len();
    ensure_power_of_two(k)?;
    ensure_power_of_two(n)?;
    if !n.is_multiple_of(k) {
        return Err(Error::BlockDoesNotDivide { k, n });
    }
    let scale = ((n / k) as f64).sqrt();
    let inner = Arc::new(TimeSignal::from_values(x.to_vec())?);
    let counted = inner.clone();
    let lifted = TimeSignal::from_fn(n, move |i| counted.sample(i % k) / scale)?;
    let (zhat, trace) =
        crate::exact::noiseless_sparse_fft_traced(&lifted, k, magnitude_bound, cfg, rng)?;
    let stride = n / k;
    let mut out = vec![Complex64::new(0.0, 0.0); k];
    for (m, slot) in out.iter_mut().enumerate() {
        *slot = zhat.get(m * stride);
    }
    Ok((
        out,
        ReductionTrace {
            samples_used: inner.reads(),
            peak_support: trace.peak_support(),
        },
    ))
}
