//! Bin hashing: filter the permuted signal with the flat window, alias-fold
//! to B points, take a B-point FFT, and subtract the contribution of the
//! running sparse estimate directly from the bins.
//!
//! With the unitary transform convention, the unnormalized B-point DFT of
//! the folded vector equals √n·ŷ_{jn/B}, which is exactly the scale at
//! which bin j reads Σ_{h(i)=j} (x−z)̂_i·Ĝ′_{−o(i)}·ω^{aσi} ± δ‖x̂‖₁.

use num_complex::Complex64;

use crate::dft::{fft_forward_in_place, omega_pow};
use crate::error::{Error, Result};
use crate::modarith::mul_mod;
use crate::permute::PermutationParams;
use crate::signal::{SparseSpectrum, TimeSignal};
use crate::window::FlatWindowPair;

/// One batch of bin measurements for a fixed permutation.
#[derive(Clone, Debug)]
pub struct BinMeasurement {
    pub bins: usize,
    pub u_hat: Vec<Complex64>,
    pub perm: PermutationParams,
    pub samples_used: u64,
}

pub fn hash_to_bins(
    x: &TimeSignal,
    zhat: &SparseSpectrum,
    perm: &PermutationParams,
    window: &FlatWindowPair,
) -> Result<BinMeasurement> {
    let n = x.n();
    let bins = perm.bins();
    if window.n() != n || window.bins() != bins {
        return Err(Error::WindowMismatch {
            wn: window.n(),
            wb: window.bins(),
            n,
            b: bins,
        });
    }
    if !n.is_multiple_of(bins) {
        return Err(Error::BinsDontDivide { bins, n });
    }
    debug_assert_eq!(zhat.n(), n);

    // Filter over supp(G) and fold modulo B in one pass; only |supp(G)|
    // samples of x are read. This inlines permuted_sample with a shared
    // root table (the loop dominates the runtime).
    let tw = crate::dft::omega_table(n);
    let sigma = perm.sigma();
    let a_shift = perm.shift_a();
    let sb = mul_mod(sigma, perm.offset_b(), n);
    let mut folded = vec![Complex64::new(0.0, 0.0); bins];
    for &(t, g) in window.support() {
        let src = mul_mod(sigma, (t + n - a_shift) % n, n);
        let phase = mul_mod(sb, t, n);
        folded[t % bins] += x.sample(src) * tw[phase] * g;
    }
    let samples_used = window.support().len() as u64;

    // Unnormalized B-point DFT gives û_j = √n·ŷ_{jn/B}.
    let mut u_hat = folded;
    fft_forward_in_place(&mut u_hat);

    // Subtract the estimate: each entry lands in exactly one bin.
    for (&i, &zv) in zhat.iter() {
        let (h, o) = perm.bin_and_offset(i);
        let gp = window.eval_ghat_prime(-o);
        if gp != 0.0 {
            let phase = omega_pow(n, mul_mod(mul_mod(a_shift, sigma, n), i, n));
            u_hat[h] -= zv * gp * phase;
        }
    }

    Ok(BinMeasurement {
        bins,
        u_hat,
        perm: *perm,
        samples_used,
    })
}
