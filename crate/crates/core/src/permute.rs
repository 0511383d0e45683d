//! Pseudorandom spectrum permutation with lazy per-sample evaluation.
//!
//! The time-domain reindexing (Px)_i = x_{σ(i−a)}·ω^{σbi} permutes the
//! spectrum by π(i) = σ(i−b) mod n and rotates phases by ω^{aσi}. The
//! bin map h(i) = round(π(i)·B/n) and signed offset o(i) = π(i) − h(i)·n/B
//! drive all hashing arguments downstream.

use num_complex::Complex64;

use crate::dft::omega_pow;
use crate::error::{ensure_power_of_two, Error, Result};
use crate::modarith::{inverse_mod_pow2, mul_mod};
use crate::rng::RngStream;
use crate::signal::TimeSignal;

#[derive(Clone, Copy, Debug)]
pub struct PermutationParams {
    n: usize,
    sigma: usize,
    a: usize,
    b: usize,
    sigma_inv: usize,
    bins: usize,
}

impl PermutationParams {
    pub fn new(n: usize, sigma: usize, a: usize, b: usize, bins: usize) -> Result<Self> {
        ensure_power_of_two(n)?;
        if sigma.is_multiple_of(2) {
            return Err(Error::EvenSigma(sigma));
        }
        if bins == 0 || !n.is_multiple_of(bins) {
            return Err(Error::BinsDontDivide { bins, n });
        }
        Ok(Self {
            n,
            sigma: sigma % n,
            a: a % n,
            b: b % n,
            sigma_inv: inverse_mod_pow2(sigma, n)?,
            bins,
        })
    }

    /// Draw σ uniformly odd and b uniformly, with the phase shift `a` given.
    pub fn random(n: usize, bins: usize, a: usize, rng: &mut RngStream) -> Result<Self> {
        let sigma = rng.odd(n);
        let b = rng.index(n);
        Self::new(n, sigma, a, b, bins)
    }

    /// Same (σ, b) with a different modulation shift `a`.
    pub fn with_shift(&self, a: usize) -> Self {
        Self {
            a: a % self.n,
            ..*self
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn sigma(&self) -> usize {
        self.sigma
    }
    pub fn shift_a(&self) -> usize {
        self.a
    }
    pub fn offset_b(&self) -> usize {
        self.b
    }
    pub fn sigma_inv(&self) -> usize {
        self.sigma_inv
    }
    pub fn bins(&self) -> usize {
        self.bins
    }

    /// (Px)_i = x_{σ(i−a) mod n}·ω^{σbi}; exactly one counted read of x.
    pub fn permuted_sample(&self, x: &TimeSignal, i: usize) -> Complex64 {
        let shifted = (i + self.n - self.a % self.n) % self.n;
        let src = mul_mod(self.sigma, shifted, self.n);
        let phase = mul_mod(mul_mod(self.sigma, self.b, self.n), i, self.n);
        x.sample(src) * omega_pow(self.n, phase)
    }

    /// π(i) = σ(i−b) mod n.
    pub fn pi(&self, i: usize) -> usize {
        let shifted = (i % self.n + self.n - self.b) % self.n;
        mul_mod(self.sigma, shifted, self.n)
    }

    /// Bin index h(i) in `[0, B)`, rounding exact halves upward.
    pub fn bin_of(&self, i: usize) -> usize {
        self.bin_and_offset(i).0
    }

    /// Signed offset o(i) from the bin center, |o| ≤ n/(2B).
    pub fn offset_of(&self, i: usize) -> i64 {
        self.bin_and_offset(i).1
    }

    pub fn bin_and_offset(&self, i: usize) -> (usize, i64) {
        let p = self.pi(i);
        // round(p·B/n) half-up, exactly in integers (n is even for B ≥ 1).
        let rounded = (p * self.bins + self.n / 2) / self.n;
        let width = (self.n / self.bins) as i64;
        let offset = p as i64 - rounded as i64 * width;
        (rounded % self.bins, offset)
    }

    /// The unique i with π(i) = τ, namely σ⁻¹τ + b mod n.
    pub fn invert_location(&self, tau: usize) -> usize {
        (mul_mod(self.sigma_inv, tau % self.n, self.n) + self.b) % self.n
    }
}
