//! Modular arithmetic over power-of-two moduli.

use crate::error::{ensure_power_of_two, Error, Result};

/// `a * b mod n` without overflow.
#[inline]
pub fn mul_mod(a: usize, b: usize, n: usize) -> usize {
    ((a as u128 * b as u128) % n as u128) as usize
}

/// Inverse of an odd `sigma` modulo a power of two `n`, by Newton lifting:
/// each step doubles the number of correct low bits.
pub fn inverse_mod_pow2(sigma: usize, n: usize) -> Result<usize> {
    ensure_power_of_two(n)?;
    if sigma.is_multiple_of(2) {
        return Err(Error::EvenSigma(sigma));
    }
    if n == 1 {
        return Ok(0);
    }
    let s = sigma % n;
    let mut x = 1usize; // correct mod 2
    for _ in 0..n.trailing_zeros().ilog2() + 2 {
        let sx = mul_mod(s, x, n);
        let two_minus = (2 + n - sx) % n;
        x = mul_mod(x, two_minus, n);
    }
    debug_assert_eq!(mul_mod(s, x, n), 1 % n);
    Ok(x)
}
