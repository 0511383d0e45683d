//! Sublinear sparse discrete Fourier transforms.
//!
//! Two randomized algorithms recover a k-sparse (or approximately k-sparse)
//! spectrum from few time-domain samples: an exact recovery loop for
//! integer-valued spectra built on two-sample phase decoding, and a general
//! (1+ε)-approximate loop built on t-ary phase search plus median
//! estimation. Both stand on three primitives: flat window functions,
//! pseudorandom spectrum permutation, and bin hashing.
//!
//! All transforms use the unitary convention (1/√n scale, kernel
//! e^{−2πi/n}), so the dense DFT is norm-preserving.

pub mod bins;
pub mod dft;
pub mod error;
pub mod exact;
pub mod general;
pub mod io;
pub mod modarith;
pub mod permute;
pub mod reduction;
pub mod rng;
pub mod signal;
pub mod window;

pub use bins::{hash_to_bins, BinMeasurement};
pub use error::{Error, Result};
pub use permute::PermutationParams;
pub use rng::RngStream;
pub use signal::{tail_err, SparseSpectrum, TimeSignal};
pub use window::{build_flat_window, cached_flat_window, gaussian_cdf_approx, FlatWindowPair};

pub use num_complex::Complex64;
