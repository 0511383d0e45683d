//! Time-domain signals with counted access, and sparse spectra.
//!
//! Every algorithm in this crate is judged on how few samples of the input
//! it touches, so [`TimeSignal`] meters each element read. Signals may be
//! dense vectors or lazy generators (closed-form synthesis of a sparse
//! spectrum costs O(k) per sample, so the meter stays meaningful).

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::error::{ensure_power_of_two, Result};

type Generator = Box<dyn Fn(usize) -> Complex64 + Send + Sync>;

enum Source {
    Dense(Vec<Complex64>),
    Lazy(Generator),
}

/// Length-n complex time-domain vector, n a power of two. Indices are taken
/// modulo n on every access and each read bumps an atomic counter.
pub struct TimeSignal {
    n: usize,
    source: Source,
    reads: AtomicU64,
}

impl TimeSignal {
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        ensure_power_of_two(values.len())?;
        Ok(Self {
            n: values.len(),
            source: Source::Dense(values),
            reads: AtomicU64::new(0),
        })
    }

    /// Lazy signal backed by a generator callback.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(usize) -> Complex64 + Send + Sync + 'static,
    {
        ensure_power_of_two(n)?;
        Ok(Self {
            n,
            source: Source::Lazy(Box::new(f)),
            reads: AtomicU64::new(0),
        })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_values(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Counted element access; the index is reduced modulo n.
    pub fn sample(&self, i: usize) -> Complex64 {
        let i = i & (self.n - 1);
        self.reads.fetch_add(1, Ordering::Relaxed);
        match &self.source {
            Source::Dense(v) => v[i],
            Source::Lazy(f) => f(i),
        }
    }

    /// Total element reads performed so far.
    pub fn reads(&self) -> u64 {
        self.reads.load(Ordering::Relaxed)
    }

    /// Materialize the full signal (counts n reads).
    pub fn to_dense(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self.sample(i)).collect()
    }
}

impl std::fmt::Debug for TimeSignal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TimeSignal")
            .field("n", &self.n)
            .field("reads", &self.reads())
            .finish()
    }
}

/// Sparse frequency-domain estimate: indices in `[0, n)` mapped to nonzero
/// complex coefficients. Zero-valued entries are removed on insertion.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSpectrum {
    n: usize,
    entries: BTreeMap<usize, Complex64>,
}

impl SparseSpectrum {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (usize, Complex64)>,
    {
        let mut s = Self::new(n);
        for (i, v) in pairs {
            s.add(i, v);
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Support size ‖·‖₀.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.entries
            .get(&(i % self.n))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Overwrite entry `i`; exact zeros are dropped.
    pub fn set(&mut self, i: usize, v: Complex64) {
        let i = i % self.n;
        if v.re == 0.0 && v.im == 0.0 {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, v);
        }
    }

    /// Accumulate `v` into entry `i`; exact zeros are dropped.
    pub fn add(&mut self, i: usize, v: Complex64) {
        let i = i % self.n;
        let sum = self.get(i) + v;
        self.set(i, sum);
    }

    /// Accumulate a whole spectrum (the peeling update ẑ ← ẑ + ŵ).
    pub fn merge(&mut self, other: &SparseSpectrum) {
        debug_assert_eq!(self.n, other.n);
        for (&i, &v) in other.iter() {
            self.add(i, v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &Complex64)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for (&i, &v) in self.entries.iter() {
            out[i] = v;
        }
        out
    }

    pub fn l2_norm(&self) -> f64 {
        self.entries
            .values()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// ℓ2 distance between this spectrum and a dense vector of length n.
    pub fn l2_distance_dense(&self, dense: &[Complex64]) -> f64 {
        debug_assert_eq!(dense.len(), self.n);
        let mut acc = 0.0;
        for (i, &d) in dense.iter().enumerate() {
            acc += (d - self.get(i)).norm_sqr();
        }
        acc.sqrt()
    }

    /// ℓ2 distance to another sparse spectrum.
    pub fn l2_distance(&self, other: &SparseSpectrum) -> f64 {
        let mut acc = 0.0;
        for (&i, &v) in self.entries.iter() {
            acc += (v - other.get(i)).norm_sqr();
        }
        for (&i, &v) in other.entries.iter() {
            if !self.entries.contains_key(&i) {
                acc += v.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Tail error restricted to the stored entries (implicit zeros
    /// contribute nothing).
    pub fn tail_err(&self, k: usize) -> f64 {
        let pairs: Vec<(usize, Complex64)> =
            self.entries.iter().map(|(&i, &v)| (i, v)).collect();
        tail_err_indexed(&pairs, k)
    }
}

/// err(v, k): ℓ2 norm of `v` with its k largest-magnitude entries removed.
/// Magnitude ties keep the lower index in the retained head.
pub fn tail_err(v: &[Complex64], k: usize) -> f64 {
    let pairs: Vec<(usize, Complex64)> = v.iter().copied().enumerate().collect();
    tail_err_indexed(&pairs, k)
}

fn tail_err_indexed(pairs: &[(usize, Complex64)], k: usize) -> f64 {
    if k >= pairs.len() {
        return 0.0;
    }
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        let ma = pairs[a].1.norm_sqr();
        let mb = pairs[b].1.norm_sqr();
        mb.partial_cmp(&ma)
            .unwrap()
            .then_with(|| pairs[a].0.cmp(&pairs[b].0))
    });
    order[k..]
        .iter()
        .map(|&idx| pairs[idx].1.norm_sqr())
        .sum::<f64>()
        .sqrt()
}
