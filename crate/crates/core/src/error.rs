use thiserror::Error;

/// Errors produced by parameter validation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("sigma must be odd, got {0}")]
    EvenSigma(usize),
    #[error("bin count {bins} does not divide signal length {n}")]
    BinsDontDivide { bins: usize, n: usize },
    #[error("parameter {name} = {value} outside valid range {range}")]
    ParamRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("window built for (n={wn}, B={wb}) but called with (n={n}, B={b})")]
    WindowMismatch { wn: usize, wb: usize, n: usize, b: usize },
    #[error("sparsity k={k} exceeds length n={n}")]
    SparsityTooLarge { k: usize, n: usize },
    #[error("block length {k} does not divide ambient length {n}")]
    BlockDoesNotDivide { k: usize, n: usize },
    #[error("bad signal file: {0}")]
    BadSignalFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_power_of_two(n: usize) -> Result<()> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(())
}
