//! Benchmark harness for the sparse FFT algorithms: seeded instance
//! generation, trial batches with sample accounting, scaling sweeps, and
//! CSV/JSON report emission.

pub mod config;
pub mod gen;
pub mod sweep;
pub mod trials;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] sfft_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Process exit code: 2 for usage problems, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) | HarnessError::Core(_) => 2,
            HarnessError::Io(_) | HarnessError::Json(_) => 3,
        }
    }
}
