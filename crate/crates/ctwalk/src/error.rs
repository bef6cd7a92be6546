//! Error types shared across the crate.

use thiserror::Error;

use crate::graph::ValidityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("invalid Laplacian matrix:\n{0}")]
    InvalidLaplacian(Box<ValidityReport>),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("time must be nonnegative, got {t}: {reason}")]
    NegativeTime { t: f64, reason: &'static str },

    #[error("propagator entry {value:.3e} at ({row},{col}) violates positivity")]
    Positivity { value: f64, row: usize, col: usize },

    #[error("gauge precondition violated: {0}")]
    Gauge(String),

    #[error(
        "flux {p}/{q} is incommensurate with lattice size {size}; \
         smallest commensurate size is {smallest}"
    )]
    IncommensurateFlux {
        p: u64,
        q: u64,
        size: usize,
        smallest: usize,
    },

    #[error("generator extraction requires gamma > 0")]
    DegenerateExtraction,

    #[error("order fitting needs at least {needed} lattice sizes, got {got}")]
    InsufficientSizes { needed: usize, got: usize },

    #[error("evaluation produced a non-finite value: {0}")]
    NonFinite(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV parse error at line {line}: {msg}")]
    CsvParse { line: usize, msg: String },
}

impl Error {
    /// True when the error reflects bad user input rather than an internal
    /// failure. The CLI maps these to exit code 2.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::NonFinite(_))
    }
}
