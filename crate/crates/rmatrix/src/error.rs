use thiserror::Error;

use crate::rmt::RmtError;

/// Failures while evaluating coefficients at a parameter point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("q must be positive and different from 1 (got {0})")]
    BadQ(f64),
    #[error("singular parameter point: {what} = {value:e} is below the admissibility threshold {eps:e}")]
    Singular { what: String, value: f64, eps: f64 },
    #[error("branch error: {what} = {value:e} has no real square root")]
    Branch { what: String, value: f64 },
    #[error("unknown helper polynomial `{name}` at level m={m}")]
    UnknownHelper { name: String, m: u8 },
    #[error("spectral parameter v is required for this check")]
    MissingV,
    #[error("eigenvalues {k} and {j} collide ({gap:e} apart); pick another evaluation point")]
    EigenCollision { k: usize, j: usize, gap: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Crate-level error.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Rmt(#[from] RmtError),
    #[error("no table for m={m} kind={kind}")]
    NoTable { m: u8, kind: crate::rmt::Kind },
    #[error("level m={0} is out of range (1..=4)")]
    Level(u8),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors that come from the parameter point rather than the inputs.
    pub fn is_evaluation(&self) -> bool {
        matches!(self, Error::Eval(_))
    }
}
