//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown algebra `{0}` (supported: sl2, sl3)")]
    UnknownAlgebra(String),
    #[error("invalid tag `{0}`")]
    InvalidTag(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank disagreement between modular fast path ({modular}) and exact elimination ({exact})")]
    RankMismatch { modular: usize, exact: usize },
    #[error("slice mismatch: {0}")]
    SliceMismatch(String),
    #[error("inadmissible monomial: {0}")]
    Inadmissible(String),
    #[error("window overflow: intermediate energy {energy} exceeds bound {bound}")]
    WindowOverflow { energy: i64, bound: i64 },
    #[error("state is not expressible through generators: {0}")]
    NotGenerated(String),
    #[error("lifting failure: {0}")]
    LiftingFailure(String),
    #[error("precision mismatch: {0} vs {1}")]
    PrecisionMismatch(usize, usize),
    #[error("operator leaves oper shape: {0}")]
    NotOper(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
