use std::path::PathBuf;

use crate::edge::EdgeVector;

/// Errors produced by the moment engine and its cross-checks.
#[derive(Debug, thiserror::Error)]
pub enum MomentError {
    #[error("edge vector {a} is not valid for order n={n}: {reason}")]
    InvalidEdgeVector {
        n: u32,
        a: EdgeVector,
        reason: &'static str,
    },

    #[error("order must be at least 1, got {0}")]
    InvalidOrder(u32),

    #[error("memo entry g({n}, {a}) is required but missing")]
    MissingKey { n: u32, a: EdgeVector },

    #[error("logarithm undefined: {0}")]
    LogUndefined(&'static str),

    #[error("double factorial undefined for {0} < -1")]
    NegativeDoubleFactorial(i64),

    #[error("hafnian requires an even dimension, got {0}")]
    OddDimension(usize),

    #[error("matrix is not symmetric (max |A - A^T| = {0:e})")]
    NotSymmetric(f64),

    #[error("matrix dimension {0} exceeds the supported maximum of {1}")]
    TooLarge(usize, usize),

    #[error("enumeration at n={n} exceeds the configured limit n<={max}")]
    EnumerationTooLarge { n: u32, max: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least 3 contiguous values for a symmetric difference, got {0}")]
    RangeTooShort(usize),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("corrupt cache entry for g({n}, {a}) at {path}: {reason}")]
    CorruptCache {
        n: u32,
        a: EdgeVector,
        path: PathBuf,
        reason: String,
    },

    #[error("cannot parse cache file {path}: {reason}")]
    UnreadableCacheFile { path: PathBuf, reason: String },

    #[error("polynomial text is malformed: {0}")]
    ParsePolynomial(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = MomentError> = std::result::Result<T, E>;
