use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative value {0} (sequences must be non-negative)")]
    NegativeValue(Rational),

    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: i64, hi: i64 },

    #[error("negative averaging radius {0}")]
    NegativeRadius(i64),

    #[error("the maximal function of the zero sequence is identically zero")]
    ZeroFunction,

    #[error("tail monotonicity certificate failed at n = {at}: {reason}")]
    TailCertificateFailed { at: i64, reason: String },

    #[error("degenerate window: the maximal function has no peak structure here")]
    DegenerateWindow,

    #[error("window [{lo}, {hi}] does not contain the support core [{core_lo}, {core_hi}]")]
    WindowTooSmall {
        lo: i64,
        hi: i64,
        core_lo: i64,
        core_hi: i64,
    },

    #[error("no radius attains Mf({0}) at an essential summit")]
    OmegaNotAttained(i64),

    #[error("non-essential peak ({p}, {r}, {q}) has no interior point of large value")]
    MissingInteriorPoint { p: i64, r: i64, q: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration size {size} exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
