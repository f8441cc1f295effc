use thiserror::Error;

use crate::exact::RationalMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("order must be positive")]
    NonPositiveOrder,

    #[error("lattice parameters must be positive")]
    NonPositiveLattice,

    #[error("invalid piecewise polynomial: {0}")]
    InvalidPiecewise(&'static str),

    #[error("matrix shape mismatch: expected {expected} entries, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("{name} = {value} out of range {lo}..={hi}")]
    IndexOutOfRange {
        name: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("requires gcd({q}, {p}) = 1, got {gcd}")]
    NotCoprime { p: u64, q: u64, gcd: u64 },

    #[error("no closed form; use a_sn_direct ({0})")]
    NoClosedForm(String),

    /// Raised when an entry with `X_sn = 0` is requested from a two-term formula
    /// that only covers nonzero offsets.
    #[error("internal error: X_sn = 0 at (s, n) = ({s}, {n})")]
    ZeroOffset { s: u32, n: u32 },

    /// The symbol matrix had full column rank where a theorem says it cannot.
    #[error("certificate failed: symbol matrix has full column rank {rank}")]
    CertificateFailed {
        rank: usize,
        matrix: Box<RationalMatrix>,
    },

    /// A lemma identity failed on a checked instance.
    #[error("lemma check failed: {0}")]
    LemmaViolation(String),

    #[error("invalid scan region: {0}")]
    InvalidRegion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
