use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime (got {0})")]
    NotOddPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("precision must be at least 2 p-adic digits (got {0})")]
    PrecisionTooSmall(u32),

    #[error("p^N = {p}^{prec} does not fit in 63 bits")]
    PrecisionTooLarge { p: u64, prec: u32 },

    #[error("residue polynomial {0:?} is not monic irreducible of the requested degree over F_p")]
    Reducible(Vec<u64>),

    #[error("not a unit (valuation >= 1)")]
    NotUnit,

    #[error("precision exhausted: need at least {needed} known digits, have {have}")]
    PrecisionExhausted { needed: u32, have: u32 },

    #[error("exact division by p failed: low digit is nonzero")]
    InexactDivision,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not in GL_n (determinant is not a unit)")]
    NotInGl,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("p must not divide n for the SL_n type (p = {p}, n = {n})")]
    PDividesN { p: u64, n: usize },

    #[error("dimension {n} does not fit the {variant} form (needs {expected})")]
    Parity {
        variant: &'static str,
        n: usize,
        expected: &'static str,
    },

    #[error("enumeration of {count} candidates exceeds the cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("{0}")]
    Precondition(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
