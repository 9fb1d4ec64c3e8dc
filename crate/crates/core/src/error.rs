use thiserror::Error;

/// Errors raised by the counting library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("prime {0} is outside the supported range 3..=2^31")]
    PrimeOutOfRange(u64),

    #[error("{0} is not congruent to 1 mod 4")]
    NotOneModFour(u32),

    #[error("denominator {den} is divisible by p = {p}")]
    DenominatorDivisible { den: String, p: u32 },

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("argument outside the domain of {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("q-expansion {label} rejected at index {index}: {reason}")]
    QExpansion {
        label: String,
        index: usize,
        reason: String,
    },

    #[error("coefficient a_{n} of {label} is not available (table holds a_1..a_{max})")]
    MissingCoefficient { label: String, n: u64, max: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical tolerance exceeded: {0}")]
    Tolerance(String),

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("data file {path}: {reason}")]
    Data { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    /// True for errors caused by bad configuration or input data rather than
    /// by a failed mathematical check.
    pub fn is_configuration(&self) -> bool {
        !matches!(self, Error::Integrity(_) | Error::Tolerance(_))
    }
}
