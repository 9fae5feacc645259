use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid prime {0}: modulus must be a prime >= 5 below 2^31")]
    InvalidPrime(u64),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("degree error: {0}")]
    Degree(String),
    #[error("space mismatch: cannot combine V and V-dual elements")]
    SpaceMismatch,
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("transversal search failed after {attempts} attempts")]
    SearchFailure { attempts: usize },
    #[error("bad prime {p}: basis drops rank modulo p")]
    BadPrime { p: u64 },
    #[error("degenerate-A: det(lambda_A) vanishes identically, Y_A is all of P(V)")]
    DegenerateA,
    #[error("exact division failed: remainder of degree {remainder_degree}")]
    NotDivisible { remainder_degree: i64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("chart error: {0}")]
    Chart(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("cross-check mismatch: {0}")]
    CrossCheck(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}
