use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("value {0} is not 5-integral")]
    NotIntegral(String),
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("cochains belong to different algebroid specs")]
    SpecMismatch,
    #[error("zero polynomial has no content valuation")]
    ZeroPolynomial,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("no assignment for generator {0}")]
    MissingAssignment(String),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("axiom violation: {0}")]
    AxiomViolation(String),
    #[error("inhomogeneous input: {0}")]
    InhomogeneousInput(String),
    #[error("element is not a cocycle")]
    NotACocycle,
    #[error("Massey bracket undefined: {0}")]
    BracketUndefined(String),
    #[error("source is not a cycle on this page: {0}")]
    NotAPageCycle(String),
    #[error("{name}: expansion is not 5-integral")]
    IntegralityFailure { name: String },
    #[error("{name}: expansion is not invariant")]
    InvarianceFailure { name: String },
    #[error("{name}: {detail}")]
    TableEntry { name: String, detail: String },
    #[error("discriminant normalization failed: {0}")]
    NormalizationFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io failure: {0}")]
    IoFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
