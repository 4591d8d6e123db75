use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeckeError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid Hecke parameters: {0}")]
    InvalidFlavor(String),
    #[error("denominator vanishes at the residue point {0}")]
    PoleAtResidue(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("flavor mismatch")]
    FlavorMismatch,
    #[error("orbit mismatch")]
    OrbitMismatch,
    #[error("unknown suite `{0}`")]
    SuiteUnknown(String),
    #[error("rewriting fuel exhausted after {0} rule applications")]
    FuelExhausted(u64),
    #[error("dimension cap exceeded: {0}")]
    CapExceeded(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unexpected eigenvalue: {0}")]
    UnexpectedEigenvalue(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, HeckeError>;
