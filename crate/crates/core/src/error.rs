use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("inverse temperature must be positive and finite")]
    InvalidBeta,
    #[error("{0}")]
    InvalidParameter(String),
    #[error("dimension too large: {dim} exceeds cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("not a composite state: {0}")]
    NotComposite(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("not a unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("not a thermal operation: commutator with the total Hamiltonian is {0:e}")]
    NotThermalOperation(f64),
    #[error("invalid stochastic map: {0}")]
    InvalidStochasticMap(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("kernel violates detailed balance (deviation {0:e})")]
    DetailedBalance(f64),
    #[error("enumeration too large: {size} exceeds cap {cap}")]
    CapExceeded { size: f64, cap: f64 },
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
