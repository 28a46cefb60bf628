use thiserror::Error;

/// Errors raised by group, function, transform and operator routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Vilenkin base: modulus m_{index} = {value} is below 2")]
    InvalidModulus { index: usize, value: usize },

    #[error("invalid Vilenkin base: {0}")]
    InvalidBase(String),

    #[error("level {level} out of range (maximum {max})")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("coordinate x_{index} = {value} is not below modulus {modulus}")]
    CoordinateOutOfRange {
        index: usize,
        value: usize,
        modulus: usize,
    },

    #[error("operands are defined over different Vilenkin bases")]
    BaseMismatch,

    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("exponent p must be positive, got {0}")]
    InvalidExponent(f64),

    #[error("operation requires a dyadic base (all moduli equal to 2)")]
    NonDyadic,

    #[error("index must be at least 1")]
    ZeroIndex,

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("zero Hardy norm: ratio undefined")]
    ZeroNorm,

    #[error("unknown verification suite `{0}` (expected kernels, identities, lemmas or atoms)")]
    UnknownSuite(String),

    #[error("{0} draws random data and needs an explicit seed")]
    MissingSeed(&'static str),

    #[error("resource guard: M_K = {size} exceeds the limit {limit}")]
    ResourceGuard { size: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
