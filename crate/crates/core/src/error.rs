use thiserror::Error;

/// Errors raised by the arithmetic, series, Witt and duality layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("field of order {0} is too large for table-driven arithmetic")]
    FieldTooLarge(u64),
    #[error("element is not a unit")]
    NonUnit,
    #[error("resultant of two constants is undefined")]
    EmptyInput,
    #[error("roots do not all lie in extensions of degree <= {0}")]
    ExtensionBoundExceeded(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("constant term is not a unit")]
    NonUnitConstantTerm,
    #[error("evaluation requires an exact polynomial, got a truncated series")]
    NotExact,
    #[error("coefficients must lie in the residue field (nilpotency index 1)")]
    NilpotentCoefficients,
    #[error("non-integral value: {0}")]
    NonIntegral(String),
    #[error("expected nilpotent entries: {0}")]
    NotNilpotent(String),
    #[error("result changed between truncation levels {0} and {1}")]
    UnstableTruncation(u32, u32),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("not a unit polynomial: {0}")]
    NotAUnit(String),
    #[error("invalid truncation bound {0} (need d >= 2)")]
    InvalidTruncation(u32),
    #[error("operation is not closed on the given set")]
    NotClosed,
    #[error("operation is not commutative on the given set")]
    NotAbelian,
    #[error("enumeration of {0} elements exceeds the limit {1}")]
    TooLarge(u128, u128),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "InvalidField",
            Error::FieldTooLarge(_) => "FieldTooLarge",
            Error::NonUnit => "NonUnit",
            Error::EmptyInput => "EmptyInput",
            Error::ExtensionBoundExceeded(_) => "ExtensionBoundExceeded",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NonUnitConstantTerm => "NonUnitConstantTerm",
            Error::NotExact => "NotExact",
            Error::NilpotentCoefficients => "NilpotentCoefficients",
            Error::NonIntegral(_) => "NonIntegral",
            Error::NotNilpotent(_) => "NotNilpotent",
            Error::UnstableTruncation(_, _) => "UnstableTruncation",
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::NotAUnit(_) => "NotAUnit",
            Error::InvalidTruncation(_) => "InvalidTruncation",
            Error::NotClosed => "NotClosed",
            Error::NotAbelian => "NotAbelian",
            Error::TooLarge(_, _) => "TooLarge",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
