use thiserror::Error;

/// Errors surfaced by the library. Mathematical check failures are not errors;
/// they are reported as failing entries in a [`crate::report::AxiomReport`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown mode symbol `{0}`")]
    UnknownSymbol(String),
    #[error("no bracket rule for ({0}, {1})")]
    MissingBracket(String, String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid declaration: {0}")]
    Declaration(String),
    #[error("weight must be non-negative, got {0}")]
    NegativeWeight(i64),
    #[error("vector is not an eigenvector of the ghost number operator")]
    NotEigenvector,
    #[error("vector is not homogeneous")]
    NotHomogeneous,
    #[error("not a cochain complex: the differential squares to a nonzero map at weight {weight}, ghost number {ghost}")]
    NotACochainComplex { weight: i64, ghost: i64 },
    #[error("representative is not closed")]
    NotClosed,
    #[error("g(0)^2 does not vanish; the instance is not strong")]
    NotStrong,
    #[error("leading coefficient is not a unit")]
    NonUnitLeadingCoefficient,
    #[error("inconsistent truncation: {0}")]
    InconsistentTruncation(String),
    #[error("bound {value} exceeds the configured ceiling {ceiling} for {what}")]
    Ceiling {
        what: &'static str,
        value: i64,
        ceiling: i64,
    },
    #[error("cannot construct weight block: {0}")]
    ConstructionFailure(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
