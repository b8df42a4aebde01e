use crate::scalar::ScalarError;

/// Errors surfaced by constructions and checks in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("negative polynomial degree {0}")]
    NegativeDegree(i64),
    #[error("division by the zero element")]
    ZeroDivisor,
    #[error("unknown catalog operator `{0}`")]
    UnknownOperator(String),
    #[error("label {0} is not constructible here")]
    BadLabel(String),
    #[error("Wronskian is not constant: {0}")]
    NonConstantWronskian(String),
    #[error("degenerate solution basis at energy {0}")]
    DegenerateBasis(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("inadmissible hypergeometric lower parameter {0}")]
    InadmissibleParameter(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
