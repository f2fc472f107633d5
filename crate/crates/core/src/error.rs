use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("budget: {base}^{exponent} points exceed the limit of {limit}")]
    Budget { base: u64, exponent: u64, limit: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("missing unit table for stratum {stratum} at q = {q}")]
    MissingTable { stratum: String, q: u64 },
    #[error("missing character: {0}")]
    MissingCharacter(String),
    #[error("series prefix too short: need index {need}, have {have}")]
    ShortPrefix { need: usize, have: usize },
    #[error("invalid witness: {0}")]
    WitnessInvalid(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
