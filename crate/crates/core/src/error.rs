use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty center set")]
    EmptyCenterSet,

    #[error("empty input")]
    EmptyInput,

    #[error("dimension mismatch: expected dim={expected}, got dim={got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate at point {index}")]
    NonFinite { index: usize },

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("degenerate set: {0}")]
    Degenerate(String),

    #[error("oracle budget exceeded: {needed} candidates > {budget}")]
    OracleBudgetExceeded { needed: u128, budget: u128 },

    #[error("tail bound not applicable: r={r} < sqrt(5t)={threshold}")]
    TailBoundNotApplicable { r: f64, threshold: f64 },

    #[error("no nonzero pairs")]
    NoNonzeroPairs,

    #[error("map already scaled (scale={0})")]
    AlreadyScaled(f64),

    #[error("oracle returned invalid index {0}")]
    InvalidOracleIndex(usize),

    #[error("constraint infeasible")]
    ConstraintInfeasible,

    #[error("empty stream")]
    EmptyStream,

    #[error("budget exceeded at every guess")]
    AllLevelsFailed,

    #[error("deletion of a point that is not present: {0:?}")]
    PhantomDelete(Vec<u32>),

    #[error("coordinate {value} outside [1, {delta}]")]
    CoordinateOutOfRange { value: i64, delta: u32 },

    #[error("sampler decode failed at level {0}")]
    SamplerDecodeFailed(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
