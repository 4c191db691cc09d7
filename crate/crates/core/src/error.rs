use thiserror::Error;

/// Errors produced by the optimization toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("coordinate {index} is {value}, outside the unit interval")]
    OutsideUnitCube { index: usize, value: f64 },

    #[error("objective value {0} is not finite")]
    NonFiniteValue(f64),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("neighbor set is empty")]
    EmptyNeighborSet,

    #[error("requested {requested} items from a pool of {available}")]
    PoolTooSmall { requested: usize, available: usize },

    #[error("candidate pool lists have mismatched lengths")]
    RaggedPool,

    #[error("{what} has {left} entries but {right} were expected")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown method `{name}`; supported methods: {supported}")]
    UnknownMethod { name: String, supported: String },

    #[error("unknown function `{name}`; supported functions: {supported}")]
    UnknownFunction { name: String, supported: String },

    #[error("nothing to propose: the dataset is empty and the initialization queue is exhausted")]
    NothingToPropose,

    #[error("methods disagree on round count: `{method}` has {found}, expected {expected}")]
    RoundCountMismatch {
        method: String,
        expected: usize,
        found: usize,
    },

    #[error("rank scores need at least two methods, got {0}")]
    TooFewMethods(usize),

    #[error("malformed trace data at row {row}: {reason}")]
    MalformedTrace { row: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
