use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("moduli space of genus {genus} with {points} points is unstable")]
    Unstable { genus: u32, points: usize },

    #[error("coefficient family has zero constant term and cannot be inverted")]
    NotInvertible,

    #[error("polynomial shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("polynomial is not exactly divisible by {0}")]
    NotDivisible(String),

    #[error("engine disagreement on {key}: stored {stored} ({stored_by}), computed {computed} ({computed_by})")]
    Disagreement {
        key: String,
        stored: String,
        stored_by: String,
        computed: String,
        computed_by: String,
    },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
