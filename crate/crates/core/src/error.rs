use thiserror::Error;

/// Everything that can go wrong inside the engine.
///
/// Resource errors are kept apart from structural and consistency errors:
/// the report layer turns the former into "unknown" cells and treats the
/// latter as hard failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("{what} budget exceeded: limit {limit}, reached {reached}")]
    Budget {
        what: &'static str,
        limit: u64,
        reached: u64,
    },

    #[error("unsupported group order {0}")]
    UnsupportedOrder(usize),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("lookup failed: {0}")]
    Lookup(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Budget exhaustion, as opposed to a bug or bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }

    /// Errors that signal a violated theorem or engine invariant.
    pub fn is_hard(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
