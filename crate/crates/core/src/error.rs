use thiserror::Error;

/// Errors raised by estimation, simulation and testing routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("lag {lag} out of range for series of length {len}")]
    LagOutOfRange { lag: i64, len: usize },

    #[error("invalid regime specification: {0}")]
    InvalidSpec(String),

    #[error("block {block} is too short: {len} observations, need at least {need}")]
    BlockTooShort { block: usize, len: usize, need: usize },

    #[error("rank-deficient regressor matrix in block {block}")]
    RankDeficient { block: usize },

    #[error("degenerate weight/series: {0}")]
    DegenerateWeights(String),

    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io: {0}")]
    Io(String),
}

impl HarError {
    /// True for errors caused by the data rather than by the caller, e.g. a
    /// nonpositive variance estimate. The CLI maps these to exit code 1.
    pub fn is_statistical(&self) -> bool {
        matches!(
            self,
            HarError::DegenerateVariance(_)
                | HarError::DegenerateWeights(_)
                | HarError::RankDeficient { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, HarError>;
