use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The channel matrix is singular or its condition number exceeds the limit.
    #[error("ill-conditioned channel (condition number {condition:.3e} > {limit:.3e})")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("no rate supplied for group size {0}")]
    IncompleteRates(usize),

    #[error("network size {k} exceeds the limit of {max}")]
    SizeLimit { k: usize, max: usize },

    #[error("configuration error: {0}")]
    Config(String),
}
