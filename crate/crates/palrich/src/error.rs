use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size must be at least {min}, got {got}")]
    AlphabetTooSmall { min: usize, got: usize },

    #[error("symbol {symbol} is out of range for alphabet size {alphabet_size}")]
    SymbolOutOfRange { symbol: u8, alphabet_size: usize },

    #[error("unknown character {ch:?} at position {position}")]
    UnknownCharacter { ch: char, position: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error("budget exceeded for {what}: requested {requested}, limit {limit} (override with {env_var})")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        limit: u128,
        env_var: &'static str,
    },

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
