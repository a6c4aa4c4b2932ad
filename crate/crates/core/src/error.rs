use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unexpected character {ch:?} at {line}:{column}")]
    UnexpectedChar { line: usize, column: usize, ch: char },
    #[error("proposition `{0}` is not declared")]
    UndeclaredProposition(String),
    #[error("at most {0} propositions are supported")]
    TooManyPropositions(usize),
    #[error("traces must be non-empty")]
    EmptyTrace,
    #[error("state budget of {0} states exceeded")]
    BudgetExceeded(usize),
    #[error("time limit exceeded")]
    Timeout,
    #[error("unknown state key")]
    UnknownState,
    #[error("strategy is undefined at state `{0}`")]
    UndefinedState(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("invalid strategy file, line {line}: {message}")]
    StrategyFormat { line: usize, message: String },
}

impl Error {
    /// Budget and time limits, as opposed to malformed input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_) | Error::Timeout)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
