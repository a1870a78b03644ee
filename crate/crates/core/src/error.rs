use thiserror::Error;

/// Errors raised by model validation, the distance functions and the
/// causality checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("not a path: {0}")]
    NotAPath(String),
    #[error("path is not maximal: {0}")]
    NotMaximal(String),
    #[error("words have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("transition system is not layered: {0}")]
    NotLayered(String),
    #[error("graph is not acyclic: {0}")]
    NotAcyclic(String),
    #[error("search budget of {0} node expansions exceeded")]
    BudgetExceeded(u64),
    #[error("the player has no winning strategy")]
    NoWinningStrategy,
    #[error("vertex `{0}` has no edge besides the strategy's choice")]
    EmptyChoice(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
