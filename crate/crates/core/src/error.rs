use thiserror::Error;

/// Errors raised by the library. Verdict-style outcomes (not covered,
/// inconclusive certification) are carried in report types instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at byte {position}: expected {expected}, found {found}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("index {0} is not a sum of positive-support exponents")]
    NotCoverable(u64),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no saddle point found: {0}")]
    SaddleNotFound(String),

    #[error("polynomial vanishes at the evaluation point")]
    Pole,

    #[error("phase set T is empty; polynomial is not primitive for this phase")]
    EmptyPhaseSet,

    #[error("strict inequality violated on the sampled region: {0}")]
    InequalityViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
