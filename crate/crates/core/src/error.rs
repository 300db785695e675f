use thiserror::Error;

pub type Result<T> = std::result::Result<T, KneadError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KneadError {
    /// A parameter or state left [0, 1] by more than the rounding allowance.
    #[error("{what} = {value} lies outside [0, 1]")]
    Domain { what: &'static str, value: f64 },

    /// Requested preimage of a value above the critical value.
    #[error("no preimage: y = {y} exceeds the critical value mu = {mu}")]
    NoPreimage { y: f64, mu: f64 },

    #[error("invalid word {0:?}: {1}")]
    InvalidWord(String, &'static str),

    #[error("cannot shift a word of length 1")]
    ShiftTooShort,

    /// The first derivative vanished, so the Schwarzian is undefined.
    #[error("Schwarzian undefined: first derivative is zero")]
    Singular,

    #[error("bracket [{lo}, {hi}] does not enclose the target word")]
    BracketInvalid { lo: f64, hi: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("converged to mu = {mu} whose kneading word is {found}, expected {expected}")]
    WordMismatch {
        mu: f64,
        found: String,
        expected: String,
    },

    #[error("word {0} is not admissible")]
    Inadmissible(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
