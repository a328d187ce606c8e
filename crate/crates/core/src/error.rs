use std::fmt;

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The synthesis program has an empty feasible set.
    #[error("infeasible program: {0}")]
    Infeasible(Box<Infeasibility>),

    /// The plant numerator and denominator share a root.
    #[error("plant polynomials are not coprime (|det M| = {resultant:e})")]
    NotCoprime { resultant: f64 },

    /// A post-condition check on a computed result failed.
    #[error("verification failed: {0}")]
    Verification(String),

    /// A scan grid is empty or malformed.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A text document could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Diagnostics for an infeasible synthesis program.
#[derive(Debug, Clone)]
pub struct Infeasibility {
    /// Label of the constraint with the largest violation at the closest point found.
    pub constraint: String,
    /// Amount by which that constraint is violated.
    pub violation: f64,
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "most violated constraint `{}` (violation {:e})",
            self.constraint, self.violation
        )
    }
}
