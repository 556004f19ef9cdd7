use thiserror::Error;

/// Errors raised by constructions and queries in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),

    /// An event that is not an element of the logic was passed to a query.
    #[error("event {0} is not a member of the logic")]
    NotAMember(String),

    /// A caller-side precondition (e.g. pairwise disjointness) does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A construction grew past its configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A probability table is not normalized in some context.
    #[error("context ({a}, {b}) sums to {sum}, expected 1")]
    Normalization { a: usize, b: usize, sum: String },

    /// A probability table has an entry outside [0, 1].
    #[error("entry {value} of context ({a}, {b}) lies outside [0, 1]")]
    Range { a: usize, b: usize, value: String },

    /// A probability table violates no-signaling between two contexts.
    #[error("signaling between contexts {first:?} and {second:?}: {detail}")]
    Signaling {
        first: (usize, usize),
        second: (usize, usize),
        detail: String,
    },

    /// A valuation is not a state on the logic.
    #[error("not a state: {0}")]
    NotAState(String),

    /// Something that the construction guarantees turned out false.
    #[error("internal invariant failed: {0}")]
    Invariant(String),

    #[error("{path}: {message}")]
    Spec { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
