use thiserror::Error;

use crate::type_a::MembershipReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arrow {0} -> {0} is a loop")]
    LoopArrow(usize),

    #[error("arrows {0} -> {1} and {1} -> {0} form a 2-cycle")]
    TwoCycle(usize, usize),

    #[error("vertex label {label} is out of range for a quiver on {vertex_count} vertices")]
    BadVertexLabel { label: usize, vertex_count: usize },

    #[error("quiver is not in the mutation class of A_n: {0}")]
    NotInClass(Box<MembershipReport>),

    #[error("mutation class exceeds the limit of {limit} members")]
    ClassTooLarge { limit: usize },

    #[error("direct enumeration is limited to n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no quiver of type A_{n} has {t} 3-cycles (needs 2t + 1 <= n)")]
    InfeasibleSignature { n: usize, t: usize },

    #[error("vertex counts differ: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("signatures differ: (n={n1}, t={t1}) vs (n={n2}, t={t2})")]
    SignatureMismatch {
        n1: usize,
        t1: usize,
        n2: usize,
        t2: usize,
    },

    #[error("state budget of {budget} quivers exhausted")]
    StateBudgetExceeded { budget: usize },

    #[error("target quiver is not reachable by signature-preserving mutations")]
    NotReachable,

    #[error("path basis contains a path longer than {bound} arrows")]
    PathBoundExceeded { bound: usize },

    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("line {line}: {inner}")]
    AtLine { line: usize, inner: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;
