use thiserror::Error;

use crate::group::Element;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("sequences live over different groups ({left} vs {right})")]
    GroupMismatch { left: String, right: String },

    #[error("element {0} is not a member of the group")]
    InvalidElement(String),

    #[error("not a subsequence: {element} occurs {needed} times but only {available} available")]
    NotASubsequence {
        element: Element,
        needed: u32,
        available: u32,
    },

    #[error("search budget exceeded after {states} states (raise --budget)")]
    BudgetExceeded { states: u64 },

    #[error("enumeration infeasible: about {estimate:.3e} orbit representatives (ceiling {ceiling:.3e})")]
    InfeasibleSize { estimate: f64, ceiling: f64 },

    #[error("no extremal length found up to the length cap {cap}")]
    LengthCapExceeded { cap: usize },

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operation requires an abelian group, got {0}")]
    NonAbelian(String),

    #[error("group {0} is outside the C_(3n2) x|_s C_2 family with gcd(6,n2)=1, n2>1")]
    OutOfFamily(String),

    #[error("factorization n1={n1}, n2={n2} is not coprime")]
    NotCoprime { n1: u32, n2: u32 },

    #[error("claim violated: {0}")]
    ClaimViolation(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
