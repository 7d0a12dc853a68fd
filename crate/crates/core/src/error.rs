use thiserror::Error;

/// Errors raised by solvers, builders and generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed solution: {0}")]
    MalformedSolution(String),
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("cutting-plane loop exceeded {0} cuts")]
    IterationLimit(usize),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("weights violate the triangle inequality at ({0}, {1}, {2})")]
    NotMetric(usize, usize, usize),
    #[error("fractional input is infeasible: {0}")]
    InfeasibleInput(String),
    #[error("required nodes {0} and {1} are disconnected")]
    Disconnected(usize, usize),
    #[error("only {found} of {needed} terminals are reachable from the root")]
    Unreachable { found: usize, needed: usize },
    #[error("only {found} of {needed} elements can be covered")]
    Uncoverable { found: usize, needed: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("bad target: {0}")]
    BadTarget(String),
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
