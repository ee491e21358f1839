use thiserror::Error;

/// Failures raised while evaluating indices or computing bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("mean of the sample is not positive")]
    NonPositiveMean,
    #[error("order statistic position {position} is out of range for n = {n}")]
    IndexOutOfRange { position: usize, n: usize },
    #[error("no point observations available")]
    NoPointData,
    #[error("constraint set is infeasible: {0}")]
    InfeasibleConstraints(String),
    #[error("denominator can reach {min_value} on the feasible set")]
    DegenerateDenominator { min_value: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("bisection bracket violates sign conditions: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    BracketViolation { f_lo: f64, f_hi: f64 },
    #[error("bisection stalled after {iterations} iterations")]
    Stalled { iterations: usize },
    #[error("cumulative share equals quantile level {tau} exactly")]
    QuantileOnBoundary { tau: f64 },
    #[error("subproblem did not converge: {0}")]
    SubproblemNotConverged(String),
    #[error("instance has {n} unknowns, oracle limit is {max_n}")]
    TooLarge { n: usize, max_n: usize },
    #[error("no candidate assignment satisfies the constraints")]
    NoFeasibleAssignment,
    #[error("resampling failed: {failures} of {attempts} attempts infeasible")]
    ResampleInfeasible { failures: usize, attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
