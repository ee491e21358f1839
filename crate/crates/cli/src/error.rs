use ineqbounds::error::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: String, message: String },
    #[error("brackets overlap at line {line}: upper {upper} exceeds next lower {lower}")]
    Overlap { line: usize, upper: f64, lower: f64 },
    #[error("negative count at line {line}")]
    NegativeCount { line: usize },
    #[error("unknown constraint kind {0:?}")]
    UnknownKind(String),
    #[error("constraint group index {index} is outside 1..={groups}")]
    BadGroupIndex { index: usize, groups: usize },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("module and oracle disagree by {gap:e}")]
    OracleDisagreement { gap: f64 },
}

impl CliError {
    /// 1 parse or config, 2 infeasible, 3 numerical failure, 4 oracle disagreement.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::InfeasibleConstraints(_)
                | CoreError::NoFeasibleAssignment
                | CoreError::ResampleInfeasible { .. }
                | CoreError::DegenerateDenominator { .. } => 2,
                CoreError::NumericalFailure(_)
                | CoreError::BracketViolation { .. }
                | CoreError::Stalled { .. }
                | CoreError::SubproblemNotConverged(_) => 3,
                _ => 1,
            },
            CliError::OracleDisagreement { .. } => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
