use alloc::string::String;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("reduction rate must lie in [0, 1], got {0}")]
    BetaOutOfRange(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("expected {expected} entries in {what}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("transfer matrix must be square, row {row} has {len} entries for {dim} rows")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("transfer matrix diagonal entry {index} is {value}, expected 1")]
    BadDiagonal { index: usize, value: f64 },
    #[error("probe record has source == target ({0})")]
    SelfProbe(usize),
    #[error("probe record names task index {index} but the matrix has {dim} tasks")]
    ProbeIndexOutOfRange { index: usize, dim: usize },
    #[error("no usable probe records for pair {from_task} -> {to_task}")]
    IncompletePair { from_task: usize, to_task: usize },
    #[error("learning curve '{task}' needs at least 2 points, got {points}")]
    InsufficientData { task: String, points: usize },
    #[error("learning curve '{task}' must have strictly increasing label counts")]
    NonIncreasingCurve { task: String },
    #[error("task index {index} out of range for {tasks} tasks")]
    BadTaskIndex { index: usize, tasks: usize },
    #[error("invalid task set: {0}")]
    InvalidTaskSet(&'static str),
    #[error("dp instance too large: estimated {estimated} cell updates exceed limit {limit}")]
    DpTooLarge { estimated: u64, limit: u64 },
    #[error("baseline score is zero; relative gain is undefined")]
    DegenerateBaseline,
    #[error("cannot average an empty list of gains")]
    EmptyGains,
    #[error("counts spend {spent} budget units but only {budget} are available")]
    Infeasible { spent: u64, budget: u64 },
    #[error("invalid world: {0}")]
    InvalidWorld(&'static str),
    #[error("budget-split sweep requires exactly 2 tasks, got {0}")]
    SweepRequiresTwoTasks(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
