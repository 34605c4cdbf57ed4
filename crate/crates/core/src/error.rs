use thiserror::Error;

/// Errors produced by chain construction and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("empty chain: at least one state is required")]
    Empty,

    #[error("entry ({row}, {col}) is not a finite nonnegative number: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("row {row} sums to {sum}, outside tolerance {tol} of 1")]
    RowSum { row: usize, sum: f64, tol: f64 },

    #[error("distribution sums to {sum}, outside tolerance {tol} of 1")]
    DistributionSum { sum: f64, tol: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("chain is reducible: state {state} cannot reach every other state")]
    Reducible { state: usize },

    #[error("stationary solve failed: residual {residual:e} exceeds tolerance {tol:e}")]
    SolverFailure { residual: f64, tol: f64 },

    #[error("chain is not reversible: detailed-balance residual {residual:e} exceeds {tol:e}")]
    NotReversible { residual: f64, tol: f64 },

    #[error("chain is not lazy: minimum diagonal entry {min_diagonal}")]
    NotLazy { min_diagonal: f64 },

    #[error("stationary distribution has a zero entry at state {state}")]
    ZeroStationaryMass { state: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("distance profile too short: d({t_max}) = {last} > {eps}; increase t_max")]
    ProfileTooShort { t_max: usize, last: f64, eps: f64 },

    #[error("search cap of {cap} steps exceeded before threshold was met")]
    CapExceeded { cap: usize },

    #[error("exhaustive subset search needs n <= {limit}, got n = {n}")]
    BruteForceLimit { n: usize, limit: usize },

    #[error("empty target set")]
    EmptySet,

    #[error("state {state} out of range for a chain with {n} states")]
    StateOutOfRange { state: usize, n: usize },

    #[error("unsupported chain size n = {n}: {reason}")]
    UnsupportedSize { n: usize, reason: &'static str },

    #[error("graph error: {0}")]
    Graph(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
