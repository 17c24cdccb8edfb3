use thiserror::Error;

use crate::entropy::EntropyReport;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A level or denominator is not representable at the fiber depth.
    #[error("depth error: {0}")]
    Depth(String),

    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },

    #[error("lift is not degree-one equivariant: F(x+1) - F(x) - 1 = {defect:e} at x = {at}")]
    Equivariance { at: f64, defect: f64 },

    #[error("lift is not strictly increasing near x = {at}")]
    Monotonicity { at: f64 },

    #[error("backward iteration did not converge at {at}")]
    Inverse { at: f64 },

    #[error("atom weights sum to {sum}, expected 1")]
    Weight { sum: f64 },

    #[error("no ({p},{q})-periodic orbit found: min |g| = {min_residual:e}")]
    NotFound { p: i64, q: u32, min_residual: f64 },

    #[error("empirical measure has {atoms} atoms, fewer than the period {q}")]
    DegenerateMeasure { atoms: usize, q: i64 },

    /// The separated set reached the sample cap; carries the counts gathered so far.
    #[error("separated set reached the sample cap before stabilizing")]
    BudgetExceeded(Box<EntropyReport>),

    #[error("incoherent residues: {0}")]
    Incoherent(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Short machine-readable tag, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Depth(_) => "depth",
            Error::Syntax { .. } => "syntax",
            Error::Equivariance { .. } => "equivariance",
            Error::Monotonicity { .. } => "monotonicity",
            Error::Inverse { .. } => "inverse",
            Error::Weight { .. } => "weight",
            Error::NotFound { .. } => "not-found",
            Error::DegenerateMeasure { .. } => "degenerate-measure",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::Incoherent(_) => "incoherent",
            Error::GroupMismatch(_) => "group-mismatch",
            Error::Invalid(_) => "invalid",
        }
    }
}
