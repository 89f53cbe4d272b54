use thiserror::Error;

/// Errors raised by tree construction, the half-line solver, and the bound
/// evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integral of 1/g diverges beyond t = {0}")]
    DivergentTail(f64),

    #[error("no global dimension: {0}")]
    NoGlobalDimension(String),

    #[error("counting at threshold 0 needs a compactly supported potential; use a shift")]
    RequiresShift,

    #[error("ODE integration failed at t = {position}: {reason}")]
    Integration { position: f64, reason: String },

    #[error("solver did not terminate: {0}")]
    NonTermination(String),

    #[error("discretization too large: {0} unknowns")]
    TooLarge(usize),

    #[error("parameters outside every admissible region: {0}")]
    OutOfRegion(String),

    #[error("expression parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T, E = SpectralError> = std::result::Result<T, E>;
