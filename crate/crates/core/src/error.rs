//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An evaluation point fell outside the closed unit cube.
    #[error("point {0:?} lies outside [0,1]^d")]
    OutsideDomain(Vec<f64>),

    /// Two objects were combined whose dimensions disagree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: u32, got: u32 },

    /// The requested cell count does not admit an equidistant box grid.
    #[error("cell count {k} is not admissible in dimension {dim}: k^(1/d) must be an integer")]
    InadmissibleCellCount { k: u64, dim: u32 },

    /// A boundary description violates its constraints.
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),

    /// A run configuration is unusable.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Every weight vanished at the evaluation point.
    #[error("degenerate weights: all kappa_r(x) are zero at the evaluation point")]
    DegenerateWeights,

    /// The sample cannot support the requested estimate.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// Externally supplied data failed validation.
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;
