use thiserror::Error;

/// Errors produced by the numerical routines and the command-line front end.
#[derive(Debug, Error)]
pub enum CrxError {
    #[error("point {0} is not strictly inside the unit disk")]
    NotInDisk(String),
    #[error("duplicate points at indices {0} and {1} (distance below 1e-12)")]
    DuplicatePoint(usize, usize),
    #[error("{what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("separation constant {0:e} is below 1e-6; condition bounds overflow")]
    SeparationTooSmall(f64),
    #[error("Blaschke degree {degree} must be smaller than the model-space dimension {dim}")]
    DegreeTooLarge { degree: usize, dim: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("numerical range has empty interior")]
    DegenerateRange,
    #[error("domain boundary is not smooth and strictly convex (flat segment or corner); supply a map override")]
    FlatBoundary,
    #[error("map center {0} is not inside the domain")]
    CenterOutside(String),
    #[error("point {0} is too close to the boundary for reliable quadrature")]
    TooCloseToBoundary(String),
    #[error("spectrum is too close to the contour (margin {0:e})")]
    SpectrumTooCloseToBoundary(f64),
    #[error("spectrum is not contained in the interior of the numerical range (margin {0:e})")]
    SpectrumOnBoundary(f64),
    #[error("eigenvector matrix condition number {0:e} exceeds 1e8")]
    IllConditionedEigenbasis(f64),
    #[error("function vanishes on the boundary nodes")]
    ZeroFunction,
    #[error("spectral radius {0} of the mapped matrix is not below 1 - 1e-6")]
    SpectralRadiusTooLarge(f64),
    #[error("conformal map domain does not contain the spectrum")]
    MapDomainMismatch,
    #[error("factorization does not reproduce the extremal function")]
    FactorizationMismatch,
    #[error("conformal map iteration did not converge (residual {0:e})")]
    MapNonConvergence(f64),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CrxError {
    /// Process exit code used by the `crx` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            CrxError::Io(_) => 3,
            CrxError::SpectrumOnBoundary(_) | CrxError::SpectrumTooCloseToBoundary(_) => 4,
            CrxError::DegenerateRange
            | CrxError::FlatBoundary
            | CrxError::CenterOutside(_)
            | CrxError::MapDomainMismatch
            | CrxError::MapNonConvergence(_) => 5,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CrxError>;
