use thiserror::Error;

/// Errors raised by the simulator, the oracles and the outer-loop numerics.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:.3e} exceeds tolerance {tolerance:.3e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("operator is not unitary (max deviation {deviation:.3e} exceeds tolerance {tolerance:.3e})")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("state is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scheme {scheme} cannot be evaluated with the {method} method")]
    WrongMethod { scheme: String, method: String },

    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("Fock truncation too small: population {population:.3e} in level {level} exceeds tail tolerance {tolerance:.3e}")]
    Truncation { population: f64, level: usize, tolerance: f64 },

    #[error("engine mismatch: {0}")]
    EngineMismatch(String),

    #[error("bracketing failure: {0}")]
    Bracketing(String),

    #[error("eigendecomposition failed to converge (dim {0})")]
    Eigen(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
