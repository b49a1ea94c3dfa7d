use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid degree profile: {0}")]
    InvalidProfile(String),

    #[error("exponent sum {actual} does not match degree {expected}")]
    ExponentSum { expected: u32, actual: u32 },

    #[error("systems have different degree profiles")]
    ProfileMismatch,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid system file: {0}")]
    Parse(String),

    #[error("the zero system has no normalization")]
    ZeroSystem,

    #[error("the zero vector has no direction")]
    ZeroVector,

    #[error("restricted Jacobian is numerically singular")]
    SingularJacobian,

    #[error("geodesic endpoints are antipodal")]
    AntipodalEndpoints,

    #[error("continuation failed: {0}")]
    PathFailed(String),

    #[error("kernel is not one-dimensional")]
    DegenerateKernel,

    #[error("point is not a root (residual {residual:e})")]
    NotARoot { residual: f64 },

    #[error("no round succeeded within {rounds} rounds")]
    RoundsExceeded { rounds: usize },

    #[error("input carries no fractional entropy at precision {precision}")]
    EntropyExhausted { precision: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
