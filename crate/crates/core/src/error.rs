use thiserror::Error;

/// Errors raised by the algebraic and CR-geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("({family}, rank {rank}, n = {n}) is not a simple formally real Jordan algebra")]
    Classification {
        family: String,
        rank: usize,
        n: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("element is not invertible (relative determinant {measure:.3e})")]
    SingularElement { measure: f64 },

    #[error("numerical failure: {context} (residual {residual:.3e})")]
    NumericalFailure { context: String, residual: f64 },

    #[error("eigenvalue {value:.3e} lies in the borderline band ({lower:.1e}, {upper:.1e})")]
    BorderlineSpectrum { value: f64, lower: f64, upper: f64 },

    #[error("element is not idempotent (residual {residual:.3e})")]
    NotIdempotent { residual: f64 },

    #[error("invalid frame: {reason}")]
    InvalidFrame { reason: String },

    #[error("invalid signature ({p}, {q}) for rank {rank}: {reason}")]
    InvalidSignature {
        p: usize,
        q: usize,
        rank: usize,
        reason: String,
    },

    #[error("vector is not in the holomorphic tangent space (residual {residual:.3e})")]
    NotInHolomorphicTangent { residual: f64 },

    #[error("vector violates the Peirce block {block} (residual {residual:.3e})")]
    BlockViolation { block: String, residual: f64 },

    #[error("linear part leaves gl(Omega) (residual {residual:.3e})")]
    ClosureViolation { residual: f64 },

    #[error("base point violates lambda_j + lambda_k = 0 => lambda_j = lambda_k = 0 ({lambda_j}, {lambda_k})")]
    ConditionStarViolated { lambda_j: f64, lambda_k: f64 },

    #[error("invalid degree bound {bound} (must be at least 2)")]
    InvalidBound { bound: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("flow singular at t = {t} in coordinate {index}")]
    FlowSingularity { t: f64, index: usize },

    #[error("{operation} is not available for the {family} family")]
    UnsupportedFamily { family: String, operation: String },

    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },

    #[error("denominator cz + d is singular")]
    SingularDenominator,

    #[error("point is not in the Siegel upper half space: {reason}")]
    NotInSiegelSpace { reason: String },

    #[error("matrix is not in the boundary cone of positive semidefinite rank-deficient matrices: {reason}")]
    NotInLightCone { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
