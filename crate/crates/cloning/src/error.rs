use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid factor index {index} for {nfactors} factors")]
    InvalidFactor { index: usize, nfactors: usize },

    #[error("operator is not Hermitian (deviation {deviation:.3e} > tol {tol:.3e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("operator is not an isometry (deviation {deviation:.3e})")]
    NotIsometry { deviation: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("amplitude matrix not normalized (Frobenius norm {norm})")]
    AmplitudeNotNormalized { norm: f64 },

    #[error("empty eigenbasis")]
    EmptyBasis,

    #[error("feasibility residual {residual:.3e} falls in the verdict gap ({lo:.0e}, {hi:.0e})")]
    FeasibilityGap { residual: f64, lo: f64, hi: f64 },

    #[error("dimension {0} is below the minimum of 2")]
    DimensionTooSmall(usize),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("conjectured-eigenstate verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}
