use thiserror::Error;

/// Errors raised by the reduction pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subalgebra spans the whole algebra; complement is empty")]
    EmptyComplement,

    #[error("unknown group id `{0}`")]
    UnknownGroup(String),

    #[error("unknown scenario id `{0}`")]
    UnknownScenario(String),

    #[error("unknown or unsupported representation `{0}`")]
    UnknownRepresentation(String),

    #[error("unknown test function `{0}`")]
    UnknownTestFunction(String),

    #[error("point {x:?} is at or beyond the section boundary ({reason})")]
    Boundary { x: Vec<f64>, reason: String },

    #[error("unusable scenario/representation pair: dim V^K = 0")]
    UnusablePair,

    #[error("scenario inconsistency: [spin term, projector] residual {residual:e} exceeds {threshold:e}")]
    ScenarioInconsistency { residual: f64, threshold: f64 },

    #[error("spin coupling has a non-real part ({0:e}); complex couplings are not supported")]
    ComplexSpinCoupling(f64),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),

    #[error("matrix is not Hermitian: max asymmetry {0:e}")]
    NonHermitian(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
