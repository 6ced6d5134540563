use reduce_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] Error),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    /// 2 for anything rejected before numerics start, 3 for numerical
    /// failures, 1 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::UnusablePair
                | Error::NonHermitian(_)
                | Error::Numerical(_)
                | Error::ScenarioInconsistency { .. }
                | Error::ComplexSpinCoupling(_)
                | Error::Boundary { .. } => 3,
                Error::DimensionMismatch(_)
                | Error::EmptyComplement
                | Error::UnknownGroup(_)
                | Error::UnknownScenario(_)
                | Error::UnknownRepresentation(_)
                | Error::UnknownTestFunction(_)
                | Error::UnsupportedConfig(_)
                | Error::InvalidArgument(_) => 2,
            },
        }
    }
}
