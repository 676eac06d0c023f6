use thiserror::Error;

/// Failures of the runner, each with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<planar_jets::Error> for CliError {
    fn from(e: planar_jets::Error) -> Self {
        use planar_jets::Error as E;
        match e {
            E::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            E::NonFinite(_) | E::FitRefused { .. } | E::NotComplexLinearOnComplexPart { .. } => {
                CliError::Numerical(e.to_string())
            }
            E::DimensionMismatch { .. } | E::DependentBasis { .. } | E::SelfIntersecting | E::InvalidInput(_) => {
                CliError::Config(e.to_string())
            }
        }
    }
}
