use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INFEASIBLE: i32 = 2;
    pub const NUMERIC: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("no feasible partition under alpha_th = {0}")]
    Infeasible(f64),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] dmimo_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use dmimo_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => exit::USAGE,
            CliError::Infeasible(_) => exit::INFEASIBLE,
            CliError::Core(E::Config(_) | E::InvalidInput(_) | E::InvalidSize(_)) => exit::USAGE,
            CliError::Core(E::SizeLimit { .. } | E::IllConditioned { .. } | E::IncompleteRates(_)) => {
                exit::NUMERIC
            }
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
