use thiserror::Error;

/// Process exit status for a finished command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The model has no feasible equilibrium at these parameters.
    Infeasible,
    /// Input, I/O or numerical failure, or an oracle hard failure.
    Failed,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Infeasible => 2,
            Status::Failed => 1,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Model(#[from] stablegov_core::Error),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Infeasible(_) => Status::Infeasible,
            CliError::Model(e) if e.is_infeasible() => Status::Infeasible,
            _ => Status::Failed,
        }
    }
}
