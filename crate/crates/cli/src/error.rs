use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Chain(#[from] chainmix::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: chainmix::Error,
    },
}

impl CliError {
    /// 2 for bad input or parameters, 3 when a valid computation could not
    /// be completed.
    pub fn exit_code(&self) -> u8 {
        use chainmix::Error as E;
        match self {
            CliError::Usage(_) | CliError::Input { .. } => 2,
            CliError::Io { .. } => 2,
            CliError::Chain(e) => match e {
                E::Reducible { .. }
                | E::SolverFailure { .. }
                | E::ProfileTooShort { .. }
                | E::CapExceeded { .. }
                | E::BruteForceLimit { .. }
                | E::ZeroStationaryMass { .. } => 3,
                _ => 2,
            },
        }
    }
}
