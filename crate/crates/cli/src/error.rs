use std::path::{Path, PathBuf};

use thiserror::Error;

/// Errors surfaced by the command-line tool, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("infeasible geometry: {0}")]
    Infeasible(leo_constellation::Error),

    #[error(transparent)]
    Model(leo_constellation::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parameter(_) | CliError::Model(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Infeasible(_) => 4,
        }
    }
}

impl From<leo_constellation::Error> for CliError {
    fn from(e: leo_constellation::Error) -> Self {
        use leo_constellation::Error as E;
        match e {
            E::CoverageAngleTooWide { .. } | E::DegenerateGeometry { .. } | E::InfeasibleCapacity => {
                CliError::Infeasible(e)
            }
            e => CliError::Model(e),
        }
    }
}
