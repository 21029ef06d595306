use pitchmbc_core::{DataError, FitError, SelectionError, StabilityError};

use crate::archive::ArchiveError;
use crate::config::ConfigError;
use crate::ingest::IngestError;

/// Process exit codes.
pub mod exit {
    pub const IO: u8 = 3;
    pub const VALIDATION: u8 = 4;
    pub const FIT: u8 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("writing {path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Archive { path: String, source: ArchiveError },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Selection(#[from] SelectionError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Csv { .. } => exit::IO,
            CliError::Ingest(IngestError::Io(_)) => exit::IO,
            CliError::Ingest(IngestError::Csv(e)) if matches!(e.kind(), csv::ErrorKind::Io(_)) => exit::IO,
            CliError::Config(ConfigError::Io { .. }) => exit::IO,
            CliError::Archive { source: ArchiveError::Io(_), .. } => exit::IO,
            CliError::Ingest(_) | CliError::Data(_) | CliError::Config(_) | CliError::Archive { .. } | CliError::Invalid(_) => {
                exit::VALIDATION
            }
            CliError::Selection(
                SelectionError::InvalidRange { .. } | SelectionError::InvalidPenaltyScale | SelectionError::TooFewPoints { .. },
            ) => exit::VALIDATION,
            CliError::Stability(
                StabilityError::InvalidSplit(_) | StabilityError::NoReplications | StabilityError::TooFewPoints { .. },
            ) => exit::VALIDATION,
            CliError::Fit(FitError::InvalidConfig(_) | FitError::TooFewPoints { .. }) => exit::VALIDATION,
            CliError::Selection(_) | CliError::Fit(_) | CliError::Stability(_) => exit::FIT,
        }
    }
}
