use std::path::Path;

use thiserror::Error;

/// Errors of the command line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: rickart_core::Error,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<CliError>,
    },

    #[error("ring file {path}: {source}")]
    InRingFile {
        path: String,
        #[source]
        source: Box<CliError>,
    },

    #[error(transparent)]
    Core(#[from] rickart_core::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Line number of a syntax or validation error, looking through file
    /// context. Line 0 marks a missing required line.
    pub fn line(&self) -> Option<usize> {
        match self {
            CliError::Syntax { line, .. } | CliError::Invalid { line, .. } => Some(*line),
            CliError::InFile { source, .. } | CliError::InRingFile { source, .. } => source.line(),
            _ => None,
        }
    }

    pub(crate) fn in_file(self, path: &Path) -> CliError {
        match self {
            e @ (CliError::Io { .. } | CliError::InRingFile { .. }) => e,
            e => CliError::InFile {
                path: path.display().to_string(),
                source: Box::new(e),
            },
        }
    }
}
