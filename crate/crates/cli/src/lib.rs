//! Benchmark runner and file-driven attainment analysis behind the `bench`
//! binary.

pub mod commands;
pub mod runner;
pub mod solvers;

use std::path::{Path, PathBuf};

use anytime::attainment::AttainmentError;
use anytime::logging::LogError;
use anytime::problems::ProblemError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Attainment(#[from] AttainmentError),
    #[error(transparent)]
    Log(#[from] LogError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_owned(),
            source,
        }
    }

    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
