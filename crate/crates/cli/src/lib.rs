//! Scenario files, reports and the verification sweep behind the `fbelief` binary.

pub mod evaluate;
pub mod report;
pub mod scenario;
pub mod verify;

use scenario::ScenarioError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Scenario(#[from] ScenarioError),
    #[error("{context}: {source}")]
    Evaluation {
        context: String,
        #[source]
        source: fbelief_core::Error,
    },
    #[error(transparent)]
    Core(#[from] fbelief_core::Error),
    #[error("{0}")]
    Usage(String),
}
