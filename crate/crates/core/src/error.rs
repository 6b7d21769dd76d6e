use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The column-mapping schema does not match the data.
    #[error("schema error: {0}")]
    Schema(String),

    #[error("ingestion error: {0}")]
    Ingestion(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("radar chart needs at least 3 axes, got {0}")]
    InsufficientAxes(usize),

    #[error("degenerate geometry at sample {index}: {what}")]
    DegenerateGeometry { index: usize, what: String },

    #[error("configuration error: {0}")]
    Config(String),

    /// One of the inputs has no rank variance.
    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("simulation fault at step {step}: {what}")]
    SimulationFault { step: usize, what: String },

    #[error("scenario generation failed: {0}")]
    Generation(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad user input or configuration, as opposed
    /// to failures while generating or running something.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::SimulationFault { .. } | Error::Generation(_) | Error::UndefinedCorrelation(_)
        )
    }
}
