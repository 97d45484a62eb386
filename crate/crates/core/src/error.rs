use std::path::PathBuf;

use thiserror::Error;

use crate::model::Granularity;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("reference error in {entity}: {message}")]
    Reference { entity: String, message: String },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("merge conflict: {0}")]
    MergeConflict(String),

    #[error("dimension mismatch: matrix has {rows} test rows but {outcomes} outcomes were given")]
    DimensionMismatch { rows: usize, outcomes: usize },

    #[error("no {0} elements are declared in the spectra")]
    UnknownGranularity(Granularity),

    #[error("{0} level was never scored")]
    MissingGranularity(Granularity),

    #[error("unknown metric `{0}` (expected tarantula, ochiai, dstar[N] or wong2)")]
    UnknownMetric(String),

    #[error("at least one metric must be selected")]
    EmptyMetricList,

    #[error("ground truth `{0}` does not resolve to exactly one statement")]
    UnresolvedTruth(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn reference(entity: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Reference {
            entity: entity.into(),
            message: message.into(),
        }
    }
}
