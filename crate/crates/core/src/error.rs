use thiserror::Error;

use crate::doi::Doi;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed DOI: {0:?}")]
    MalformedDoi(String),

    #[error("invalid filter: year_min {min} is greater than year_max {max}")]
    InvalidFilter { min: i32, max: i32 },

    #[error("no score entry for publication {0}")]
    MissingScore(Doi),

    #[error("no publication with a known year")]
    NoYearData,

    #[error("invalid session file: {0}")]
    InvalidSessionFile(String),

    #[error("session has staged changes; commit them before saving")]
    StagedChangesPending,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
