use litscope_core::Doi;
use thiserror::Error;

use crate::record::SourceFlags;

/// Failure reported by a single upstream source.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceError {
    #[error("not found")]
    NotFound,
    #[error("source unavailable: {0}")]
    Unavailable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GatewayError {
    #[error("no source knows {0}")]
    NotFound(Doi),
    #[error("source unavailable: {0}")]
    SourceUnavailable(String),
    /// One of the two sources failed; the flags say which data is present.
    #[error("partial data for {doi}")]
    PartialData { doi: Doi, flags: SourceFlags },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
}
