//! Upstream source interfaces.

use async_trait::async_trait;
use litscope_core::{CitationCounts, Doi, Publication};
use serde::{Deserialize, Serialize};

use crate::error::SourceError;

/// Metadata as returned by the metadata source. Link sets are not part of
/// it; only the reported totals are.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkMetadata {
    pub title: String,
    pub authors: Vec<String>,
    pub orcids: Vec<Option<String>>,
    pub year: Option<i32>,
    pub venue: Option<String>,
    #[serde(rename = "abstract")]
    pub abstract_text: Option<String>,
    pub counts: CitationCounts,
}

impl WorkMetadata {
    pub fn into_publication(self, doi: Doi) -> Publication {
        let mut p = Publication::stub(doi);
        p.title = self.title;
        p.authors = self.authors;
        p.orcids = self.orcids;
        p.year = self.year;
        p.venue = self.venue;
        p.abstract_text = self.abstract_text;
        p.citation_counts_total = self.counts;
        p.sanitize()
    }
}

/// Crossref-style work lookup and bibliographic search.
#[async_trait]
pub trait MetadataSource: Send + Sync {
    async fn work(&self, doi: &Doi) -> Result<WorkMetadata, SourceError>;

    /// Up to `rows` hits in source order.
    async fn query(&self, query: &str, rows: usize) -> Result<Vec<(Doi, WorkMetadata)>, SourceError>;
}

/// OpenCitations-style link lookup. Unknown DOIs yield empty lists.
#[async_trait]
pub trait CitationSource: Send + Sync {
    /// DOIs that `doi` cites.
    async fn references(&self, doi: &Doi) -> Result<Vec<Doi>, SourceError>;

    /// DOIs that cite `doi`.
    async fn citations(&self, doi: &Doi) -> Result<Vec<Doi>, SourceError>;
}
