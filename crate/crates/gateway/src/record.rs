//! What the gateway stores per DOI and how it becomes a [`Publication`].

use std::collections::BTreeSet;

use litscope_core::{Doi, Publication};
use serde::{Deserialize, Serialize};

use crate::source::WorkMetadata;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFlags {
    /// The metadata source returned a record.
    pub metadata_ok: bool,
    /// Both link lists were retrieved from the citation source.
    pub citations_ok: bool,
    /// Link retrieval was skipped because the publication is cited too
    /// often; `citing` and `cited_by` are empty.
    pub citations_skipped_large: bool,
}

/// How much of a publication was requested from upstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FetchScope {
    /// Metadata only, as needed for suggestion lists and search.
    Metadata,
    /// Metadata and citation links, as needed for selected publications.
    Full,
}

impl FetchScope {
    /// Whether a record fetched with `self` can answer a `wanted` request.
    pub fn covers(self, wanted: FetchScope) -> bool {
        self == FetchScope::Full || wanted == FetchScope::Metadata
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRecord {
    pub doi: Doi,
    pub scope: FetchScope,
    pub metadata: Option<WorkMetadata>,
    pub citing: BTreeSet<Doi>,
    pub cited_by: BTreeSet<Doi>,
    /// Unix seconds.
    pub fetched_at: u64,
    pub flags: SourceFlags,
}

impl SourceRecord {
    /// Merged publication: metadata fields from the metadata source, link
    /// sets from the citation source. Repair is applied by the caller.
    pub fn to_publication(&self) -> Publication {
        let mut p = match &self.metadata {
            Some(m) => m.clone().into_publication(self.doi.clone()),
            None => Publication::stub(self.doi.clone()),
        };
        p.citing = self.citing.clone();
        p.cited_by = self.cited_by.clone();
        p.citing.remove(&self.doi);
        p.cited_by.remove(&self.doi);
        let reported = p.citation_counts_total.n_citing;
        p.references_known = match self.scope {
            FetchScope::Metadata => true,
            FetchScope::Full if self.flags.citations_ok => !(p.citing.is_empty() && reported > 0),
            FetchScope::Full if self.flags.citations_skipped_large => reported == 0,
            FetchScope::Full => false,
        };
        p.sanitize()
    }
}
