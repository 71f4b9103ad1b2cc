use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::doi::Doi;

/// Citation totals as reported by the data sources. These may exceed the
/// locally materialized link sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationCounts {
    pub n_citing: u32,
    pub n_cited_by: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Publication {
    pub doi: Doi,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default)]
    pub year: Option<i32>,
    #[serde(default)]
    pub venue: Option<String>,
    #[serde(default, rename = "abstract")]
    pub abstract_text: Option<String>,
    /// Parallel to `authors`.
    #[serde(default)]
    pub orcids: Vec<Option<String>>,
    /// Outgoing references.
    #[serde(default)]
    pub citing: BTreeSet<Doi>,
    /// Incoming citations.
    #[serde(default)]
    pub cited_by: BTreeSet<Doi>,
    #[serde(default)]
    pub citation_counts_total: CitationCounts,
    /// False when the outgoing references are missing from the source data.
    #[serde(default = "default_true")]
    pub references_known: bool,
}

fn default_true() -> bool {
    true
}

impl Publication {
    /// A publication known only by its DOI.
    pub fn stub(doi: Doi) -> Self {
        Publication {
            doi,
            title: String::new(),
            authors: Vec::new(),
            year: None,
            venue: None,
            abstract_text: None,
            orcids: Vec::new(),
            citing: BTreeSet::new(),
            cited_by: BTreeSet::new(),
            citation_counts_total: CitationCounts::default(),
            references_known: true,
        }
    }

    /// Restores the structural invariants: no self links, totals at least
    /// as large as the materialized link sets, one ORCID slot per author.
    pub fn sanitize(mut self) -> Self {
        self.citing.remove(&self.doi);
        self.cited_by.remove(&self.doi);
        let counts = &mut self.citation_counts_total;
        counts.n_citing = counts.n_citing.max(self.citing.len() as u32);
        counts.n_cited_by = counts.n_cited_by.max(self.cited_by.len() as u32);
        self.orcids.resize(self.authors.len(), None);
        self
    }

    pub fn orcid_of(&self, author_position: usize) -> Option<&str> {
        self.orcids.get(author_position).and_then(|o| o.as_deref())
    }

    pub fn has_title(&self) -> bool {
        !self.title.is_empty()
    }
}
