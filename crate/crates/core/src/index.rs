//! In-memory citation index: directed "cites" links between DOIs.

use std::collections::{BTreeMap, BTreeSet};

use crate::doi::Doi;
use crate::publication::Publication;

static EMPTY: BTreeSet<Doi> = BTreeSet::new();

/// Both directions of every known link are stored, so `cites(a, b)` is
/// answered the same whether the link was learned from `a`'s reference list
/// or from `b`'s citation list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CitationIndex {
    outgoing: BTreeMap<Doi, BTreeSet<Doi>>,
    incoming: BTreeMap<Doi, BTreeSet<Doi>>,
}

impl CitationIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records that `from` cites `to`. Self links are ignored.
    pub fn add_link(&mut self, from: &Doi, to: &Doi) {
        if from == to {
            return;
        }
        self.outgoing.entry(from.clone()).or_default().insert(to.clone());
        self.incoming.entry(to.clone()).or_default().insert(from.clone());
    }

    /// Adds every link materialized on `publication`.
    pub fn add_publication(&mut self, publication: &Publication) {
        for to in &publication.citing {
            self.add_link(&publication.doi, to);
        }
        for from in &publication.cited_by {
            self.add_link(from, &publication.doi);
        }
    }

    pub fn from_publications<'a, I>(publications: I) -> Self
    where
        I: IntoIterator<Item = &'a Publication>,
    {
        let mut index = Self::new();
        for p in publications {
            index.add_publication(p);
        }
        index
    }

    pub fn from_links<'a, I>(links: I) -> Self
    where
        I: IntoIterator<Item = (&'a Doi, &'a Doi)>,
    {
        let mut index = Self::new();
        for (from, to) in links {
            index.add_link(from, to);
        }
        index
    }

    pub fn cites(&self, from: &Doi, to: &Doi) -> bool {
        self.outgoing.get(from).is_some_and(|s| s.contains(to))
    }

    /// DOIs referenced by `doi`.
    pub fn references(&self, doi: &Doi) -> &BTreeSet<Doi> {
        self.outgoing.get(doi).unwrap_or(&EMPTY)
    }

    /// DOIs citing `doi`.
    pub fn citations(&self, doi: &Doi) -> &BTreeSet<Doi> {
        self.incoming.get(doi).unwrap_or(&EMPTY)
    }

    pub fn link_count(&self) -> usize {
        self.outgoing.values().map(BTreeSet::len).sum()
    }

    /// All links in (from, to) order.
    pub fn links(&self) -> impl Iterator<Item = (&Doi, &Doi)> {
        self.outgoing
            .iter()
            .flat_map(|(from, tos)| tos.iter().map(move |to| (from, to)))
    }
}
