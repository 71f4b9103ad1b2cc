//! Offline source replaying a JSON fixture of the form
//! `{doi: {title, authors, orcids, year, venue, abstract, n_citing,
//! n_cited_by, citing: [...], cited_by: [...]}}`.
//!
//! An entry has metadata iff it has a `title`. Links are completed in both
//! directions, so listing a link on one side is enough. The provider counts
//! upstream calls and tracks peak concurrency for tests.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Duration;

use async_trait::async_trait;
use indexmap::IndexMap;
use litscope_core::{CitationCounts, Doi};
use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::error::SourceError;
use crate::source::{CitationSource, MetadataSource, WorkMetadata};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FixtureEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub authors: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub orcids: Vec<Option<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
    #[serde(rename = "abstract", skip_serializing_if = "Option::is_none")]
    pub abstract_text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_citing: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_cited_by: Option<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub citing: Vec<Doi>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cited_by: Vec<Doi>,
}

/// Fixture file contents, in file order.
pub type FixtureData = IndexMap<Doi, FixtureEntry>;

pub fn load_fixture(path: &Path) -> std::io::Result<FixtureData> {
    let bytes = std::fs::read(path)?;
    serde_json::from_slice(&bytes).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CallKind {
    Work,
    Query,
    References,
    Citations,
}

#[derive(Debug, Default)]
struct Counters {
    total: AtomicUsize,
    in_flight: AtomicUsize,
    max_in_flight: AtomicUsize,
    per_doi: Mutex<HashMap<(CallKind, Doi), usize>>,
    per_kind: Mutex<HashMap<CallKind, usize>>,
}

struct InFlight<'a>(&'a Counters);

impl<'a> InFlight<'a> {
    fn enter(counters: &'a Counters, kind: CallKind, doi: Option<&Doi>) -> Self {
        counters.total.fetch_add(1, Ordering::SeqCst);
        *counters.per_kind.lock().entry(kind).or_default() += 1;
        if let Some(doi) = doi {
            *counters.per_doi.lock().entry((kind, doi.clone())).or_default() += 1;
        }
        let now = counters.in_flight.fetch_add(1, Ordering::SeqCst) + 1;
        counters.max_in_flight.fetch_max(now, Ordering::SeqCst);
        InFlight(counters)
    }
}

impl Drop for InFlight<'_> {
    fn drop(&mut self) {
        self.0.in_flight.fetch_sub(1, Ordering::SeqCst);
    }
}

pub struct FixtureProvider {
    metadata: IndexMap<Doi, WorkMetadata>,
    outgoing: BTreeMap<Doi, BTreeSet<Doi>>,
    incoming: BTreeMap<Doi, BTreeSet<Doi>>,
    latency: Option<Duration>,
    offline: AtomicBool,
    failing_metadata: Mutex<HashSet<Doi>>,
    failing_citations: Mutex<HashSet<Doi>>,
    counters: Counters,
}

impl FixtureProvider {
    pub fn new(data: &FixtureData) -> Self {
        let mut outgoing: BTreeMap<Doi, BTreeSet<Doi>> = BTreeMap::new();
        let mut incoming: BTreeMap<Doi, BTreeSet<Doi>> = BTreeMap::new();
        let mut link = |from: &Doi, to: &Doi| {
            if from != to {
                outgoing.entry(from.clone()).or_default().insert(to.clone());
                incoming.entry(to.clone()).or_default().insert(from.clone());
            }
        };
        for (doi, entry) in data {
            for to in &entry.citing {
                link(doi, to);
            }
            for from in &entry.cited_by {
                link(from, doi);
            }
        }
        let metadata = data
            .iter()
            .filter_map(|(doi, e)| {
                let title = e.title.clone()?;
                let n_out = outgoing.get(doi).map_or(0, BTreeSet::len) as u32;
                let n_in = incoming.get(doi).map_or(0, BTreeSet::len) as u32;
                let meta = WorkMetadata {
                    title,
                    authors: e.authors.clone(),
                    orcids: e.orcids.clone(),
                    year: e.year,
                    venue: e.venue.clone(),
                    abstract_text: e.abstract_text.clone(),
                    counts: CitationCounts {
                        n_citing: e.n_citing.unwrap_or(0).max(n_out),
                        n_cited_by: e.n_cited_by.unwrap_or(0).max(n_in),
                    },
                };
                Some((doi.clone(), meta))
            })
            .collect();
        FixtureProvider {
            metadata,
            outgoing,
            incoming,
            latency: None,
            offline: AtomicBool::new(false),
            failing_metadata: Mutex::new(HashSet::new()),
            failing_citations: Mutex::new(HashSet::new()),
            counters: Counters::default(),
        }
    }

    pub fn from_path(path: &Path) -> std::io::Result<Self> {
        Ok(Self::new(&load_fixture(path)?))
    }

    /// Every call sleeps this long before answering.
    pub fn with_latency(mut self, latency: Duration) -> Self {
        self.latency = Some(latency);
        self
    }

    /// While offline, every call fails as unavailable.
    pub fn set_offline(&self, offline: bool) {
        self.offline.store(offline, Ordering::SeqCst);
    }

    pub fn fail_metadata_for(&self, doi: Doi) {
        self.failing_metadata.lock().insert(doi);
    }

    pub fn fail_citations_for(&self, doi: Doi) {
        self.failing_citations.lock().insert(doi);
    }

    pub fn total_calls(&self) -> usize {
        self.counters.total.load(Ordering::SeqCst)
    }

    pub fn calls_of(&self, kind: CallKind) -> usize {
        self.counters.per_kind.lock().get(&kind).copied().unwrap_or(0)
    }

    pub fn calls_for(&self, kind: CallKind, doi: &Doi) -> usize {
        self.counters.per_doi.lock().get(&(kind, doi.clone())).copied().unwrap_or(0)
    }

    /// Highest number of calls that were in progress at the same time.
    pub fn max_concurrency(&self) -> usize {
        self.counters.max_in_flight.load(Ordering::SeqCst)
    }

    pub fn known_dois(&self) -> impl Iterator<Item = &Doi> {
        self.metadata.keys()
    }

    async fn call(&self, kind: CallKind, doi: Option<&Doi>, failing: Option<&Mutex<HashSet<Doi>>>) -> Result<InFlight<'_>, SourceError> {
        let guard = InFlight::enter(&self.counters, kind, doi);
        if let Some(latency) = self.latency {
            tokio::time::sleep(latency).await;
        }
        let injected = match (doi, failing) {
            (Some(doi), Some(set)) => set.lock().contains(doi),
            _ => false,
        };
        if self.offline.load(Ordering::SeqCst) || injected {
            return Err(SourceError::Unavailable("fixture source offline".into()));
        }
        Ok(guard)
    }
}

#[async_trait]
impl MetadataSource for FixtureProvider {
    async fn work(&self, doi: &Doi) -> Result<WorkMetadata, SourceError> {
        let _guard = self.call(CallKind::Work, Some(doi), Some(&self.failing_metadata)).await?;
        self.metadata.get(doi).cloned().ok_or(SourceError::NotFound)
    }

    /// Titles containing the most query terms first, then file order.
    async fn query(&self, query: &str, rows: usize) -> Result<Vec<(Doi, WorkMetadata)>, SourceError> {
        let _guard = self.call(CallKind::Query, None, None).await?;
        let terms: Vec<String> = query.split_whitespace().map(str::to_lowercase).collect();
        let mut hits: Vec<(usize, &Doi, &WorkMetadata)> = self
            .metadata
            .iter()
            .filter_map(|(doi, m)| {
                let title = m.title.to_lowercase();
                let n = terms.iter().filter(|t| title.contains(t.as_str())).count();
                (n > 0).then_some((n, doi, m))
            })
            .collect();
        hits.sort_by_key(|h| std::cmp::Reverse(h.0));
        Ok(hits.into_iter().take(rows).map(|(_, d, m)| (d.clone(), m.clone())).collect())
    }
}

#[async_trait]
impl CitationSource for FixtureProvider {
    async fn references(&self, doi: &Doi) -> Result<Vec<Doi>, SourceError> {
        let _guard = self.call(CallKind::References, Some(doi), Some(&self.failing_citations)).await?;
        Ok(self.outgoing.get(doi).map(|s| s.iter().cloned().collect()).unwrap_or_default())
    }

    async fn citations(&self, doi: &Doi) -> Result<Vec<Doi>, SourceError> {
        let _guard = self.call(CallKind::Citations, Some(doi), Some(&self.failing_citations)).await?;
        Ok(self.incoming.get(doi).map(|s| s.iter().cloned().collect()).unwrap_or_default())
    }
}
