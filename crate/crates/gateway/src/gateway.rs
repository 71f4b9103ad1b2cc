//! The gateway: merges both sources per DOI, applies repair, caches, bounds
//! upstream parallelism and coalesces concurrent requests for the same DOI.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use chrono::Datelike;
use futures::future::{join_all, BoxFuture, Shared};
use futures::FutureExt;
use litscope_core::{Doi, Publication};
use parking_lot::Mutex;
use serde::Serialize;
use tokio::sync::Semaphore;
use tokio::task::JoinHandle;

use crate::cache::RecordCache;
use crate::error::{GatewayError, SourceError};
use crate::record::{FetchScope, SourceFlags, SourceRecord};
use crate::repair::repair_metadata;
use crate::source::{CitationSource, MetadataSource, WorkMetadata};

pub const DEFAULT_PARALLELISM: usize = 4;
pub const LARGE_CITATION_THRESHOLD: u32 = 1000;
pub const METADATA_WINDOW: usize = 50;
pub const SEARCH_ROWS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GatewayConfig {
    /// Upper bound on concurrent upstream requests.
    pub parallelism: usize,
    /// Publications cited at least this often get no link retrieval.
    pub large_citation_threshold: u32,
    pub search_rows: usize,
    /// Upper end of plausible years when guessing from DOIs.
    pub current_year: i32,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        GatewayConfig {
            parallelism: DEFAULT_PARALLELISM,
            large_citation_threshold: LARGE_CITATION_THRESHOLD,
            search_rows: SEARCH_ROWS,
            current_year: chrono::Utc::now().year(),
        }
    }
}

/// A merged, repaired publication and where its data came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fetched {
    pub publication: Publication,
    pub flags: SourceFlags,
    /// Served from an expired cache entry because upstream failed.
    pub stale: bool,
}

impl Fetched {
    /// One of the requested sources failed.
    pub fn is_partial(&self, scope: FetchScope) -> bool {
        let links_missing = scope == FetchScope::Full && !self.flags.citations_ok && !self.flags.citations_skipped_large;
        !self.flags.metadata_ok && !self.stale || links_missing
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchItem {
    pub doi: Doi,
    pub result: Result<Fetched, GatewayError>,
}

/// A window `[offset, offset + limit)` into a ranked candidate list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BatchCursor {
    pub offset: usize,
    pub limit: usize,
}

impl BatchCursor {
    pub fn first() -> Self {
        BatchCursor { offset: 0, limit: METADATA_WINDOW }
    }

    pub fn next(self) -> Self {
        BatchCursor { offset: self.offset + self.limit, limit: self.limit }
    }

    pub fn end(self) -> usize {
        self.offset + self.limit
    }
}

type SharedFetch = Shared<BoxFuture<'static, Result<Fetched, GatewayError>>>;

struct Inner {
    metadata: Arc<dyn MetadataSource>,
    citations: Arc<dyn CitationSource>,
    cache: RecordCache,
    permits: Semaphore,
    in_flight: Mutex<HashMap<(Doi, FetchScope), SharedFetch>>,
    config: GatewayConfig,
}

/// Cheap to clone; clones share sources, cache and limits.
#[derive(Clone)]
pub struct Gateway {
    inner: Arc<Inner>,
}

enum Links {
    Fetched(BTreeSet<Doi>, BTreeSet<Doi>),
    SkippedLarge,
    Failed(String),
    NotRequested,
}

impl Gateway {
    pub fn new(
        metadata: Arc<dyn MetadataSource>,
        citations: Arc<dyn CitationSource>,
        cache: RecordCache,
        config: GatewayConfig,
    ) -> Self {
        Gateway {
            inner: Arc::new(Inner {
                metadata,
                citations,
                cache,
                permits: Semaphore::new(config.parallelism.max(1)),
                in_flight: Mutex::new(HashMap::new()),
                config,
            }),
        }
    }

    /// Both roles served by one provider, as with fixtures.
    pub fn with_provider<P>(provider: Arc<P>, cache: RecordCache, config: GatewayConfig) -> Self
    where
        P: MetadataSource + CitationSource + 'static,
    {
        Self::new(provider.clone(), provider, cache, config)
    }

    pub fn config(&self) -> &GatewayConfig {
        &self.inner.config
    }

    pub fn cache(&self) -> &RecordCache {
        &self.inner.cache
    }

    /// Metadata plus citation links. Link retrieval is skipped for
    /// publications cited at least the configured threshold.
    pub async fn fetch_publication(&self, doi: &Doi) -> Result<Fetched, GatewayError> {
        self.fetch(doi, FetchScope::Full).await
    }

    /// Metadata only; link sets stay empty.
    pub async fn fetch_metadata(&self, doi: &Doi) -> Result<Fetched, GatewayError> {
        self.fetch(doi, FetchScope::Metadata).await
    }

    /// Served from a fresh cache entry when possible. Concurrent calls for
    /// the same DOI share one upstream request; a metadata request joins a
    /// running full request.
    pub async fn fetch(&self, doi: &Doi, scope: FetchScope) -> Result<Fetched, GatewayError> {
        if let Some(lookup) = self.inner.cache.get(doi) {
            if lookup.fresh && lookup.record.scope.covers(scope) {
                return self.inner.fetched_from_record(&lookup.record, false);
            }
        }
        let shared = {
            let mut in_flight = self.inner.in_flight.lock();
            let running = [FetchScope::Full, scope]
                .into_iter()
                .filter(|s| s.covers(scope))
                .find_map(|s| in_flight.get(&(doi.clone(), s)).cloned());
            match running {
                Some(shared) => shared,
                None => {
                    let inner = Arc::clone(&self.inner);
                    let key = (doi.clone(), scope);
                    let owned = doi.clone();
                    let fut = async move {
                        let result = inner.fetch_upstream(&owned, scope).await;
                        inner.in_flight.lock().remove(&(owned, scope));
                        result
                    }
                    .boxed()
                    .shared();
                    in_flight.insert(key, fut.clone());
                    fut
                }
            }
        };
        shared.await
    }

    /// Top hits of the metadata source in source order, repaired. No links
    /// are fetched.
    pub async fn search(&self, query: &str) -> Result<Vec<Publication>, GatewayError> {
        let query = query.trim();
        if query.is_empty() {
            return Err(GatewayError::InvalidQuery("empty query".into()));
        }
        let rows = self.inner.config.search_rows;
        let hits = {
            let _permit = self.inner.permit().await;
            self.inner.metadata.query(query, rows).await
        };
        let hits = match hits {
            Ok(hits) => hits,
            Err(SourceError::NotFound) => Vec::new(),
            Err(SourceError::Unavailable(e)) => return Err(GatewayError::SourceUnavailable(e)),
        };
        let now = self.inner.cache.now();
        Ok(hits
            .into_iter()
            .take(rows)
            .map(|(doi, metadata)| {
                let record = SourceRecord {
                    doi: doi.clone(),
                    scope: FetchScope::Metadata,
                    metadata: Some(metadata),
                    citing: BTreeSet::new(),
                    cited_by: BTreeSet::new(),
                    fetched_at: now,
                    flags: SourceFlags { metadata_ok: true, ..Default::default() },
                };
                let publication = self.inner.repair(record.to_publication());
                let already_full = self.inner.cache.get(&doi).is_some_and(|l| l.fresh);
                if !already_full {
                    self.inner.cache.put(record);
                }
                publication
            })
            .collect())
    }

    /// Metadata for `ranked[offset..offset + limit]`, in order. Failed items
    /// are reported individually; the batch itself never fails.
    pub async fn load_suggestion_metadata(&self, ranked: &[Doi], offset: usize, limit: usize) -> Vec<BatchItem> {
        let window: Vec<&Doi> = ranked.iter().skip(offset).take(limit).collect();
        let results = join_all(window.iter().map(|doi| self.fetch(doi, FetchScope::Metadata))).await;
        window
            .into_iter()
            .zip(results)
            .map(|(doi, result)| {
                let result = match result {
                    Err(GatewayError::SourceUnavailable(_)) => Err(GatewayError::PartialData {
                        doi: doi.clone(),
                        flags: SourceFlags::default(),
                    }),
                    other => other,
                };
                BatchItem { doi: doi.clone(), result }
            })
            .collect()
    }

    /// Warms the cache with the window at `cursor` in the background.
    /// Returns `None` when the window is empty.
    pub fn prefetch_next(&self, ranked: Arc<[Doi]>, cursor: BatchCursor) -> Option<JoinHandle<()>> {
        if cursor.offset >= ranked.len() || cursor.limit == 0 {
            return None;
        }
        let gateway = self.clone();
        Some(tokio::spawn(async move {
            let items = gateway.load_suggestion_metadata(&ranked, cursor.offset, cursor.limit).await;
            let failed = items
                .iter()
                .filter(|i| matches!(i.result, Err(GatewayError::PartialData { .. })))
                .count();
            if failed > 0 {
                tracing::warn!(offset = cursor.offset, failed, "prefetch could not load some candidates");
            } else {
                tracing::debug!(offset = cursor.offset, loaded = items.len(), "prefetch done");
            }
        }))
    }
}

impl Inner {
    async fn permit(&self) -> tokio::sync::SemaphorePermit<'_> {
        self.permits.acquire().await.expect("semaphore is never closed")
    }

    fn repair(&self, publication: Publication) -> Publication {
        repair_metadata(publication, self.config.current_year)
    }

    fn fetched_from_record(&self, record: &SourceRecord, stale: bool) -> Result<Fetched, GatewayError> {
        if record.metadata.is_none() && record.citing.is_empty() && record.cited_by.is_empty() {
            return Err(GatewayError::NotFound(record.doi.clone()));
        }
        Ok(Fetched {
            publication: self.repair(record.to_publication()),
            flags: record.flags,
            stale,
        })
    }

    async fn work(&self, doi: &Doi) -> Result<WorkMetadata, SourceError> {
        let _permit = self.permit().await;
        self.metadata.work(doi).await
    }

    async fn links(&self, doi: &Doi) -> Links {
        let references = async {
            let _permit = self.permit().await;
            self.citations.references(doi).await
        };
        let citations = async {
            let _permit = self.permit().await;
            self.citations.citations(doi).await
        };
        match tokio::join!(references, citations) {
            (Ok(out), Ok(inc)) => Links::Fetched(out.into_iter().collect(), inc.into_iter().collect()),
            (Err(SourceError::Unavailable(e)), _) | (_, Err(SourceError::Unavailable(e))) => Links::Failed(e),
            (r, c) => Links::Fetched(
                r.unwrap_or_default().into_iter().collect(),
                c.unwrap_or_default().into_iter().collect(),
            ),
        }
    }

    async fn fetch_upstream(&self, doi: &Doi, scope: FetchScope) -> Result<Fetched, GatewayError> {
        let metadata = self.work(doi).await;
        let threshold = self.config.large_citation_threshold;
        let links = match (&metadata, scope) {
            (_, FetchScope::Metadata) => Links::NotRequested,
            (Ok(m), FetchScope::Full) if m.counts.n_cited_by >= threshold => Links::SkippedLarge,
            _ => match self.links(doi).await {
                Links::Fetched(_, inc) if inc.len() >= threshold as usize => Links::SkippedLarge,
                other => other,
            },
        };

        let metadata_failure = match &metadata {
            Err(SourceError::Unavailable(e)) => Some(e.clone()),
            _ => None,
        };
        let link_failure = match &links {
            Links::Failed(e) => Some(e.clone()),
            _ => None,
        };
        let all_failed = metadata_failure.is_some() && (scope == FetchScope::Metadata || link_failure.is_some());
        if all_failed {
            if let Some(stale) = self.cache.get(doi).filter(|l| l.record.scope.covers(scope)) {
                tracing::warn!(%doi, "upstream unavailable, serving expired cache entry");
                return self.fetched_from_record(&stale.record, true);
            }
            let reason = metadata_failure.or(link_failure).unwrap_or_default();
            return Err(GatewayError::SourceUnavailable(reason));
        }

        let flags = SourceFlags {
            metadata_ok: metadata.is_ok(),
            citations_ok: matches!(links, Links::Fetched(..)),
            citations_skipped_large: matches!(links, Links::SkippedLarge),
        };
        let (citing, cited_by) = match links {
            Links::Fetched(out, inc) => (out, inc),
            _ => Default::default(),
        };
        let record = SourceRecord {
            doi: doi.clone(),
            scope,
            metadata: metadata.ok(),
            citing,
            cited_by,
            fetched_at: self.cache.now(),
            flags,
        };
        match (metadata_failure.is_some(), link_failure.is_some()) {
            (false, false) => self.cache.put(record.clone()),
            // The metadata part is still definitive and worth keeping.
            (false, true) => self.cache.put(SourceRecord {
                scope: FetchScope::Metadata,
                citing: BTreeSet::new(),
                cited_by: BTreeSet::new(),
                flags: SourceFlags { metadata_ok: flags.metadata_ok, ..Default::default() },
                ..record.clone()
            }),
            _ => {}
        }
        self.fetched_from_record(&record, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cache::{CacheConfig, ManualClock, DEFAULT_TTL};
    use crate::fixture::{CallKind, FixtureData, FixtureProvider};
    use std::time::Duration;

    fn doi(s: &str) -> Doi {
        Doi::parse(&format!("10.1/{s}")).unwrap()
    }

    fn data() -> FixtureData {
        serde_json::from_str(
            r#"{
                "10.1/a": {"title": "ALPHA STUDIES", "authors": ["Ann Lee"], "year": 2020, "venue": "J",
                           "citing": ["10.1/b", "10.1/c"], "cited_by": ["10.1/d"]},
                "10.1/b": {"title": "Beta", "n_cited_by": 1500, "citing": ["10.1/c"]},
                "10.1/c": {"cited_by": ["10.1/d"]},
                "10.1/d": {"title": "Delta &amp; Gamma"}
            }"#,
        )
        .unwrap()
    }

    fn gateway(provider: &Arc<FixtureProvider>) -> Gateway {
        let config = GatewayConfig { current_year: 2024, ..Default::default() };
        Gateway::with_provider(provider.clone(), RecordCache::in_memory(), config)
    }

    #[tokio::test]
    async fn merges_both_sources() {
        let provider = Arc::new(FixtureProvider::new(&data()));
        let fetched = gateway(&provider).fetch_publication(&doi("a")).await.unwrap();
        let p = &fetched.publication;
        assert_eq!(p.title, "Alpha Studies");
        assert_eq!(p.authors, ["Ann Lee"]);
        assert_eq!(p.citing, [doi("b"), doi("c")].into());
        assert_eq!(p.cited_by, [doi("d")].into());
        assert_eq!(p.citation_counts_total.n_citing, 2);
        assert!(fetched.flags.metadata_ok && fetched.flags.citations_ok);
        assert!(!fetched.is_partial(FetchScope::Full));
    }

    #[tokio::test]
    async fn heavily_cited_skips_links() {
        let provider = Arc::new(FixtureProvider::new(&data()));
        let fetched = gateway(&provider).fetch_publication(&doi("b")).await.unwrap();
        assert!(fetched.flags.citations_skipped_large);
        assert!(fetched.publication.citing.is_empty() && fetched.publication.cited_by.is_empty());
        assert_eq!(fetched.publication.citation_counts_total.n_cited_by, 1500);
        assert_eq!(provider.calls_of(CallKind::References) + provider.calls_of(CallKind::Citations), 0);
    }

    #[tokio::test]
    async fn unknown_and_link_only_dois() {
        let provider = Arc::new(FixtureProvider::new(&data()));
        let gw = gateway(&provider);
        assert_eq!(gw.fetch_publication(&doi("zzz")).await, Err(GatewayError::NotFound(doi("zzz"))));
        let c = gw.fetch_publication(&doi("c")).await.unwrap();
        assert!(!c.flags.metadata_ok);
        assert_eq!(c.publication.cited_by, [doi("a"), doi("b"), doi("d")].into());
        assert_eq!(gw.fetch_metadata(&doi("c")).await.unwrap().publication.title, "");
    }

    #[tokio::test]
    async fn not_found_is_cached() {
        let provider = Arc::new(FixtureProvider::new(&data()));
        let gw = gateway(&provider);
        for _ in 0..3 {
            assert!(matches!(gw.fetch_metadata(&doi("zzz")).await, Err(GatewayError::NotFound(_))));
        }
        assert_eq!(provider.calls_for(CallKind::Work, &doi("zzz")), 1);
    }

    #[tokio::test]
    async fn one_failed_source_is_partial() {
        let provider = Arc::new(FixtureProvider::new(&data()));
        provider.fail_citations_for(doi("a"));
        let gw = gateway(&provider);
        let fetched = gw.fetch_publication(&doi("a")).await.unwrap();
        assert!(fetched.is_partial(FetchScope::Full));
        assert!(fetched.flags.metadata_ok && !fetched.flags.citations_ok);
        assert!(!fetched.publication.references_known);
        // The metadata part was cached, the full record was not.
        gw.fetch_metadata(&doi("a")).await.unwrap();
        assert_eq!(provider.calls_for(CallKind::Work, &doi("a")), 1);
        gw.fetch_publication(&doi("a")).await.unwrap();
        assert_eq!(provider.calls_for(CallKind::Work, &doi("a")), 2);
    }

    #[tokio::test]
    async fn stale_entries_served_only_on_failure() {
        let provider = Arc::new(FixtureProvider::new(&data()));
        let clock = Arc::new(ManualClock::new(0));
        let cache = RecordCache::new(CacheConfig::default(), clock.clone());
        let gw = Gateway::with_provider(provider.clone(), cache, GatewayConfig { current_year: 2024, ..Default::default() });
        let first = gw.fetch_publication(&doi("a")).await.unwrap();
        clock.advance(DEFAULT_TTL + Duration::from_secs(1));
        provider.set_offline(true);
        let stale = gw.fetch_publication(&doi("a")).await.unwrap();
        assert!(stale.stale);
        assert_eq!(stale.publication, first.publication);
        assert!(matches!(gw.fetch_publication(&doi("d")).await, Err(GatewayError::SourceUnavailable(_))));
        provider.set_offline(false);
        assert!(!gw.fetch_publication(&doi("a")).await.unwrap().stale);
    }

    #[tokio::test]
    async fn concurrent_fetches_coalesce() {
        let provider = Arc::new(FixtureProvider::new(&data()).with_latency(Duration::from_millis(20)));
        let gw = gateway(&provider);
        let target = doi("a");
        let results = join_all((0..10).map(|_| gw.fetch_publication(&target))).await;
        assert!(results.iter().all(|r| r.as_ref().unwrap() == results[0].as_ref().unwrap()));
        assert_eq!(provider.calls_for(CallKind::Work, &doi("a")), 1);
        assert_eq!(provider.calls_for(CallKind::References, &doi("a")), 1);
    }

    #[tokio::test]
    async fn search_rules() {
        let provider = Arc::new(FixtureProvider::new(&data()));
        let gw = gateway(&provider);
        assert!(matches!(gw.search("  ").await, Err(GatewayError::InvalidQuery(_))));
        let hits = gw.search("delta").await.unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].title, "Delta & Gamma");
        assert_eq!(provider.calls_of(CallKind::References), 0);
    }

    #[tokio::test]
    async fn batch_window_and_prefetch() {
        let provider = Arc::new(FixtureProvider::new(&data()));
        provider.fail_metadata_for(doi("d"));
        let gw = gateway(&provider);
        let ranked: Arc<[Doi]> = vec![doi("a"), doi("b"), doi("c"), doi("d")].into();
        let items = gw.load_suggestion_metadata(&ranked, 1, 2).await;
        let dois: Vec<&Doi> = items.iter().map(|i| &i.doi).collect();
        assert_eq!(dois, [&doi("b"), &doi("c")]);
        assert!(matches!(items[1].result, Err(GatewayError::NotFound(_))));
        assert!(gw.load_suggestion_metadata(&ranked, 4, 2).await.is_empty());

        assert!(gw.prefetch_next(ranked.clone(), BatchCursor { offset: 4, limit: 2 }).is_none());
        gw.prefetch_next(ranked.clone(), BatchCursor { offset: 2, limit: 2 }).unwrap().await.unwrap();
        let items = gw.load_suggestion_metadata(&ranked, 3, 1).await;
        assert!(matches!(items[0].result, Err(GatewayError::PartialData { .. })));
    }
}
