//! The recompute pipeline shared by the HTTP service and the CLI:
//! fetch the selection, build the citation index, rank candidates without
//! boosts, load metadata for the top window, then score, tag and rank with
//! boosts and disambiguate the selection's authors.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use futures::future::join_all;
use litscope_core::{
    build_network, build_suggestions, candidate_set, disambiguate, rank_authors, score_selection, AuthorRecord,
    AuthorScoreConfig, CitationIndex, ClassifyConfig, Doi, Execution, KeywordSpec, NetworkInput, NetworkPayload,
    NetworkSettings, Publication, ScoreBreakdown, ScoredPublication, ScoringContext, SessionState, SuggestionList,
};
use litscope_gateway::{BatchCursor, FetchScope, Gateway, GatewayError, SourceFlags, METADATA_WINDOW};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WarningKind {
    /// Neither source knows the DOI.
    NotFound,
    /// One source failed; see the flags.
    PartialData,
    /// Served from an expired cache entry.
    Stale,
    /// Cited too often for link retrieval.
    CitationsSkippedLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub doi: Doi,
    pub kind: WarningKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<SourceFlags>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("source unavailable while fetching {doi}: {reason}")]
    Unavailable { doi: Doi, reason: String },
}

/// Everything computed from one committed session state.
#[derive(Debug, Clone, Default)]
pub struct Derived {
    /// Selected publications in selection order, with centrality scores.
    pub selected: Vec<ScoredPublication>,
    /// The loaded window of the ranked suggestions. `total_candidates`
    /// counts every candidate.
    pub suggestions: SuggestionList,
    /// Number of top candidates metadata was requested for.
    pub window: usize,
    pub index: CitationIndex,
    /// Disambiguated authors of the selection, not yet scored.
    pub author_records: Vec<AuthorRecord>,
    pub selected_scores: BTreeMap<Doi, ScoreBreakdown>,
    pub warnings: Vec<Warning>,
}

impl Derived {
    pub fn more_available(&self) -> bool {
        self.window < self.suggestions.total_candidates
    }
}

#[derive(Clone)]
pub struct Engine {
    gateway: Gateway,
    classify: ClassifyConfig,
    exec: Execution,
    prefetch: bool,
}

impl Engine {
    pub fn new(gateway: Gateway, classify: ClassifyConfig, exec: Execution) -> Self {
        Engine { gateway, classify, exec, prefetch: false }
    }

    /// Warm the next metadata window in the background after each
    /// recompute.
    pub fn with_prefetch(mut self, prefetch: bool) -> Self {
        self.prefetch = prefetch;
        self
    }

    pub fn gateway(&self) -> &Gateway {
        &self.gateway
    }

    pub fn current_year(&self) -> i32 {
        self.classify.current_year
    }

    async fn fetch_selection(&self, selected: &[Doi], warnings: &mut Vec<Warning>) -> Result<Vec<Publication>, EngineError> {
        let results = join_all(selected.iter().map(|d| self.gateway.fetch_publication(d))).await;
        let mut publications = Vec::with_capacity(selected.len());
        for (doi, result) in selected.iter().zip(results) {
            let warn = |kind, flags| Warning { doi: doi.clone(), kind, flags };
            match result {
                Ok(fetched) => {
                    if fetched.stale {
                        warnings.push(warn(WarningKind::Stale, None));
                    }
                    if fetched.is_partial(FetchScope::Full) {
                        warnings.push(warn(WarningKind::PartialData, Some(fetched.flags)));
                    }
                    if fetched.flags.citations_skipped_large {
                        warnings.push(warn(WarningKind::CitationsSkippedLarge, None));
                    }
                    publications.push(fetched.publication);
                }
                Err(GatewayError::NotFound(_)) => {
                    warnings.push(warn(WarningKind::NotFound, None));
                    publications.push(Publication::stub(doi.clone()));
                }
                Err(GatewayError::PartialData { flags, .. }) => {
                    warnings.push(warn(WarningKind::PartialData, Some(flags)));
                    publications.push(Publication::stub(doi.clone()));
                }
                Err(GatewayError::SourceUnavailable(reason)) | Err(GatewayError::InvalidQuery(reason)) => {
                    return Err(EngineError::Unavailable { doi: doi.clone(), reason });
                }
            }
        }
        Ok(publications)
    }

    /// Derived artifacts for the committed part of `state`, with metadata
    /// loaded for the top `window` candidates.
    pub async fn recompute(&self, state: &SessionState, window: usize) -> Result<Derived, EngineError> {
        let mut warnings = Vec::new();
        let selected_pubs = self.fetch_selection(&state.selected, &mut warnings).await?;
        let index = CitationIndex::from_publications(&selected_pubs);
        let selected = state.selected_set();
        let candidates = candidate_set(&selected, &state.excluded_set(), &index);

        // The loading order ignores boosts: they need titles, which are
        // what is being loaded.
        let unboosted = KeywordSpec::default();
        let plain = ScoringContext::new(&selected, &index, &unboosted, false);
        let order = build_suggestions(&plain, &candidates, |_| None, &self.classify, self.exec);
        let ranked: Arc<[Doi]> = order.entries.iter().map(|e| e.doi().clone()).collect();
        let window = window.min(ranked.len());

        let mut loaded: HashMap<Doi, Publication> = HashMap::with_capacity(window);
        for item in self.gateway.load_suggestion_metadata(&ranked, 0, window).await {
            match item.result {
                Ok(fetched) => {
                    if fetched.stale {
                        warnings.push(Warning { doi: item.doi.clone(), kind: WarningKind::Stale, flags: None });
                    }
                    if fetched.flags.metadata_ok {
                        loaded.insert(item.doi, fetched.publication);
                    }
                }
                Err(GatewayError::PartialData { flags, .. }) => {
                    warnings.push(Warning { doi: item.doi, kind: WarningKind::PartialData, flags: Some(flags) });
                }
                Err(_) => {}
            }
        }
        if self.prefetch && window < ranked.len() {
            let cursor = BatchCursor { offset: window, limit: METADATA_WINDOW };
            drop(self.gateway.prefetch_next(ranked.clone(), cursor));
        }

        let spec = state.keywords();
        let ctx = ScoringContext::new(&selected, &index, &spec, state.boost_enabled);
        // Boosts only raise loaded candidates, so the loaded window stays a
        // prefix of the final ranking.
        let mut suggestions = build_suggestions(&ctx, &candidates, |d| loaded.get(d), &self.classify, self.exec);
        suggestions.entries.truncate(window);
        suggestions.loaded_count = suggestions.entries.iter().filter(|e| e.loaded).count();

        let scored_selection = score_selection(&ctx, &selected_pubs, &self.classify, self.exec);
        let selected_scores = scored_selection.iter().map(|p| (p.doi().clone(), p.score)).collect();
        let author_records = disambiguate(&selected_pubs, &spec);

        Ok(Derived {
            selected: scored_selection,
            suggestions,
            window,
            index,
            author_records,
            selected_scores,
            warnings,
        })
    }

    pub fn rank_authors(&self, derived: &Derived, config: AuthorScoreConfig) -> Vec<AuthorRecord> {
        rank_authors(&derived.author_records, &derived.selected_scores, config, self.classify.current_year)
            .expect("every contribution belongs to a scored selected publication")
    }

    pub fn network(
        &self,
        derived: &Derived,
        state: &SessionState,
        settings: NetworkSettings,
        authors: AuthorScoreConfig,
    ) -> NetworkPayload {
        let ranked = self.rank_authors(derived, authors);
        let spec = state.keywords();
        build_network(
            &NetworkInput {
                selected: &derived.selected,
                suggestions: &derived.suggestions,
                spec: &spec,
                authors: &ranked,
                index: &derived.index,
                read: &state.read_dois,
            },
            settings,
        )
    }
}
