//! JSON shapes shared by the HTTP API and the CLI's `--json` output.

use litscope_core::{
    apply_filter, boost_glyph_level, match_spans, AuthorRecord, CitationCounts, Doi, FilterSpec, KeywordSpec,
    MatchSpan, Publication, ScoreBreakdown, ScoredPublication, SessionState, Tag,
};
use serde::Serialize;

use crate::engine::{Derived, Warning};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PublicationView {
    pub doi: Doi,
    pub title: String,
    pub title_spans: Vec<MatchSpan>,
    pub authors: Vec<String>,
    pub year: Option<i32>,
    pub venue: Option<String>,
    pub score: ScoreBreakdown,
    /// Number of boost markers to draw, capped at 3.
    pub boost_level: u8,
    pub tags: Vec<Tag>,
    pub citation_counts_total: CitationCounts,
    pub references_known: bool,
    pub loaded: bool,
    pub unread: bool,
}

impl PublicationView {
    pub fn new(entry: &ScoredPublication, spec: &KeywordSpec, unread: bool) -> Self {
        let p = &entry.publication;
        PublicationView {
            doi: p.doi.clone(),
            title: p.title.clone(),
            title_spans: match_spans(&p.title, spec),
            authors: p.authors.clone(),
            year: p.year,
            venue: p.venue.clone(),
            score: entry.score,
            boost_level: boost_glyph_level(entry.score.b),
            tags: entry.tags.iter().copied().collect(),
            citation_counts_total: p.citation_counts_total,
            references_known: p.references_known,
            loaded: entry.loaded,
            unread,
        }
    }
}

/// A publication as found by search or direct lookup, without scores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FoundPublication {
    pub doi: Doi,
    pub title: String,
    pub title_spans: Vec<MatchSpan>,
    pub authors: Vec<String>,
    pub year: Option<i32>,
    pub venue: Option<String>,
    #[serde(rename = "abstract")]
    pub abstract_text: Option<String>,
    pub citation_counts_total: CitationCounts,
    pub selected: bool,
    pub excluded: bool,
}

impl FoundPublication {
    pub fn new(p: &Publication, state: &SessionState) -> Self {
        FoundPublication {
            doi: p.doi.clone(),
            title: p.title.clone(),
            title_spans: match_spans(&p.title, &state.keywords()),
            authors: p.authors.clone(),
            year: p.year,
            venue: p.venue.clone(),
            abstract_text: p.abstract_text.clone(),
            citation_counts_total: p.citation_counts_total,
            selected: state.selected.contains(&p.doi),
            excluded: state.excluded.contains(&p.doi),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuggestionsPage {
    pub total_candidates: usize,
    /// Candidates whose metadata has been requested so far.
    pub window: usize,
    pub loaded_count: usize,
    /// Entries passing the filter, before paging.
    pub filtered_count: usize,
    pub offset: usize,
    pub limit: usize,
    pub more_available: bool,
    pub filter: FilterSpec,
    pub entries: Vec<PublicationView>,
}

/// Filters the loaded suggestions and cuts out one page.
pub fn suggestions_page(
    derived: &Derived,
    state: &SessionState,
    filter: &FilterSpec,
    offset: usize,
    limit: usize,
) -> litscope_core::Result<SuggestionsPage> {
    let filtered = apply_filter(&derived.suggestions, filter)?;
    let spec = state.keywords();
    let entries = filtered
        .entries
        .iter()
        .skip(offset)
        .take(limit)
        .map(|e| PublicationView::new(e, &spec, state.is_unread(e.doi())))
        .collect();
    Ok(SuggestionsPage {
        total_candidates: derived.suggestions.total_candidates,
        window: derived.window,
        loaded_count: derived.suggestions.loaded_count,
        filtered_count: filtered.entries.len(),
        offset,
        limit,
        more_available: derived.more_available(),
        filter: filter.clone(),
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuthorView {
    pub key: String,
    pub name: String,
    pub initials: String,
    pub name_variants: Vec<String>,
    pub orcid: Option<String>,
    pub score: u64,
    pub publications: Vec<Doi>,
    pub first_year: Option<i32>,
    pub last_year: Option<i32>,
    pub keyword_groups: Vec<usize>,
    pub coauthors: Vec<String>,
}

impl AuthorView {
    pub fn new(record: &AuthorRecord) -> Self {
        AuthorView {
            key: record.key.clone(),
            name: record.display_name.clone(),
            initials: record.initials(),
            name_variants: record.name_variants.iter().cloned().collect(),
            orcid: record.orcid.clone(),
            score: record.score,
            publications: record.contributions.iter().map(|c| c.doi.clone()).collect(),
            first_year: record.year_span.map(|(first, _)| first),
            last_year: record.year_span.map(|(_, last)| last),
            keyword_groups: record.keyword_hits.iter().copied().collect(),
            coauthors: record.coauthors.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuthorsPage {
    /// Condition label: boosts first, weighting second.
    pub condition: String,
    pub total: usize,
    pub authors: Vec<AuthorView>,
}

pub fn authors_page(ranked: &[AuthorRecord], condition: String, limit: Option<usize>) -> AuthorsPage {
    let shown = litscope_core::top_authors(ranked, limit.unwrap_or(ranked.len()));
    AuthorsPage { condition, total: ranked.len(), authors: shown.iter().map(AuthorView::new).collect() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateView {
    pub selected: Vec<Doi>,
    pub excluded: Vec<Doi>,
    pub keywords: String,
    pub boost_enabled: bool,
    pub staged_include: Vec<Doi>,
    pub staged_exclude: Vec<Doi>,
    pub read: Vec<Doi>,
}

impl From<&SessionState> for StateView {
    fn from(state: &SessionState) -> Self {
        StateView {
            selected: state.selected.clone(),
            excluded: state.excluded.clone(),
            keywords: state.keyword_text.clone(),
            boost_enabled: state.boost_enabled,
            staged_include: state.staged_inclusions.iter().cloned().collect(),
            staged_exclude: state.staged_exclusions.iter().cloned().collect(),
            read: state.read_dois.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total_candidates: usize,
    pub window: usize,
    pub loaded_count: usize,
    pub authors: usize,
    pub more_available: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionView {
    pub id: String,
    pub revision: u64,
    pub state: StateView,
    pub selected: Vec<PublicationView>,
    pub summary: Summary,
    pub warnings: Vec<Warning>,
}

impl SessionView {
    pub fn new(id: &str, revision: u64, state: &SessionState, derived: &Derived) -> Self {
        let spec = state.keywords();
        SessionView {
            id: id.to_string(),
            revision,
            state: state.into(),
            selected: derived.selected.iter().map(|p| PublicationView::new(p, &spec, false)).collect(),
            summary: Summary {
                total_candidates: derived.suggestions.total_candidates,
                window: derived.window,
                loaded_count: derived.suggestions.loaded_count,
                authors: derived.author_records.len(),
                more_available: derived.more_available(),
            },
            warnings: derived.warnings.clone(),
        }
    }
}
