//! Layout-agnostic citation-network payload.
//!
//! Holds publication, keyword and author nodes plus the edges between them.
//! Positions are computed by the client; this only decides what is shown.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::authors::AuthorRecord;
use crate::classify::TagSet;
use crate::doi::Doi;
use crate::error::{Error, Result};
use crate::index::CitationIndex;
use crate::keywords::{count_keyword_matches, KeywordSpec};
use crate::score::ScoreBreakdown;
use crate::suggest::{ScoredPublication, SuggestionList};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NetworkSettings {
    pub n_suggested: usize,
    pub n_authors: usize,
    pub show_keywords: bool,
    pub show_authors: bool,
}

impl Default for NetworkSettings {
    fn default() -> Self {
        NetworkSettings {
            n_suggested: 20,
            n_authors: 5,
            show_keywords: true,
            show_authors: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PubNode {
    pub doi: Doi,
    pub selected: bool,
    pub year: Option<i32>,
    pub score: ScoreBreakdown,
    pub tags: TagSet,
    pub unread: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordNode {
    pub group_index: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorNode {
    pub author_key: String,
    pub initials: String,
    pub score: u64,
    pub center_year: Option<i32>,
}

/// `from` cites `to`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CitationEdge {
    pub from: Doi,
    pub to: Doi,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KeywordEdge {
    pub group_index: usize,
    pub doi: Doi,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AuthorEdge {
    pub author_key: String,
    pub doi: Doi,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkPayload {
    pub pub_nodes: Vec<PubNode>,
    pub keyword_nodes: Vec<KeywordNode>,
    pub author_nodes: Vec<AuthorNode>,
    pub citation_edges: Vec<CitationEdge>,
    pub keyword_edges: Vec<KeywordEdge>,
    pub author_edges: Vec<AuthorEdge>,
    pub settings_echo: NetworkSettings,
}

/// Inputs to [`build_network`].
#[derive(Debug, Clone, Copy)]
pub struct NetworkInput<'a> {
    pub selected: &'a [ScoredPublication],
    /// Ranked.
    pub suggestions: &'a SuggestionList,
    pub spec: &'a KeywordSpec,
    /// Ranked.
    pub authors: &'a [AuthorRecord],
    pub index: &'a CitationIndex,
    pub read: &'a BTreeSet<Doi>,
}

/// Selected publications come first ordered by DOI, then the top
/// `n_suggested` suggestions in rank order. Citation edges are the links
/// among shown publications with at least one selected endpoint.
pub fn build_network(input: &NetworkInput<'_>, settings: NetworkSettings) -> NetworkPayload {
    let mut selected: Vec<&ScoredPublication> = input.selected.iter().collect();
    selected.sort_by(|a, b| a.doi().cmp(b.doi()));
    selected.dedup_by(|a, b| a.doi() == b.doi());
    let selected_dois: BTreeSet<&Doi> = selected.iter().map(|p| p.doi()).collect();

    let suggested: Vec<&ScoredPublication> = input
        .suggestions
        .entries
        .iter()
        .filter(|e| !selected_dois.contains(e.doi()))
        .take(settings.n_suggested)
        .collect();

    let node = |p: &ScoredPublication, is_selected: bool| PubNode {
        doi: p.doi().clone(),
        selected: is_selected,
        year: p.publication.year,
        score: p.score,
        tags: p.tags.clone(),
        unread: !is_selected && !input.read.contains(p.doi()),
    };
    let pub_nodes: Vec<PubNode> = selected
        .iter()
        .map(|p| node(p, true))
        .chain(suggested.iter().map(|p| node(p, false)))
        .collect();

    let shown: Vec<&ScoredPublication> = selected.iter().chain(suggested.iter()).copied().collect();
    let mut citation_edges = BTreeSet::new();
    for from in &shown {
        for to in &shown {
            let any_selected = selected_dois.contains(from.doi()) || selected_dois.contains(to.doi());
            if any_selected && input.index.cites(from.doi(), to.doi()) {
                citation_edges.insert(CitationEdge {
                    from: from.doi().clone(),
                    to: to.doi().clone(),
                });
            }
        }
    }

    let mut keyword_nodes = Vec::new();
    let mut keyword_edges = BTreeSet::new();
    if settings.show_keywords {
        keyword_nodes = (0..input.spec.len())
            .map(|g| KeywordNode {
                group_index: g,
                label: input.spec.label(g).unwrap_or_default(),
            })
            .collect();
        for p in &shown {
            for group_index in count_keyword_matches(&p.publication.title, input.spec).groups {
                keyword_edges.insert(KeywordEdge {
                    group_index,
                    doi: p.doi().clone(),
                });
            }
        }
    }

    let mut author_nodes = Vec::new();
    let mut author_edges = BTreeSet::new();
    if settings.show_authors {
        for record in input.authors.iter().take(settings.n_authors) {
            author_nodes.push(AuthorNode {
                author_key: record.key.clone(),
                initials: record.initials(),
                score: record.score,
                center_year: author_center_year(record).ok(),
            });
            for c in &record.contributions {
                if selected_dois.contains(&c.doi) {
                    author_edges.insert(AuthorEdge {
                        author_key: record.key.clone(),
                        doi: c.doi.clone(),
                    });
                }
            }
        }
    }

    NetworkPayload {
        pub_nodes,
        keyword_nodes,
        author_nodes,
        citation_edges: citation_edges.into_iter().collect(),
        keyword_edges: keyword_edges.into_iter().collect(),
        author_edges: author_edges.into_iter().collect(),
        settings_echo: settings,
    }
}

/// Inclusive year range over publication nodes with a known year.
pub fn timeline_domain(payload: &NetworkPayload) -> Result<(i32, i32)> {
    let years = payload.pub_nodes.iter().filter_map(|n| n.year);
    let (min, max) = years.fold((None, None), |(lo, hi): (Option<i32>, Option<i32>), y| {
        (Some(lo.map_or(y, |l| l.min(y))), Some(hi.map_or(y, |h| h.max(y))))
    });
    min.zip(max).ok_or(Error::NoYearData)
}

/// Midpoint of the author's first and last selected publication year,
/// rounding half up.
pub fn author_center_year(record: &AuthorRecord) -> Result<i32> {
    let (first, last) = record.year_span.ok_or(Error::NoYearData)?;
    Ok((first + last + 1).div_euclid(2))
}
