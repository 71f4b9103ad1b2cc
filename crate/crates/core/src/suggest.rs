//! Ranked suggestion lists and their filters.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::classify::{classify, ClassifyConfig, Tag, TagSet};
use crate::doi::Doi;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::keywords::fold_case;
use crate::publication::Publication;
use crate::score::{ScoreBreakdown, ScoringContext};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoredPublication {
    pub publication: Publication,
    pub score: ScoreBreakdown,
    pub tags: TagSet,
    /// Whether metadata for this candidate has been loaded.
    pub loaded: bool,
}

impl ScoredPublication {
    pub fn doi(&self) -> &Doi {
        &self.publication.doi
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuggestionList {
    pub entries: Vec<ScoredPublication>,
    /// All candidates, before any truncation or filtering.
    pub total_candidates: usize,
    /// Entries in `entries` with metadata loaded.
    pub loaded_count: usize,
}

/// Ranking order: score descending, then incoming links descending, then
/// outgoing links descending, then DOI ascending. Total on distinct DOIs.
pub fn rank_order(a: (&ScoreBreakdown, &Doi), b: (&ScoreBreakdown, &Doi)) -> Ordering {
    b.0.s
        .cmp(&a.0.s)
        .then(b.0.i.cmp(&a.0.i))
        .then(b.0.o.cmp(&a.0.o))
        .then_with(|| a.1.cmp(b.1))
}

fn compare_entries(a: &ScoredPublication, b: &ScoredPublication) -> Ordering {
    rank_order((&a.score, a.doi()), (&b.score, b.doi()))
}

/// Sorts entries into ranking order.
pub fn rank(mut entries: Vec<ScoredPublication>, exec: Execution) -> SuggestionList {
    exec.sort_by(&mut entries, compare_entries);
    let loaded_count = entries.iter().filter(|e| e.loaded).count();
    SuggestionList {
        total_candidates: entries.len(),
        loaded_count,
        entries,
    }
}

/// Scores, tags and ranks every candidate. `lookup` returns loaded
/// metadata; candidates without it are scored as DOI-only stubs.
pub fn build_suggestions<'m, F>(
    ctx: &ScoringContext<'_>,
    candidates: &BTreeSet<Doi>,
    lookup: F,
    classify_config: &ClassifyConfig,
    exec: Execution,
) -> SuggestionList
where
    F: Fn(&Doi) -> Option<&'m Publication> + Sync + Send,
{
    let candidates: Vec<&Doi> = candidates.iter().collect();
    let entries = exec.map(&candidates, |doi| {
        let loaded = lookup(doi);
        let score = ctx.score_candidate(doi, loaded.map(|p| p.title.as_str()));
        let publication = loaded.cloned().unwrap_or_else(|| Publication::stub((*doi).clone()));
        let tags = if loaded.is_some() {
            classify(&publication, classify_config)
        } else {
            TagSet::new()
        };
        ScoredPublication {
            publication,
            score,
            tags,
            loaded: loaded.is_some(),
        }
    });
    rank(entries, exec)
}

/// Centrality scores and tags of the selected publications, in the order
/// given.
pub fn score_selection(
    ctx: &ScoringContext<'_>,
    selected: &[Publication],
    classify_config: &ClassifyConfig,
    exec: Execution,
) -> Vec<ScoredPublication> {
    exec.map(selected, |p| ScoredPublication {
        score: ctx.score_selected(&p.doi, p.has_title().then_some(p.title.as_str())),
        tags: classify(p, classify_config),
        publication: p.clone(),
        loaded: p.has_title(),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterSpec {
    #[serde(default, rename = "title", skip_serializing_if = "Option::is_none")]
    pub title_query: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year_min: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year_max: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<Tag>,
}

impl FilterSpec {
    pub fn validate(&self) -> Result<()> {
        match (self.year_min, self.year_max) {
            (Some(min), Some(max)) if min > max => Err(Error::InvalidFilter { min, max }),
            _ => Ok(()),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.title_query.as_deref().is_none_or(str::is_empty)
            && self.year_min.is_none()
            && self.year_max.is_none()
            && self.tag.is_none()
    }

    fn keeps(&self, entry: &ScoredPublication, folded_query: Option<&str>) -> bool {
        if let Some(q) = folded_query {
            if !fold_case(&entry.publication.title).contains(q) {
                return false;
            }
        }
        if self.year_min.is_some() || self.year_max.is_some() {
            let Some(year) = entry.publication.year else {
                return false;
            };
            if self.year_min.is_some_and(|min| year < min) || self.year_max.is_some_and(|max| year > max) {
                return false;
            }
        }
        self.tag.is_none_or(|t| entry.tags.contains(&t))
    }
}

/// Keeps the entries matching every set criterion, in their original order.
/// `total_candidates` is carried over; `loaded_count` reflects the result.
pub fn apply_filter(list: &SuggestionList, filter: &FilterSpec) -> Result<SuggestionList> {
    filter.validate()?;
    let folded_query = filter
        .title_query
        .as_deref()
        .filter(|q| !q.is_empty())
        .map(fold_case);
    let entries: Vec<ScoredPublication> = list
        .entries
        .iter()
        .filter(|e| filter.keeps(e, folded_query.as_deref()))
        .cloned()
        .collect();
    Ok(SuggestionList {
        loaded_count: entries.iter().filter(|e| e.loaded).count(),
        total_candidates: list.total_candidates,
        entries,
    })
}
