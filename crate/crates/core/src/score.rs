//! Citation-link scores with keyword boost.
//!
//! A publication's score counts its outgoing links `o` to and incoming links
//! `i` from selected publications. With boosting on, each matched keyword
//! group doubles it: `s = (o + i) * 2^b`. Selected publications are scored
//! against the other selected ones plus one virtual self-citation, which
//! makes the score a degree-centrality measure inside the selection.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::doi::Doi;
use crate::index::CitationIndex;
use crate::keywords::{count_keyword_matches, KeywordSpec};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    /// Outgoing links to selected publications.
    pub o: u32,
    /// Incoming links from selected publications.
    pub i: u32,
    /// Matched keyword groups.
    pub b: u32,
    /// Final score.
    pub s: u64,
}

impl ScoreBreakdown {
    pub fn new(o: u32, i: u32, b: u32, boost_enabled: bool) -> Self {
        let base = u64::from(o) + u64::from(i);
        let s = if boost_enabled { boosted(base, b) } else { base };
        ScoreBreakdown { o, i, b, s }
    }

    /// `o + i`, the unboosted score.
    pub fn base(&self) -> u64 {
        u64::from(self.o) + u64::from(self.i)
    }
}

/// `base * 2^b`, saturating at `u64::MAX`.
fn boosted(base: u64, b: u32) -> u64 {
    if base == 0 {
        return 0;
    }
    match 1u64.checked_shl(b) {
        Some(factor) => base.saturating_mul(factor),
        None => u64::MAX,
    }
}

/// Glyph badge size: one to three chevrons, capped at three.
pub fn boost_glyph_level(b: u32) -> u8 {
    b.min(3) as u8
}

/// Everything a score depends on besides the scored publication itself.
#[derive(Debug, Clone, Copy)]
pub struct ScoringContext<'a> {
    pub selected: &'a BTreeSet<Doi>,
    pub index: &'a CitationIndex,
    pub spec: &'a KeywordSpec,
    pub boost_enabled: bool,
}

impl<'a> ScoringContext<'a> {
    pub fn new(
        selected: &'a BTreeSet<Doi>,
        index: &'a CitationIndex,
        spec: &'a KeywordSpec,
        boost_enabled: bool,
    ) -> Self {
        ScoringContext {
            selected,
            index,
            spec,
            boost_enabled,
        }
    }

    fn links(&self, doi: &Doi) -> (u32, u32) {
        let mut o = 0;
        let mut i = 0;
        for p in self.selected {
            if p == doi {
                continue;
            }
            if self.index.cites(doi, p) {
                o += 1;
            }
            if self.index.cites(p, doi) {
                i += 1;
            }
        }
        (o, i)
    }

    fn boost_degree(&self, title: Option<&str>) -> u32 {
        title.map_or(0, |t| count_keyword_matches(t, self.spec).b)
    }

    /// Score of a non-selected publication. `title` is `None` while its
    /// metadata has not been loaded, which leaves it unboosted.
    pub fn score_candidate(&self, doi: &Doi, title: Option<&str>) -> ScoreBreakdown {
        debug_assert!(!self.selected.contains(doi));
        let (o, i) = self.links(doi);
        ScoreBreakdown::new(o, i, self.boost_degree(title), self.boost_enabled)
    }

    /// Centrality score of a selected publication.
    pub fn score_selected(&self, doi: &Doi, title: Option<&str>) -> ScoreBreakdown {
        debug_assert!(self.selected.contains(doi));
        let (o, i) = self.links(doi);
        ScoreBreakdown::new(o, i + 1, self.boost_degree(title), self.boost_enabled)
    }
}

/// Every DOI linked by citation to a selected publication, minus the
/// selected and excluded ones.
pub fn candidate_set(
    selected: &BTreeSet<Doi>,
    excluded: &BTreeSet<Doi>,
    index: &CitationIndex,
) -> BTreeSet<Doi> {
    selected
        .iter()
        .flat_map(|p| index.references(p).iter().chain(index.citations(p)))
        .filter(|d| !selected.contains(*d) && !excluded.contains(*d))
        .cloned()
        .collect()
}
