//! Author identities across the selected publications and their ranking.
//!
//! Mentions are merged in two passes. The first pass joins mentions with the
//! same unified name or the same ORCID. The second pass, run against the
//! finished first-pass classes, folds a class made only of abbreviated
//! mentions (`J. Smith`) into the single full-name class it could stand
//! for; when several full-name classes qualify the class stays separate.
//! Because every second-pass decision looks only at first-pass classes, the
//! result does not depend on the order of the input.

mod names;
mod union_find;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classify::is_new;
use crate::doi::Doi;
use crate::error::{Error, Result};
use crate::keywords::{count_keyword_matches, KeywordSpec};
use crate::publication::Publication;
use crate::score::ScoreBreakdown;

pub use names::{normalize_orcid, unify_name, ParsedName};
use union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contribution {
    pub doi: Doi,
    /// Zero-based position in the author list; 0 is the first author.
    pub author_position: usize,
    pub year: Option<i32>,
    /// Filled in by [`rank_authors`].
    pub publication_score: u64,
    /// Filled in by [`rank_authors`].
    pub is_new: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRecord {
    pub key: String,
    pub display_name: String,
    pub name_variants: BTreeSet<String>,
    pub orcid: Option<String>,
    /// One per publication, sorted by DOI.
    pub contributions: Vec<Contribution>,
    pub score: u64,
    /// First and last year over contributions with a known year.
    pub year_span: Option<(i32, i32)>,
    pub keyword_hits: BTreeSet<usize>,
    pub coauthors: BTreeSet<String>,
}

impl AuthorRecord {
    /// Uppercase initials of the display name, surname last (`JS`).
    pub fn initials(&self) -> String {
        match ParsedName::parse(&self.display_name) {
            Some(name) => name
                .initials()
                .into_iter()
                .chain(name.surname.chars().next())
                .flat_map(char::to_uppercase)
                .collect(),
            None => String::new(),
        }
    }
}

struct Mention<'a> {
    publication: &'a Publication,
    position: usize,
    raw: String,
    name: ParsedName,
    orcid: Option<String>,
}

fn collect_mentions(publications: &[Publication]) -> Vec<Mention<'_>> {
    let mut mentions = Vec::new();
    for publication in publications {
        for (position, raw) in publication.authors.iter().enumerate() {
            let Some(name) = ParsedName::parse(raw) else {
                continue;
            };
            mentions.push(Mention {
                publication,
                position,
                raw: raw.split_whitespace().collect::<Vec<_>>().join(" "),
                name,
                orcid: publication.orcid_of(position).and_then(normalize_orcid),
            });
        }
    }
    mentions
}

/// Merges author mentions of `publications` into author records, sorted by
/// key. Mentions whose name is empty after unification are skipped.
pub fn disambiguate(publications: &[Publication], spec: &KeywordSpec) -> Vec<AuthorRecord> {
    let mentions = collect_mentions(publications);
    let mut sets = UnionFind::new(mentions.len());

    // exact unified name, ORCID
    let mut by_name: BTreeMap<String, usize> = BTreeMap::new();
    let mut by_orcid: BTreeMap<&str, usize> = BTreeMap::new();
    for (idx, m) in mentions.iter().enumerate() {
        let first = *by_name.entry(m.name.canonical()).or_insert(idx);
        sets.union(first, idx);
        if let Some(orcid) = m.orcid.as_deref() {
            let first = *by_orcid.entry(orcid).or_insert(idx);
            sets.union(first, idx);
        }
    }

    // abbreviations, decided against the classes above
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for idx in 0..mentions.len() {
        classes.entry(sets.find(idx)).or_default().push(idx);
    }
    let class_orcids = |members: &[usize]| -> BTreeSet<&str> {
        members.iter().filter_map(|&m| mentions[m].orcid.as_deref()).collect()
    };
    let mut full_by_surname: BTreeMap<&str, Vec<(usize, &ParsedName)>> = BTreeMap::new();
    for (&root, members) in &classes {
        for &m in members {
            let name = &mentions[m].name;
            if !name.is_abbreviated() && !name.given.is_empty() {
                full_by_surname.entry(name.surname.as_str()).or_default().push((root, name));
            }
        }
    }

    let mut merges = Vec::new();
    for (&root, members) in &classes {
        if !members.iter().all(|&m| mentions[m].name.is_abbreviated()) {
            continue;
        }
        let targets: BTreeSet<usize> = members
            .iter()
            .flat_map(|&m| {
                let name = &mentions[m].name;
                full_by_surname
                    .get(name.surname.as_str())
                    .into_iter()
                    .flatten()
                    .filter(move |(_, full)| name.abbreviates(full))
                    .map(|(target, _)| *target)
            })
            .collect();
        let mut targets = targets.into_iter();
        if let (Some(target), None) = (targets.next(), targets.next()) {
            let mine = class_orcids(members);
            let theirs = class_orcids(&classes[&target]);
            if mine.is_empty() || theirs.is_empty() || !mine.is_disjoint(&theirs) {
                merges.push((root, target));
            }
        }
    }
    for (a, b) in merges {
        sets.union(a, b);
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for idx in 0..mentions.len() {
        groups.entry(sets.find(idx)).or_default().push(idx);
    }
    let mut records: Vec<AuthorRecord> = groups
        .into_values()
        .map(|members| build_record(&mentions, &members, spec))
        .collect();

    // co-authorship over final keys
    let mut authors_of: BTreeMap<Doi, BTreeSet<String>> = BTreeMap::new();
    for record in &records {
        for c in &record.contributions {
            authors_of.entry(c.doi.clone()).or_default().insert(record.key.clone());
        }
    }
    for record in &mut records {
        let coauthors: BTreeSet<String> = record
            .contributions
            .iter()
            .flat_map(|c| authors_of[&c.doi].iter())
            .filter(|k| **k != record.key)
            .cloned()
            .collect();
        record.coauthors = coauthors;
    }

    records.sort_by(|a, b| a.key.cmp(&b.key));
    records
}

fn build_record(mentions: &[Mention<'_>], members: &[usize], spec: &KeywordSpec) -> AuthorRecord {
    let name_variants: BTreeSet<String> = members.iter().map(|&m| mentions[m].raw.clone()).collect();
    let display_name = name_variants
        .iter()
        .max_by(|a, b| a.chars().count().cmp(&b.chars().count()).then_with(|| b.cmp(a)))
        .cloned()
        .unwrap_or_default();
    let orcid = members.iter().filter_map(|&m| mentions[m].orcid.clone()).min();
    let key = match &orcid {
        Some(orcid) => format!("orcid:{orcid}"),
        None => ParsedName::parse(&display_name)
            .map(|n| n.canonical())
            .unwrap_or_else(|| unify_name(&display_name)),
    };

    let mut by_doi: BTreeMap<&Doi, &Mention<'_>> = BTreeMap::new();
    for &m in members {
        let mention = &mentions[m];
        by_doi
            .entry(&mention.publication.doi)
            .and_modify(|kept| {
                if mention.position < kept.position {
                    *kept = mention;
                }
            })
            .or_insert(mention);
    }
    let contributions: Vec<Contribution> = by_doi
        .values()
        .map(|m| Contribution {
            doi: m.publication.doi.clone(),
            author_position: m.position,
            year: m.publication.year,
            publication_score: 0,
            is_new: false,
        })
        .collect();

    let years: Vec<i32> = contributions.iter().filter_map(|c| c.year).collect();
    let year_span = years.iter().min().zip(years.iter().max()).map(|(a, b)| (*a, *b));
    let keyword_hits = by_doi
        .values()
        .flat_map(|m| count_keyword_matches(&m.publication.title, spec).groups)
        .collect();

    AuthorRecord {
        key,
        display_name,
        name_variants,
        orcid,
        contributions,
        score: 0,
        year_span,
        keyword_hits,
        coauthors: BTreeSet::new(),
    }
}

/// Which factors enter the author score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AuthorScoreConfig {
    /// Sum publication scores instead of counting publications.
    pub weight_by_publication_score: bool,
    /// Double contributions as first author.
    pub boost_first_author: bool,
    /// Double contributions on new publications.
    pub boost_new: bool,
}

impl AuthorScoreConfig {
    /// Publication count.
    pub const AA: Self = Self::new(false, false, false);
    /// Sum of publication scores.
    pub const AB: Self = Self::new(true, false, false);
    /// Count with first-author and new-publication boosts.
    pub const BA: Self = Self::new(false, true, true);
    /// Publication scores with both boosts.
    pub const BB: Self = Self::new(true, true, true);

    pub const fn new(weight_by_publication_score: bool, boost_first_author: bool, boost_new: bool) -> Self {
        AuthorScoreConfig {
            weight_by_publication_score,
            boost_first_author,
            boost_new,
        }
    }

    fn contribution_score(&self, c: &Contribution) -> u64 {
        let mut score = if self.weight_by_publication_score { c.publication_score } else { 1 };
        if self.boost_first_author && c.author_position == 0 {
            score = score.saturating_mul(2);
        }
        if self.boost_new && c.is_new {
            score = score.saturating_mul(2);
        }
        score
    }
}

impl Default for AuthorScoreConfig {
    fn default() -> Self {
        Self::BB
    }
}

impl FromStr for AuthorScoreConfig {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "aa" => Ok(Self::AA),
            "ab" => Ok(Self::AB),
            "ba" => Ok(Self::BA),
            "bb" => Ok(Self::BB),
            other => Err(format!("unknown author score condition {other:?}; expected aa, ab, ba or bb")),
        }
    }
}

impl fmt::Display for AuthorScoreConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // boosts first, weighting second: "ab" is weighting only
        let boosts = match (self.boost_first_author, self.boost_new) {
            (false, false) => "a",
            (true, true) => "b",
            (true, false) => "b(first)",
            (false, true) => "b(new)",
        };
        let weight = if self.weight_by_publication_score { 'b' } else { 'a' };
        write!(f, "{boosts}{weight}")
    }
}

/// Scores and orders author records. Sorted by score descending, then
/// number of contributions descending, then key ascending.
pub fn rank_authors(
    records: &[AuthorRecord],
    selected_scores: &BTreeMap<Doi, ScoreBreakdown>,
    config: AuthorScoreConfig,
    current_year: i32,
) -> Result<Vec<AuthorRecord>> {
    let mut ranked = Vec::with_capacity(records.len());
    for record in records {
        let mut record = record.clone();
        for c in &mut record.contributions {
            let score = selected_scores.get(&c.doi).ok_or_else(|| Error::MissingScore(c.doi.clone()))?;
            c.publication_score = score.s;
            c.is_new = is_new(c.year, current_year);
        }
        record.score = record
            .contributions
            .iter()
            .map(|c| config.contribution_score(c))
            .fold(0u64, u64::saturating_add);
        ranked.push(record);
    }
    ranked.sort_by(|a, b| {
        b.score
            .cmp(&a.score)
            .then(b.contributions.len().cmp(&a.contributions.len()))
            .then_with(|| a.key.cmp(&b.key))
    });
    Ok(ranked)
}

/// The first `n` ranked authors.
pub fn top_authors(ranked: &[AuthorRecord], n: usize) -> &[AuthorRecord] {
    &ranked[..n.min(ranked.len())]
}
