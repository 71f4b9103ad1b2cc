//! Characterization tags derived from citation statistics and metadata.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::keywords::fold_case;
use crate::publication::Publication;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    HighlyCited,
    LiteratureSurvey,
    New,
    Unnoted,
}

impl Tag {
    pub const ALL: [Tag; 4] = [Tag::HighlyCited, Tag::LiteratureSurvey, Tag::New, Tag::Unnoted];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::HighlyCited => "highly_cited",
            Tag::LiteratureSurvey => "literature_survey",
            Tag::New => "new",
            Tag::Unnoted => "unnoted",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownTag(pub String);

impl fmt::Display for UnknownTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown tag {:?}", self.0)
    }
}

impl std::error::Error for UnknownTag {}

impl FromStr for Tag {
    type Err = UnknownTag;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| UnknownTag(s.to_string()))
    }
}

pub type TagSet = BTreeSet<Tag>;

pub const DEFAULT_SURVEY_TERMS: [&str; 4] = ["survey", "review", "overview", "state of the art"];

/// Thresholds are fixed; the survey vocabulary and the reference year are
/// not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub current_year: i32,
    pub survey_terms: Vec<String>,
}

impl ClassifyConfig {
    pub fn new(current_year: i32) -> Self {
        ClassifyConfig {
            current_year,
            survey_terms: DEFAULT_SURVEY_TERMS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Published at most two calendar years before `current_year`.
pub fn is_new(year: Option<i32>, current_year: i32) -> bool {
    year.is_some_and(|y| y >= current_year - 2)
}

/// Tags for `publication`.
///
/// With `age = current_year - year + 1` (never below 1) and citations per
/// year `cpy = n_cited_by / age`: highly cited when `cpy > 10`, unnoted when
/// `cpy < 1`. The comparisons are done in integers so the boundaries are
/// exact.
pub fn classify(publication: &Publication, config: &ClassifyConfig) -> TagSet {
    let mut tags = TagSet::new();
    let counts = publication.citation_counts_total;

    if let Some(year) = publication.year {
        let age = i64::from(config.current_year - year + 1).max(1);
        let cited_by = i64::from(counts.n_cited_by);
        if cited_by > 10 * age {
            tags.insert(Tag::HighlyCited);
        }
        if cited_by < age {
            tags.insert(Tag::Unnoted);
        }
        if is_new(Some(year), config.current_year) {
            tags.insert(Tag::New);
        }
    }

    if counts.n_citing > 100 || (counts.n_citing > 50 && has_survey_term(&publication.title, config)) {
        tags.insert(Tag::LiteratureSurvey);
    }
    tags
}

fn has_survey_term(title: &str, config: &ClassifyConfig) -> bool {
    let folded = fold_case(title);
    config
        .survey_terms
        .iter()
        .any(|term| folded.contains(&fold_case(term)))
}
