//! Boost keywords.
//!
//! The text syntax is a comma-separated list of keyword groups, each group a
//! `|`-separated list of alternative stems, e.g. `CIT, VISUAL, PUBLI|LITERAT`.
//! Stems are stored uppercase and matched as case-insensitive substrings of
//! publication titles.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Ordered alternatives that together form one keyword.
pub type KeywordGroup = Vec<String>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct KeywordSpec {
    groups: Vec<KeywordGroup>,
}

impl KeywordSpec {
    /// Tolerant parse of the comma / vertical-bar syntax. Never fails.
    pub fn parse(text: &str) -> Self {
        let groups = text
            .split(',')
            .map(|group| {
                group
                    .split('|')
                    .map(|alt| alt.trim().to_uppercase())
                    .filter(|alt| !alt.is_empty())
                    .collect::<Vec<_>>()
            })
            .filter(|group| !group.is_empty())
            .collect();
        KeywordSpec { groups }
    }

    /// Builds a spec from already-split groups, applying the same
    /// normalization as [`KeywordSpec::parse`].
    pub fn from_groups<I, G, S>(groups: I) -> Self
    where
        I: IntoIterator<Item = G>,
        G: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let groups = groups
            .into_iter()
            .map(|g| {
                g.into_iter()
                    .map(|alt| alt.as_ref().trim().to_uppercase())
                    .filter(|alt| !alt.is_empty())
                    .collect::<Vec<_>>()
            })
            .filter(|g| !g.is_empty())
            .collect();
        KeywordSpec { groups }
    }

    /// Canonical text form: groups joined by `", "`, alternatives by `"|"`.
    pub fn render(&self) -> String {
        self.groups
            .iter()
            .map(|g| g.join("|"))
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn groups(&self) -> &[KeywordGroup] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Display label for a group, e.g. `PUBLI|LITERAT`.
    pub fn label(&self, group: usize) -> Option<String> {
        self.groups.get(group).map(|g| g.join("|"))
    }
}

pub fn parse_keyword_spec(text: &str) -> KeywordSpec {
    KeywordSpec::parse(text)
}

impl fmt::Display for KeywordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for KeywordSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for KeywordSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Ok(KeywordSpec::parse(&text))
    }
}

/// Context-free case fold of a single character.
fn fold_char(c: char) -> impl Iterator<Item = char> {
    c.to_uppercase().flat_map(char::to_lowercase)
}

/// Case-folded copy used for all keyword comparisons. No diacritic folding.
pub fn fold_case(text: &str) -> String {
    text.chars().flat_map(fold_char).collect()
}

/// Result of matching a title against a [`KeywordSpec`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordMatches {
    /// Number of matched groups, the boost degree.
    pub b: u32,
    /// Indices of matched groups, ascending.
    pub groups: Vec<usize>,
}

/// Counts the keyword groups occurring in `title`. A group matches when any
/// of its alternatives is a case-insensitive substring; it counts once.
pub fn count_keyword_matches(title: &str, spec: &KeywordSpec) -> KeywordMatches {
    if spec.is_empty() || title.is_empty() {
        return KeywordMatches::default();
    }
    let folded = fold_case(title);
    let groups: Vec<usize> = spec
        .groups
        .iter()
        .enumerate()
        .filter(|(_, alts)| alts.iter().any(|alt| folded.contains(&fold_case(alt))))
        .map(|(idx, _)| idx)
        .collect();
    KeywordMatches {
        b: groups.len() as u32,
        groups,
    }
}

/// A highlighted keyword occurrence. Offsets are Unicode scalar (char)
/// indices into the original text, half-open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSpan {
    pub start: usize,
    pub end: usize,
    pub group: usize,
}

/// All non-overlapping keyword occurrences in `text`, scanning left to
/// right. At each position the longest matching alternative wins; equal
/// lengths go to the lower group index.
pub fn match_spans(text: &str, spec: &KeywordSpec) -> Vec<MatchSpan> {
    if spec.is_empty() {
        return Vec::new();
    }

    // folded[k] came from original char origin[k]
    let mut folded = Vec::new();
    let mut origin = Vec::new();
    for (idx, c) in text.chars().enumerate() {
        for f in fold_char(c) {
            folded.push(f);
            origin.push(idx);
        }
    }

    let stems: Vec<(usize, Vec<char>)> = spec
        .groups
        .iter()
        .enumerate()
        .flat_map(|(g, alts)| alts.iter().map(move |alt| (g, fold_case(alt).chars().collect())))
        .filter(|(_, stem): &(usize, Vec<char>)| !stem.is_empty())
        .collect();

    let mut spans = Vec::new();
    let mut pos = 0;
    while pos < folded.len() {
        let best = stems
            .iter()
            .filter(|(_, stem)| folded[pos..].starts_with(stem))
            .fold(None::<(usize, usize)>, |best, (g, stem)| match best {
                Some((_, len)) if len >= stem.len() => best,
                _ => Some((*g, stem.len())),
            });

        match best {
            Some((group, len)) => {
                let start = origin[pos];
                let end = origin[pos + len - 1] + 1;
                spans.push(MatchSpan { start, end, group });
                pos += len;
                while pos < folded.len() && origin[pos] < end {
                    pos += 1;
                }
            }
            None => pos += 1,
        }
    }
    spans
}
