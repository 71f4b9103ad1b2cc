//! BibTeX export of the selection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use crate::authors::{unify_name, ParsedName};
use crate::publication::Publication;

const STOP_WORDS: &[&str] = &[
    "a", "an", "the", "on", "of", "in", "for", "and", "to", "with", "at", "by", "from", "toward", "towards", "via",
    "is", "are", "what", "how", "why", "do", "does",
];

/// Escapes the BibTeX special characters `{ } % & # _` and backslash.
pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\textbackslash{}"),
            '{' | '}' | '%' | '&' | '#' | '_' => {
                out.push('\\');
                out.push(c);
            }
            c if c.is_control() => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

fn ascii_alnum(text: &str) -> String {
    text.chars().filter(char::is_ascii_alphanumeric).collect()
}

/// `surname` + `year` + first significant title word, all lowercase ASCII.
pub fn base_key(publication: &Publication) -> String {
    let surname = publication
        .authors
        .iter()
        .find_map(|a| ParsedName::parse(a))
        .map(|n| ascii_alnum(&n.surname))
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "anon".to_string());
    let year = publication.year.map(|y| y.to_string()).unwrap_or_default();
    let unified_title = unify_name(&publication.title);
    let word = unified_title
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|w| !w.is_empty() && w.chars().any(|c| c.is_ascii_alphabetic()))
        .find(|w| !STOP_WORDS.contains(w))
        .unwrap_or_default();
    format!("{surname}{year}{word}")
}

fn suffix(mut n: usize) -> String {
    let mut letters = Vec::new();
    loop {
        letters.push((b'a' + (n % 26) as u8) as char);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    letters.iter().rev().collect()
}

/// Citation keys for `publications`, in order. Keys shared by several
/// publications all receive letter suffixes `a`, `b`, ... in order.
pub fn citation_keys(publications: &[Publication]) -> Vec<String> {
    let bases: Vec<String> = publications.iter().map(base_key).collect();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for b in &bases {
        *counts.entry(b).or_default() += 1;
    }
    let mut used: BTreeSet<String> = bases.iter().filter(|b| counts[b.as_str()] == 1).cloned().collect();
    let mut next_suffix: BTreeMap<&str, usize> = BTreeMap::new();
    bases
        .iter()
        .map(|b| {
            if counts[b.as_str()] == 1 {
                return b.clone();
            }
            let n = next_suffix.entry(b).or_default();
            loop {
                let candidate = format!("{b}{}", suffix(*n));
                *n += 1;
                if used.insert(candidate.clone()) {
                    return candidate;
                }
            }
        })
        .collect()
}

/// One entry per publication, in order: `@article` when a venue is known,
/// `@misc` otherwise. Absent fields are omitted.
pub fn export_bibtex(publications: &[Publication]) -> String {
    let keys = citation_keys(publications);
    let mut out = String::new();
    for (publication, key) in publications.iter().zip(keys) {
        let venue = publication.venue.as_deref().filter(|v| !v.trim().is_empty());
        let kind = if venue.is_some() { "article" } else { "misc" };
        let _ = writeln!(out, "@{kind}{{{key},");
        let mut field = |name: &str, value: &str| {
            let _ = writeln!(out, "  {name} = {{{value}}},");
        };
        if !publication.authors.is_empty() {
            let authors: Vec<String> = publication.authors.iter().map(|a| escape(a.trim())).collect();
            field("author", &authors.join(" and "));
        }
        if !publication.title.is_empty() {
            field("title", &escape(&publication.title));
        }
        if let Some(venue) = venue {
            field("journal", &escape(venue));
        }
        if let Some(year) = publication.year {
            field("year", &year.to_string());
        }
        field("doi", &escape(publication.doi.as_str()));
        out.push_str("}\n\n");
    }
    out
}
