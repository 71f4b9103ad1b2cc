//! Metadata repair: year guessing from DOIs, capitalization of ALL-CAPS
//! titles, and substitution of common mis-encodings.

use std::sync::LazyLock;

use litscope_core::Publication;
use regex::{Captures, Regex};

static ENTITY: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"&(#[0-9]{1,7}|#[xX][0-9a-fA-F]{1,6}|[a-zA-Z]{2,8});").unwrap());
static TAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"</?[A-Za-z][A-Za-z0-9:_-]*(\s[^<>]*)?/?>").unwrap());

const NAMED_ENTITIES: &[(&str, &str)] = &[
    ("amp", "&"),
    ("lt", "<"),
    ("gt", ">"),
    ("quot", "\""),
    ("apos", "'"),
    ("nbsp", " "),
    ("ndash", "–"),
    ("mdash", "—"),
    ("lsquo", "‘"),
    ("rsquo", "’"),
    ("ldquo", "“"),
    ("rdquo", "”"),
    ("hellip", "…"),
    ("eacute", "é"),
    ("egrave", "è"),
    ("aacute", "á"),
    ("oacute", "ó"),
    ("uuml", "ü"),
    ("ouml", "ö"),
    ("auml", "ä"),
    ("szlig", "ß"),
    ("ccedil", "ç"),
    ("ntilde", "ñ"),
];

/// UTF-8 text that was decoded as Windows-1252 once.
const MOJIBAKE: &[(&str, &str)] = &[
    ("â€™", "’"),
    ("â€˜", "‘"),
    ("â€œ", "“"),
    ("â€\u{9d}", "”"),
    ("â€“", "–"),
    ("â€”", "—"),
    ("â€¦", "…"),
    ("Ã©", "é"),
    ("Ã¨", "è"),
    ("Ã¡", "á"),
    ("Ã ", "à"),
    ("Ã³", "ó"),
    ("Ã²", "ò"),
    ("Ãº", "ú"),
    ("Ã\u{ad}", "í"),
    ("Ã¼", "ü"),
    ("Ã¶", "ö"),
    ("Ã¤", "ä"),
    ("Ã±", "ñ"),
    ("Ã§", "ç"),
    ("Ã¸", "ø"),
    ("Ã¥", "å"),
    ("ÃŸ", "ß"),
    ("Ãœ", "Ü"),
    ("Ã–", "Ö"),
    ("Ã„", "Ä"),
    ("Ã‰", "É"),
];

/// Words kept lowercase in title case unless they start the title or
/// follow a colon.
const SMALL_WORDS: &[&str] = &[
    "a", "an", "and", "as", "at", "but", "by", "for", "from", "in", "into", "nor", "of", "on", "or", "the", "to",
    "via", "vs", "with",
];

fn decode_entity(caps: &Captures<'_>) -> String {
    let body = &caps[1];
    let decoded = if let Some(hex) = body.strip_prefix("#x").or_else(|| body.strip_prefix("#X")) {
        u32::from_str_radix(hex, 16).ok().and_then(char::from_u32).map(String::from)
    } else if let Some(dec) = body.strip_prefix('#') {
        dec.parse().ok().and_then(char::from_u32).map(String::from)
    } else {
        NAMED_ENTITIES.iter().find(|(n, _)| *n == body).map(|(_, v)| v.to_string())
    };
    decoded
        .filter(|s| !s.chars().any(|c| c.is_control() && c != '\n' && c != '\t'))
        .unwrap_or_else(|| caps[0].to_string())
}

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn fix_encoding_once(text: &str) -> String {
    let mut out = ENTITY.replace_all(text, decode_entity).into_owned();
    for (bad, good) in MOJIBAKE {
        if out.contains(bad) {
            out = out.replace(bad, good);
        }
    }
    let out = TAG.replace_all(&out, " ");
    collapse_whitespace(&out)
}

/// Applies the encoding fixes until nothing changes.
pub fn fix_encoding(text: &str) -> String {
    let mut current = text.to_string();
    for _ in 0..32 {
        let next = fix_encoding_once(&current);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

/// At least two cased letters and none of them lowercase.
pub fn is_all_caps(text: &str) -> bool {
    let mut upper = 0;
    for c in text.chars() {
        if c.is_lowercase() {
            return false;
        }
        if c.is_uppercase() {
            upper += 1;
        }
    }
    upper >= 2
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars.flat_map(char::to_lowercase)).collect(),
        None => String::new(),
    }
}

/// Title case with a small-word list, applied per hyphen-separated part.
pub fn title_case(text: &str) -> String {
    let mut out = Vec::new();
    let mut sentence_start = true;
    for word in text.split(' ') {
        let parts: Vec<String> = word
            .split('-')
            .enumerate()
            .map(|(k, part)| {
                let lower = part.to_lowercase();
                let first_part = k == 0;
                if SMALL_WORDS.contains(&lower.as_str()) && !(first_part && sentence_start) {
                    lower
                } else {
                    capitalize(part)
                }
            })
            .collect();
        out.push(parts.join("-"));
        if !word.is_empty() {
            sentence_start = word.ends_with(':') || word.ends_with('?') || word.ends_with('.');
        }
    }
    out.join(" ")
}

/// First DOI token of exactly four digits within `1900..=current_year + 1`.
pub fn year_from_doi(doi: &str, current_year: i32) -> Option<i32> {
    doi.split(|c: char| !c.is_ascii_digit())
        .filter(|t| t.len() == 4)
        .filter_map(|t| t.parse::<i32>().ok())
        .find(|y| (1900..=current_year + 1).contains(y))
}

fn repair_title(title: &str) -> String {
    let fixed = fix_encoding(title);
    if is_all_caps(&fixed) {
        title_case(&fixed)
    } else {
        fixed
    }
}

/// Repairs `publication` in place of the source data. Idempotent.
pub fn repair_metadata(mut publication: Publication, current_year: i32) -> Publication {
    if publication.year.is_none() {
        publication.year = year_from_doi(publication.doi.as_str(), current_year);
    }
    for _ in 0..16 {
        let title = repair_title(&publication.title);
        if title == publication.title {
            break;
        }
        publication.title = title;
    }
    publication.authors = publication.authors.iter().map(|a| fix_encoding(a)).collect();
    publication.venue = publication.venue.as_deref().map(fix_encoding).filter(|v| !v.is_empty());
    publication.abstract_text = publication.abstract_text.as_deref().map(fix_encoding).filter(|v| !v.is_empty());
    publication
}
