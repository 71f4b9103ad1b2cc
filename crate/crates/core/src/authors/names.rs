//! Author-name unification and parsing.

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

/// Letters that do not decompose into a base letter plus combining marks.
/// Accented letters (é, ü, å, ...) are handled by canonical decomposition.
const SPECIAL_LETTERS: &[(char, &str)] = &[
    ('ß', "ss"),
    ('ẞ', "ss"),
    ('æ', "ae"),
    ('Æ', "ae"),
    ('œ', "oe"),
    ('Œ', "oe"),
    ('ø', "o"),
    ('Ø', "o"),
    ('đ', "d"),
    ('Đ', "d"),
    ('ð', "d"),
    ('Ð', "d"),
    ('ł', "l"),
    ('Ł', "l"),
    ('þ', "th"),
    ('Þ', "th"),
    ('ı', "i"),
    ('ħ', "h"),
    ('Ħ', "h"),
    ('ŧ', "t"),
    ('Ŧ', "t"),
    ('ŋ', "n"),
    ('Ŋ', "n"),
    ('’', "'"),
    ('‘', "'"),
    ('ʼ', "'"),
    ('‐', "-"),
    ('‑', "-"),
    ('–', "-"),
];

fn is_kept_punctuation(c: char) -> bool {
    matches!(c, '.' | ',' | '-' | '\'')
}

/// Lowercase ASCII-folded form of an author name.
///
/// Diacritics are removed (`ü` becomes `u`, not `ue`), special letters are
/// folded through a fixed table, whitespace runs collapse to one space and
/// punctuation other than `.` `,` `-` `'` is dropped.
pub fn unify_name(name: &str) -> String {
    let mut folded = String::with_capacity(name.len());
    for c in name.nfd().filter(|c| !is_combining_mark(*c)) {
        match SPECIAL_LETTERS.iter().find(|(from, _)| *from == c) {
            Some((_, to)) => folded.push_str(to),
            None => folded.extend(c.to_lowercase()),
        }
    }

    let mut out = String::with_capacity(folded.len());
    let mut pending_space = false;
    for c in folded.chars() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
        } else if c.is_alphanumeric() || is_kept_punctuation(c) {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}

/// An author name split into surname and given names, both unified.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParsedName {
    pub surname: String,
    pub given: Vec<String>,
}

impl ParsedName {
    /// Accepts `Surname, Given Names` or `Given Names Surname`.
    pub fn parse(raw: &str) -> Option<ParsedName> {
        let unified = unify_name(raw);
        let (surname, given) = match unified.split_once(',') {
            Some((surname, given)) => (surname.trim().to_string(), given.to_string()),
            None => {
                let mut tokens: Vec<&str> = unified.split(' ').filter(|t| !t.is_empty()).collect();
                let surname = tokens.pop()?.to_string();
                (surname, tokens.join(" "))
            }
        };
        let surname: String = surname
            .chars()
            .filter(|c| !matches!(c, '.' | ','))
            .collect::<String>()
            .trim()
            .to_string();
        if surname.is_empty() {
            return None;
        }
        let given = given
            .split([' ', '.', '-', ','])
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect();
        Some(ParsedName { surname, given })
    }

    /// Given names reduced to initials (`J.`, `J`, `J.-P.`).
    pub fn is_abbreviated(&self) -> bool {
        !self.given.is_empty() && self.given.iter().all(|t| t.chars().count() == 1)
    }

    pub fn initials(&self) -> Vec<char> {
        self.given.iter().filter_map(|t| t.chars().next()).collect()
    }

    /// Order-independent identity: given names then surname.
    pub fn canonical(&self) -> String {
        let mut parts = self.given.clone();
        parts.push(self.surname.clone());
        parts.join(" ")
    }

    /// Whether this abbreviated name could stand for `full`: same surname
    /// and its initials are a leading part of `full`'s initials.
    pub fn abbreviates(&self, full: &ParsedName) -> bool {
        if self.surname != full.surname || full.is_abbreviated() || full.given.is_empty() {
            return false;
        }
        let mine = self.initials();
        let theirs = full.initials();
        !mine.is_empty() && theirs.starts_with(&mine)
    }
}

/// ORCID in bare `0000-0000-0000-000X` form.
pub fn normalize_orcid(raw: &str) -> Option<String> {
    let trimmed = raw.trim();
    let bare = trimmed
        .strip_prefix("https://orcid.org/")
        .or_else(|| trimmed.strip_prefix("http://orcid.org/"))
        .unwrap_or(trimmed);
    let bare = bare.trim().to_uppercase();
    (!bare.is_empty()).then_some(bare)
}
