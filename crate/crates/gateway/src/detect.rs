//! DOI detection in free-form search input.

use std::sync::LazyLock;

use litscope_core::Doi;
use regex::Regex;

static DOI_PATTERN: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"10\.[0-9]{4,9}/[^\s]+").unwrap());

const TRAILING: &[char] = &['.', ',', ';', ':', ')', ']', '}', '"', '\'', '>', '!', '?'];

/// DOIs found in `input`, normalized, in order of first appearance. An
/// empty result means the input should be treated as a keyword query.
pub fn detect_dois(input: &str) -> Vec<Doi> {
    let mut found: Vec<Doi> = Vec::new();
    for m in DOI_PATTERN.find_iter(input) {
        let token = m.as_str().trim_end_matches(TRAILING);
        if let Ok(doi) = Doi::parse(token) {
            if !found.contains(&doi) {
                found.push(doi);
            }
        }
    }
    found
}
