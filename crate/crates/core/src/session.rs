//! Session state: the selection, exclusions, keywords and read marks, plus
//! the staged include/exclude marks that only take effect on an explicit
//! update.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::doi::Doi;
use crate::error::{Error, Result};
use crate::keywords::KeywordSpec;

pub const SESSION_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionState {
    pub selected: Vec<Doi>,
    pub excluded: Vec<Doi>,
    /// Canonical keyword syntax.
    pub keyword_text: String,
    pub boost_enabled: bool,
    pub staged_inclusions: BTreeSet<Doi>,
    pub staged_exclusions: BTreeSet<Doi>,
    pub read_dois: BTreeSet<Doi>,
}

impl Default for SessionState {
    fn default() -> Self {
        SessionState {
            selected: Vec::new(),
            excluded: Vec::new(),
            keyword_text: String::new(),
            boost_enabled: true,
            staged_inclusions: BTreeSet::new(),
            staged_exclusions: BTreeSet::new(),
            read_dois: BTreeSet::new(),
        }
    }
}

impl SessionState {
    pub fn keywords(&self) -> KeywordSpec {
        KeywordSpec::parse(&self.keyword_text)
    }

    pub fn set_keywords(&mut self, text: &str, boost_enabled: bool) {
        self.keyword_text = KeywordSpec::parse(text).render();
        self.boost_enabled = boost_enabled;
    }

    pub fn selected_set(&self) -> BTreeSet<Doi> {
        self.selected.iter().cloned().collect()
    }

    pub fn excluded_set(&self) -> BTreeSet<Doi> {
        self.excluded.iter().cloned().collect()
    }

    pub fn has_staged_changes(&self) -> bool {
        !self.staged_inclusions.is_empty() || !self.staged_exclusions.is_empty()
    }

    /// Marks `doi` for inclusion on the next update.
    pub fn stage_include(&mut self, doi: Doi) {
        self.staged_exclusions.remove(&doi);
        self.staged_inclusions.insert(doi);
    }

    /// Marks `doi` for exclusion on the next update.
    pub fn stage_exclude(&mut self, doi: Doi) {
        self.staged_inclusions.remove(&doi);
        self.staged_exclusions.insert(doi);
    }

    /// Drops any staged mark on `doi`.
    pub fn unstage(&mut self, doi: &Doi) {
        self.staged_inclusions.remove(doi);
        self.staged_exclusions.remove(doi);
    }

    /// Adds publications to the selection immediately, bypassing staging.
    pub fn select(&mut self, dois: impl IntoIterator<Item = Doi>) {
        for doi in dois {
            self.excluded.retain(|d| *d != doi);
            self.unstage(&doi);
            if !self.selected.contains(&doi) {
                self.selected.push(doi);
            }
        }
    }

    pub fn is_unread(&self, doi: &Doi) -> bool {
        !self.read_dois.contains(doi)
    }
}

/// Applies the staged marks. Included DOIs are appended to the selection
/// (leaving the exclusions if they were there); excluded DOIs are appended
/// to the exclusions (leaving the selection if they were there).
pub fn commit_update(mut state: SessionState) -> SessionState {
    let inclusions = std::mem::take(&mut state.staged_inclusions);
    let exclusions = std::mem::take(&mut state.staged_exclusions);
    for doi in inclusions {
        state.excluded.retain(|d| *d != doi);
        if !state.selected.contains(&doi) {
            state.selected.push(doi);
        }
    }
    for doi in exclusions {
        state.selected.retain(|d| *d != doi);
        if !state.excluded.contains(&doi) {
            state.excluded.push(doi);
        }
    }
    state
}

/// Records that `doi` has been looked at.
pub fn mark_read(mut state: SessionState, doi: Doi) -> SessionState {
    state.read_dois.insert(doi);
    state
}

#[derive(Serialize)]
struct SessionFileOut<'a> {
    version: u32,
    selected: &'a [Doi],
    excluded: &'a [Doi],
    keywords: &'a str,
    boost_enabled: bool,
    read: &'a BTreeSet<Doi>,
}

#[derive(Deserialize)]
struct SessionFileIn {
    version: u32,
    selected: Vec<String>,
    #[serde(default)]
    excluded: Vec<String>,
    #[serde(default)]
    keywords: String,
    #[serde(default = "default_boost")]
    boost_enabled: bool,
    #[serde(default)]
    read: Vec<String>,
}

fn default_boost() -> bool {
    true
}

/// Serializes a committed session as pretty-printed JSON.
pub fn save_session(state: &SessionState) -> Result<Vec<u8>> {
    if state.has_staged_changes() {
        return Err(Error::StagedChangesPending);
    }
    let file = SessionFileOut {
        version: SESSION_FORMAT_VERSION,
        selected: &state.selected,
        excluded: &state.excluded,
        keywords: &state.keyword_text,
        boost_enabled: state.boost_enabled,
        read: &state.read_dois,
    };
    let mut bytes = serde_json::to_vec_pretty(&file).expect("session serialization cannot fail");
    bytes.push(b'\n');
    Ok(bytes)
}

fn parse_dois(field: &str, raw: Vec<String>) -> Result<Vec<Doi>> {
    let mut out: Vec<Doi> = Vec::with_capacity(raw.len());
    for r in raw {
        let doi = Doi::parse(&r).map_err(|_| Error::InvalidSessionFile(format!("{field}: malformed DOI {r:?}")))?;
        if !out.contains(&doi) {
            out.push(doi);
        }
    }
    Ok(out)
}

/// Parses a session file. Unknown fields are ignored; `excluded`, `read`,
/// `keywords` and `boost_enabled` may be absent.
pub fn load_session(bytes: &[u8]) -> Result<SessionState> {
    let file: SessionFileIn =
        serde_json::from_slice(bytes).map_err(|e| Error::InvalidSessionFile(e.to_string()))?;
    if file.version != SESSION_FORMAT_VERSION {
        return Err(Error::InvalidSessionFile(format!("unsupported version {}", file.version)));
    }
    let selected = parse_dois("selected", file.selected)?;
    let excluded = parse_dois("excluded", file.excluded)?;
    if let Some(both) = selected.iter().find(|d| excluded.contains(d)) {
        return Err(Error::InvalidSessionFile(format!("{both} is both selected and excluded")));
    }
    let read_dois = parse_dois("read", file.read)?.into_iter().collect();
    Ok(SessionState {
        selected,
        excluded,
        keyword_text: KeywordSpec::parse(&file.keywords).render(),
        boost_enabled: file.boost_enabled,
        staged_inclusions: BTreeSet::new(),
        staged_exclusions: BTreeSet::new(),
        read_dois,
    })
}
