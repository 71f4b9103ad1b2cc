//! Citation-based literature suggestions.
//!
//! Starting from a set of selected publications, every publication linked to
//! the selection by a citation is scored by its links to and from the
//! selection, optionally boosted by keyword matches in its title, then
//! tagged and ranked. The crate also ranks the authors of the selection,
//! assembles citation-network payloads for visualization and handles session
//! files and BibTeX export.
//!
//! Everything here is synchronous and free of I/O; fetching data is the job
//! of the gateway crate.

pub mod authors;
pub mod bibtex;
pub mod classify;
pub mod doi;
pub mod error;
pub mod exec;
pub mod index;
pub mod keywords;
pub mod network;
pub mod publication;
pub mod score;
pub mod session;
pub mod suggest;

pub use authors::{disambiguate, rank_authors, top_authors, AuthorRecord, AuthorScoreConfig, Contribution};
pub use classify::{classify, ClassifyConfig, Tag, TagSet};
pub use doi::{normalize_doi, Doi};
pub use error::{Error, Result};
pub use exec::Execution;
pub use index::CitationIndex;
pub use keywords::{count_keyword_matches, match_spans, parse_keyword_spec, KeywordMatches, KeywordSpec, MatchSpan};
pub use network::{build_network, NetworkInput, NetworkPayload, NetworkSettings};
pub use publication::{CitationCounts, Publication};
pub use score::{boost_glyph_level, candidate_set, ScoreBreakdown, ScoringContext};
pub use bibtex::{citation_keys, export_bibtex};
pub use session::{commit_update, load_session, mark_read, save_session, SessionState};
pub use suggest::{apply_filter, build_suggestions, rank, score_selection, FilterSpec, ScoredPublication, SuggestionList};
