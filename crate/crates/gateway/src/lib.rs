//! Access to bibliographic data: metadata and citation links from two
//! upstream sources (or an offline fixture), merged per DOI, repaired,
//! cached, and fetched with bounded parallelism.

mod cache;
mod detect;
mod error;
pub mod fixture;
mod gateway;
pub mod http;
mod record;
mod repair;
mod source;
pub mod synthetic;

pub use cache::{CacheConfig, CacheStats, Clock, Lookup, ManualClock, RecordCache, SystemClock, DEFAULT_TTL};
pub use detect::detect_dois;
pub use error::{GatewayError, SourceError};
pub use fixture::{load_fixture, CallKind, FixtureData, FixtureEntry, FixtureProvider};
pub use gateway::{
    BatchCursor, BatchItem, Fetched, Gateway, GatewayConfig, DEFAULT_PARALLELISM, LARGE_CITATION_THRESHOLD,
    METADATA_WINDOW, SEARCH_ROWS,
};
pub use http::{CrossrefSource, OpenCitationsSource, RetryPolicy};
pub use record::{FetchScope, SourceFlags, SourceRecord};
pub use repair::{fix_encoding, is_all_caps, repair_metadata, title_case, year_from_doi};
pub use source::{CitationSource, MetadataSource, WorkMetadata};
