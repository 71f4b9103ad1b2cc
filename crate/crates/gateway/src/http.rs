//! HTTP clients for the public metadata (Crossref) and citation-link
//! (OpenCitations) services.

use std::time::Duration;

use async_trait::async_trait;
use litscope_core::{CitationCounts, Doi};
use reqwest::{Client, StatusCode};
use serde_json::Value;

use crate::error::SourceError;
use crate::source::{CitationSource, MetadataSource, WorkMetadata};

pub const CROSSREF_URL: &str = "https://api.crossref.org";
pub const OPENCITATIONS_URL: &str = "https://api.opencitations.net/index/v2";

/// Retries on 429, 5xx and transport errors with exponential backoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { max_retries: 3, base_delay: Duration::from_millis(250) }
    }
}

#[derive(Debug, Clone)]
struct JsonClient {
    client: Client,
    retry: RetryPolicy,
    headers: Vec<(String, String)>,
}

impl JsonClient {
    fn new(retry: RetryPolicy, timeout: Duration) -> Self {
        let client = Client::builder()
            .timeout(timeout)
            .user_agent(concat!("litscope/", env!("CARGO_PKG_VERSION")))
            .build()
            .expect("TLS backend is available");
        JsonClient { client, retry, headers: Vec::new() }
    }

    async fn get(&self, url: &str) -> Result<Value, SourceError> {
        let mut attempt = 0;
        loop {
            let mut request = self.client.get(url);
            for (name, value) in &self.headers {
                request = request.header(name, value);
            }
            let outcome = match request.send().await {
                Ok(response) => match response.status() {
                    StatusCode::NOT_FOUND => return Err(SourceError::NotFound),
                    s if s.is_success() => {
                        return response.json::<Value>().await.map_err(|e| SourceError::Unavailable(e.to_string()))
                    }
                    s if s == StatusCode::TOO_MANY_REQUESTS || s.is_server_error() => format!("HTTP {s}"),
                    s => return Err(SourceError::Unavailable(format!("HTTP {s}"))),
                },
                Err(e) => e.to_string(),
            };
            if attempt >= self.retry.max_retries {
                return Err(SourceError::Unavailable(outcome));
            }
            let delay = self.retry.base_delay * 2u32.saturating_pow(attempt);
            tracing::debug!(url, attempt, error = %outcome, "retrying upstream request");
            tokio::time::sleep(delay).await;
            attempt += 1;
        }
    }
}

/// DOIs may contain `#` and `?`, which would otherwise end the path.
fn doi_path(doi: &Doi) -> String {
    doi.as_str().replace('%', "%25").replace('#', "%23").replace('?', "%3F")
}

fn trimmed_base(base: &str) -> String {
    base.trim_end_matches('/').to_string()
}

#[derive(Debug, Clone)]
pub struct CrossrefSource {
    base: String,
    http: JsonClient,
}

impl CrossrefSource {
    pub fn new(base: &str, retry: RetryPolicy) -> Self {
        CrossrefSource { base: trimmed_base(base), http: JsonClient::new(retry, Duration::from_secs(30)) }
    }
}

fn first_string(value: &Value) -> Option<String> {
    match value {
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => items.iter().find_map(Value::as_str).map(str::to_string),
        _ => None,
    }
    .map(|s| s.trim().to_string())
    .filter(|s| !s.is_empty())
}

fn issued_year(work: &Value) -> Option<i32> {
    ["issued", "published-print", "published-online", "published", "created"]
        .iter()
        .find_map(|key| work.get(key)?.get("date-parts")?.get(0)?.get(0)?.as_i64())
        .and_then(|y| i32::try_from(y).ok())
}

fn count(work: &Value, key: &str) -> u32 {
    work.get(key).and_then(Value::as_u64).map_or(0, |n| n.min(u32::MAX as u64) as u32)
}

/// Maps one Crossref work object onto [`WorkMetadata`].
pub fn parse_crossref_work(work: &Value) -> WorkMetadata {
    let mut authors = Vec::new();
    let mut orcids = Vec::new();
    for author in work.get("author").and_then(Value::as_array).into_iter().flatten() {
        let given = author.get("given").and_then(Value::as_str).unwrap_or("").trim();
        let family = author.get("family").and_then(Value::as_str).unwrap_or("").trim();
        let name = match (given.is_empty(), family.is_empty()) {
            (_, true) => author.get("name").and_then(Value::as_str).unwrap_or(given).trim().to_string(),
            (true, false) => family.to_string(),
            (false, false) => format!("{given} {family}"),
        };
        if name.is_empty() {
            continue;
        }
        authors.push(name);
        orcids.push(author.get("ORCID").and_then(Value::as_str).map(str::to_string));
    }
    WorkMetadata {
        title: work.get("title").and_then(first_string).unwrap_or_default(),
        authors,
        orcids,
        year: issued_year(work),
        venue: work.get("container-title").and_then(first_string),
        abstract_text: work.get("abstract").and_then(first_string),
        counts: CitationCounts {
            n_citing: count(work, "references-count"),
            n_cited_by: count(work, "is-referenced-by-count"),
        },
    }
}

#[async_trait]
impl MetadataSource for CrossrefSource {
    async fn work(&self, doi: &Doi) -> Result<WorkMetadata, SourceError> {
        let body = self.http.get(&format!("{}/works/{}", self.base, doi_path(doi))).await?;
        let work = body.get("message").ok_or(SourceError::NotFound)?;
        Ok(parse_crossref_work(work))
    }

    async fn query(&self, query: &str, rows: usize) -> Result<Vec<(Doi, WorkMetadata)>, SourceError> {
        let mut url = url::Url::parse(&format!("{}/works", self.base))
            .map_err(|e| SourceError::Unavailable(format!("bad base URL: {e}")))?;
        url.query_pairs_mut()
            .append_pair("query.bibliographic", query)
            .append_pair("rows", &rows.to_string());
        let body = self.http.get(url.as_str()).await?;
        let items = body.pointer("/message/items").and_then(Value::as_array).cloned().unwrap_or_default();
        Ok(items
            .iter()
            .filter_map(|item| {
                let doi = Doi::parse(item.get("DOI")?.as_str()?).ok()?;
                Some((doi, parse_crossref_work(item)))
            })
            .take(rows)
            .collect())
    }
}

#[derive(Debug, Clone)]
pub struct OpenCitationsSource {
    base: String,
    http: JsonClient,
}

impl OpenCitationsSource {
    pub fn new(base: &str, retry: RetryPolicy) -> Self {
        OpenCitationsSource { base: trimmed_base(base), http: JsonClient::new(retry, Duration::from_secs(60)) }
    }

    /// Sends the optional access token the service accepts.
    pub fn with_access_token(mut self, token: &str) -> Self {
        self.http.headers.push(("authorization".into(), token.into()));
        self
    }

    async fn linked(&self, operation: &str, field: &str, doi: &Doi) -> Result<Vec<Doi>, SourceError> {
        let url = format!("{}/{operation}/doi:{}", self.base, doi_path(doi));
        let body = match self.http.get(&url).await {
            Err(SourceError::NotFound) => return Ok(Vec::new()),
            other => other?,
        };
        let rows = body.as_array().cloned().unwrap_or_default();
        let mut out: Vec<Doi> = rows
            .iter()
            .filter_map(|row| row.get(field)?.as_str().and_then(doi_from_ids))
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// The `doi:` entry of a space-separated OpenCitations identifier list.
pub fn doi_from_ids(ids: &str) -> Option<Doi> {
    ids.split_whitespace()
        .find_map(|id| id.strip_prefix("doi:"))
        .and_then(|raw| Doi::parse(raw).ok())
}

#[async_trait]
impl CitationSource for OpenCitationsSource {
    async fn references(&self, doi: &Doi) -> Result<Vec<Doi>, SourceError> {
        self.linked("references", "cited", doi).await
    }

    async fn citations(&self, doi: &Doi) -> Result<Vec<Doi>, SourceError> {
        self.linked("citations", "citing", doi).await
    }
}
