//! HTTP routes.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderName, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use futures::future::join_all;
use litscope_core::{
    commit_update, export_bibtex, mark_read, save_session, AuthorScoreConfig, Doi, FilterSpec, NetworkSettings, Tag,
};
use litscope_gateway::{detect_dois, Fetched, GatewayError, METADATA_WINDOW};
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;
use crate::store::{Effect, SessionHandle, SessionStore, Snapshot, WriteKind};
use crate::views::{authors_page, suggestions_page, FoundPublication, SessionView};

pub type AppState = Arc<SessionStore>;

pub const REVISION_HEADER: &str = "x-session-revision";

pub fn router(store: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/import", post(import_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/search", post(search))
        .route("/sessions/{id}/select", post(select))
        .route("/sessions/{id}/stage", post(stage))
        .route("/sessions/{id}/update", post(update))
        .route("/sessions/{id}/read", post(read))
        .route("/sessions/{id}/keywords", put(keywords))
        .route("/sessions/{id}/suggestions", get(suggestions))
        .route("/sessions/{id}/suggestions/more", get(more_suggestions))
        .route("/sessions/{id}/authors", get(authors))
        .route("/sessions/{id}/network", get(network))
        .route("/sessions/{id}/export/bibtex", get(export_selection_bibtex))
        .route("/sessions/{id}/export/session", get(export_session))
        .route("/publications/{*doi}", get(publication))
        .with_state(store)
}

type ApiResult<T> = Result<T, ServiceError>;

fn body<T>(payload: Result<Json<T>, JsonRejection>) -> ApiResult<T> {
    payload.map(|Json(v)| v).map_err(|e| ServiceError::BadRequest(e.body_text()))
}

fn query<T>(params: Result<Query<T>, QueryRejection>) -> ApiResult<T> {
    params.map(|Query(v)| v).map_err(|e| ServiceError::BadRequest(e.body_text()))
}

fn parse_doi(raw: &str) -> ApiResult<Doi> {
    Doi::parse(raw).map_err(ServiceError::from)
}

fn parse_dois(raw: &[String]) -> ApiResult<Vec<Doi>> {
    raw.iter().map(|r| parse_doi(r)).collect()
}

fn with_revision<T: Serialize>(revision: u64, value: &T) -> Response {
    let mut response = Json(value).into_response();
    response
        .headers_mut()
        .insert(HeaderName::from_static(REVISION_HEADER), HeaderValue::from(revision));
    response
}

fn session_view(handle: &SessionHandle, snapshot: &Snapshot) -> Response {
    let view = SessionView::new(&handle.id, snapshot.revision, &snapshot.state, &snapshot.derived);
    with_revision(snapshot.revision, &view)
}

async fn create_session(State(store): State<AppState>) -> Response {
    let handle = store.create();
    let snapshot = handle.snapshot();
    (StatusCode::CREATED, session_view(&handle, &snapshot)).into_response()
}

async fn import_session(State(store): State<AppState>, bytes: Bytes) -> ApiResult<Response> {
    let handle = store.import(&bytes).await?;
    let snapshot = handle.snapshot();
    Ok((StatusCode::CREATED, session_view(&handle, &snapshot)).into_response())
}

async fn get_session(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let handle = store.get(&id).await?;
    Ok(session_view(&handle, &handle.snapshot()))
}

#[derive(Deserialize)]
struct SearchRequest {
    q: String,
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum SearchMode {
    Dois,
    Query,
}

#[derive(Serialize)]
struct SearchResponse {
    mode: SearchMode,
    results: Vec<FoundPublication>,
    not_found: Vec<Doi>,
}

async fn search(
    State(store): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<SearchRequest>, JsonRejection>,
) -> ApiResult<Json<SearchResponse>> {
    let request = body(payload)?;
    let handle = store.get(&id).await?;
    let snapshot = handle.snapshot();
    let gateway = store.engine().gateway();
    let dois = detect_dois(&request.q);
    if dois.is_empty() {
        let hits = gateway.search(&request.q).await?;
        let results = hits.iter().map(|p| FoundPublication::new(p, &snapshot.state)).collect();
        return Ok(Json(SearchResponse { mode: SearchMode::Query, results, not_found: Vec::new() }));
    }
    let fetched = join_all(dois.iter().map(|d| gateway.fetch_metadata(d))).await;
    let mut results = Vec::new();
    let mut not_found = Vec::new();
    for (doi, result) in dois.into_iter().zip(fetched) {
        match result {
            Ok(f) if f.flags.metadata_ok => results.push(FoundPublication::new(&f.publication, &snapshot.state)),
            Ok(_) | Err(GatewayError::NotFound(_)) => not_found.push(doi),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Json(SearchResponse { mode: SearchMode::Dois, results, not_found }))
}

#[derive(Deserialize)]
struct SelectRequest {
    dois: Vec<String>,
}

async fn select(
    State(store): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<SelectRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let dois = parse_dois(&body(payload)?.dois)?;
    let handle = store.get(&id).await?;
    let snapshot = store
        .write(&handle, WriteKind::Update, |state, window| {
            state.select(dois);
            *window = METADATA_WINDOW;
            Ok(Effect::Recompute)
        })
        .await?;
    Ok(session_view(&handle, &snapshot))
}

#[derive(Deserialize)]
struct StageRequest {
    #[serde(default)]
    include: Vec<String>,
    #[serde(default)]
    exclude: Vec<String>,
    /// Drop staged marks instead of adding them.
    #[serde(default)]
    unstage: Vec<String>,
}

async fn stage(
    State(store): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<StageRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let request = body(payload)?;
    let include = parse_dois(&request.include)?;
    let exclude = parse_dois(&request.exclude)?;
    let unstage = parse_dois(&request.unstage)?;
    let handle = store.get(&id).await?;
    let snapshot = store
        .write(&handle, WriteKind::Edit, |state, _| {
            include.into_iter().for_each(|d| state.stage_include(d));
            exclude.into_iter().for_each(|d| state.stage_exclude(d));
            unstage.iter().for_each(|d| state.unstage(d));
            Ok(Effect::StateOnly)
        })
        .await?;
    Ok(session_view(&handle, &snapshot))
}

async fn update(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let handle = store.get(&id).await?;
    let snapshot = store
        .write(&handle, WriteKind::Update, |state, window| {
            *state = commit_update(std::mem::take(state));
            *window = METADATA_WINDOW;
            Ok(Effect::Recompute)
        })
        .await?;
    Ok(session_view(&handle, &snapshot))
}

#[derive(Deserialize)]
struct ReadRequest {
    doi: String,
}

async fn read(
    State(store): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<ReadRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let doi = parse_doi(&body(payload)?.doi)?;
    let handle = store.get(&id).await?;
    let snapshot = store
        .write(&handle, WriteKind::Edit, |state, _| {
            *state = mark_read(std::mem::take(state), doi);
            Ok(Effect::StateOnly)
        })
        .await?;
    Ok(session_view(&handle, &snapshot))
}

#[derive(Deserialize)]
struct KeywordsRequest {
    text: String,
    boost_enabled: Option<bool>,
}

async fn keywords(
    State(store): State<AppState>,
    Path(id): Path<String>,
    payload: Result<Json<KeywordsRequest>, JsonRejection>,
) -> ApiResult<Response> {
    let request = body(payload)?;
    let handle = store.get(&id).await?;
    let snapshot = store
        .write(&handle, WriteKind::Update, |state, _| {
            let boost = request.boost_enabled.unwrap_or(state.boost_enabled);
            state.set_keywords(&request.text, boost);
            Ok(Effect::Recompute)
        })
        .await?;
    Ok(session_view(&handle, &snapshot))
}

#[derive(Deserialize)]
struct SuggestionQuery {
    offset: Option<usize>,
    limit: Option<usize>,
    title: Option<String>,
    year_min: Option<i32>,
    year_max: Option<i32>,
    tag: Option<String>,
}

impl SuggestionQuery {
    fn filter(&self) -> ApiResult<FilterSpec> {
        let tag = match self.tag.as_deref().filter(|t| !t.is_empty()) {
            Some(t) => Some(t.parse::<Tag>().map_err(|e| ServiceError::BadRequest(e.to_string()))?),
            None => None,
        };
        let filter = FilterSpec {
            title_query: self.title.clone().filter(|t| !t.is_empty()),
            year_min: self.year_min,
            year_max: self.year_max,
            tag,
        };
        filter.validate()?;
        Ok(filter)
    }
}

async fn suggestions(
    State(store): State<AppState>,
    Path(id): Path<String>,
    params: Result<Query<SuggestionQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let params = query(params)?;
    let filter = params.filter()?;
    let handle = store.get(&id).await?;
    let snapshot = handle.snapshot();
    let page = suggestions_page(
        &snapshot.derived,
        &snapshot.state,
        &filter,
        params.offset.unwrap_or(0),
        params.limit.unwrap_or(METADATA_WINDOW),
    )?;
    Ok(with_revision(snapshot.revision, &page))
}

/// Loads the next metadata window and returns it as a page.
async fn more_suggestions(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let handle = store.get(&id).await?;
    let previous = handle.snapshot().derived.window;
    let snapshot = store
        .write(&handle, WriteKind::Update, |_, window| {
            *window = previous + METADATA_WINDOW;
            Ok(Effect::Recompute)
        })
        .await?;
    let page = suggestions_page(&snapshot.derived, &snapshot.state, &FilterSpec::default(), previous, METADATA_WINDOW)?;
    Ok(with_revision(snapshot.revision, &page))
}

#[derive(Deserialize)]
struct AuthorQuery {
    #[serde(default)]
    weight_score: bool,
    #[serde(default)]
    boost_first: bool,
    #[serde(default)]
    boost_new: bool,
    limit: Option<usize>,
}

impl AuthorQuery {
    fn config(&self) -> AuthorScoreConfig {
        AuthorScoreConfig::new(self.weight_score, self.boost_first, self.boost_new)
    }
}

async fn authors(
    State(store): State<AppState>,
    Path(id): Path<String>,
    params: Result<Query<AuthorQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let params = query(params)?;
    let handle = store.get(&id).await?;
    let snapshot = handle.snapshot();
    let config = params.config();
    let ranked = store.engine().rank_authors(&snapshot.derived, config);
    Ok(with_revision(snapshot.revision, &authors_page(&ranked, config.to_string(), params.limit)))
}

#[derive(Deserialize)]
struct NetworkQuery {
    n_suggested: Option<usize>,
    n_authors: Option<usize>,
    keywords: Option<bool>,
    authors: Option<bool>,
    #[serde(flatten)]
    author_score: AuthorQuery,
}

async fn network(
    State(store): State<AppState>,
    Path(id): Path<String>,
    params: Result<Query<NetworkQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let params = query(params)?;
    let defaults = NetworkSettings::default();
    let settings = NetworkSettings {
        n_suggested: params.n_suggested.unwrap_or(defaults.n_suggested),
        n_authors: params.n_authors.unwrap_or(defaults.n_authors),
        show_keywords: params.keywords.unwrap_or(defaults.show_keywords),
        show_authors: params.authors.unwrap_or(defaults.show_authors),
    };
    let handle = store.get(&id).await?;
    let snapshot = handle.snapshot();
    let payload = store
        .engine()
        .network(&snapshot.derived, &snapshot.state, settings, params.author_score.config());
    Ok(with_revision(snapshot.revision, &payload))
}

fn download(content_type: &'static str, file_name: &str, body: Vec<u8>) -> Response {
    let disposition = format!("attachment; filename=\"{file_name}\"");
    (
        [
            (header::CONTENT_TYPE, HeaderValue::from_static(content_type)),
            (header::CONTENT_DISPOSITION, HeaderValue::from_str(&disposition).expect("ASCII file name")),
        ],
        body,
    )
        .into_response()
}

async fn export_selection_bibtex(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let handle = store.get(&id).await?;
    let snapshot = handle.snapshot();
    let publications: Vec<_> = snapshot.derived.selected.iter().map(|e| e.publication.clone()).collect();
    let text = export_bibtex(&publications);
    Ok(download("application/x-bibtex; charset=utf-8", "selection.bib", text.into_bytes()))
}

async fn export_session(State(store): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    let handle = store.get(&id).await?;
    let bytes = save_session(&handle.snapshot().state)?;
    Ok(download("application/json", "session.json", bytes))
}

async fn publication(State(store): State<AppState>, Path(raw): Path<String>) -> ApiResult<Json<Fetched>> {
    let doi = parse_doi(&raw)?;
    Ok(Json(store.engine().gateway().fetch_publication(&doi).await?))
}
