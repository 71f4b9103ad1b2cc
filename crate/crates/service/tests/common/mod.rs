#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{HeaderMap, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use litscope_core::{ClassifyConfig, Execution};
use litscope_gateway::{FixtureProvider, Gateway, GatewayConfig, RecordCache};
use litscope_service::{router, Engine, SessionStore};
use serde_json::Value;
use tower::ServiceExt;

pub const YEAR: i32 = 2024;
pub const SEEDS: [&str; 3] = ["10.1000/demo.001", "10.1000/demo.002", "10.1000/demo.003"];
pub const GOLDEN_KEYWORDS: &str = "citation, network|graph";

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/demo_fixture.json")
}

pub fn golden_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/golden_suggestions.json")
}

pub fn provider() -> Arc<FixtureProvider> {
    Arc::new(FixtureProvider::from_path(&fixture_path()).expect("fixture loads"))
}

pub fn engine_with(provider: Arc<FixtureProvider>, exec: Execution) -> Engine {
    let config = GatewayConfig { current_year: YEAR, ..Default::default() };
    let gateway = Gateway::with_provider(provider, RecordCache::in_memory(), config);
    Engine::new(gateway, ClassifyConfig::new(YEAR), exec)
}

pub struct Api {
    pub router: Router,
    pub provider: Arc<FixtureProvider>,
}

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub bytes: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.bytes).unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.text()))
    }

    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.bytes).into_owned()
    }

    pub fn revision(&self) -> u64 {
        self.headers["x-session-revision"].to_str().unwrap().parse().unwrap()
    }
}

impl Api {
    pub fn new() -> Self {
        Self::with_provider(provider(), Execution::Parallel)
    }

    pub fn with_provider(provider: Arc<FixtureProvider>, exec: Execution) -> Self {
        let store = Arc::new(SessionStore::new(engine_with(provider.clone(), exec), None));
        Api { router: router(store), provider }
    }

    pub async fn call(&self, method: Method, uri: &str, body: Option<Value>) -> Reply {
        let mut request = Request::builder().method(method).uri(uri);
        let body = match body {
            Some(v) => {
                request = request.header("content-type", "application/json");
                Body::from(serde_json::to_vec(&v).unwrap())
            }
            None => Body::empty(),
        };
        let response = self.router.clone().oneshot(request.body(body).unwrap()).await.unwrap();
        let status = response.status();
        let headers = response.headers().clone();
        let bytes = response.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply { status, headers, bytes }
    }

    pub async fn get(&self, uri: &str) -> Reply {
        self.call(Method::GET, uri, None).await
    }

    pub async fn post(&self, uri: &str, body: Value) -> Reply {
        self.call(Method::POST, uri, Some(body)).await
    }

    pub async fn new_session(&self) -> String {
        let reply = self.call(Method::POST, "/sessions", None).await;
        assert_eq!(reply.status, StatusCode::CREATED);
        reply.json()["id"].as_str().unwrap().to_string()
    }

    /// Seeds, keywords, the top two suggestions staged and committed, then
    /// the "new" filter. The CLI test replays the same steps.
    pub async fn golden_scenario(&self) -> Vec<u8> {
        let id = self.new_session().await;
        let ok = |r: &Reply| assert!(r.status.is_success(), "{} {}", r.status, r.text());
        ok(&self.post(&format!("/sessions/{id}/select"), serde_json::json!({"dois": SEEDS})).await);
        let keywords = serde_json::json!({"text": GOLDEN_KEYWORDS, "boost_enabled": true});
        ok(&self.call(Method::PUT, &format!("/sessions/{id}/keywords"), Some(keywords)).await);
        let page = self.get(&format!("/sessions/{id}/suggestions?limit=2")).await;
        ok(&page);
        let top: Vec<Value> = page.json()["entries"].as_array().unwrap().iter().map(|e| e["doi"].clone()).collect();
        ok(&self.post(&format!("/sessions/{id}/stage"), serde_json::json!({"include": top})).await);
        ok(&self.call(Method::POST, &format!("/sessions/{id}/update"), None).await);
        let filtered = self.get(&format!("/sessions/{id}/suggestions?tag=new")).await;
        ok(&filtered);
        pretty(&filtered.json())
    }
}

pub fn pretty(value: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).unwrap();
    bytes.push(b'\n');
    bytes
}
