mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Duration;

use axum::http::{Method, StatusCode};
use common::*;
use litscope_core::{apply_filter, Execution, FilterSpec, SessionState, Tag};
use litscope_gateway::{CallKind, FixtureProvider};
use serde_json::{json, Value};

async fn seeded(api: &Api) -> String {
    let id = api.new_session().await;
    let reply = api.post(&format!("/sessions/{id}/select"), json!({ "dois": SEEDS })).await;
    assert_eq!(reply.status, StatusCode::OK, "{}", reply.text());
    id
}

fn dois(page: &Value) -> Vec<String> {
    page["entries"].as_array().unwrap().iter().map(|e| e["doi"].as_str().unwrap().to_string()).collect()
}

#[tokio::test]
async fn new_session_is_empty() {
    let api = Api::new();
    let reply = api.call(Method::POST, "/sessions", None).await;
    assert_eq!(reply.status, StatusCode::CREATED);
    assert_eq!(reply.revision(), 0);
    let view = reply.json();
    assert_eq!(view["summary"]["total_candidates"], 0);
    assert_eq!(view["selected"], json!([]));
    assert_eq!(api.provider.total_calls(), 0);
}

#[tokio::test]
async fn selection_loads_first_window_then_more() {
    let api = Api::new();
    let id = seeded(&api).await;
    let page = api.get(&format!("/sessions/{id}/suggestions")).await;
    assert_eq!(page.revision(), 1);
    let page = page.json();
    assert_eq!(page["total_candidates"], 128);
    assert_eq!(page["window"], 50);
    assert_eq!(page["entries"].as_array().unwrap().len(), 50);
    assert_eq!(page["more_available"], true);

    let more = api.get(&format!("/sessions/{id}/suggestions/more")).await;
    assert_eq!(more.revision(), 2);
    let more = more.json();
    assert_eq!(more["window"], 100);
    assert_eq!(more["offset"], 50);
    assert_eq!(more["entries"].as_array().unwrap().len(), 50);

    let all = api.get(&format!("/sessions/{id}/suggestions?limit=1000")).await.json();
    let listed = dois(&all);
    assert_eq!(listed.len(), 100);
    // the first window keeps its place in the longer list
    assert_eq!(&listed[..50], dois(&page).as_slice());
    assert_eq!(&listed[50..], dois(&more).as_slice());

    let last = api.get(&format!("/sessions/{id}/suggestions/more")).await.json();
    assert_eq!(last["window"], 128);
    assert_eq!(last["entries"].as_array().unwrap().len(), 28);
    assert_eq!(last["more_available"], false);
}

#[tokio::test]
async fn suggestions_are_ranked_and_exclude_the_selection() {
    let api = Api::new();
    let id = seeded(&api).await;
    let page = api.get(&format!("/sessions/{id}/suggestions")).await.json();
    let key = |e: &Value| {
        let s = &e["score"];
        (s["s"].as_u64().unwrap(), s["i"].as_u64().unwrap(), s["o"].as_u64().unwrap())
    };
    let entries = page["entries"].as_array().unwrap();
    for pair in entries.windows(2) {
        let (a, b) = (key(&pair[0]), key(&pair[1]));
        assert!(a > b || (a == b && pair[0]["doi"].as_str() < pair[1]["doi"].as_str()));
    }
    for e in entries {
        assert!(!SEEDS.contains(&e["doi"].as_str().unwrap()));
        let s = &e["score"];
        assert_eq!(s["s"], s["o"].as_u64().unwrap() + s["i"].as_u64().unwrap());
    }
}

#[tokio::test]
async fn keywords_boost_matching_titles() {
    let api = Api::new();
    let id = seeded(&api).await;
    let reply = api
        .call(Method::PUT, &format!("/sessions/{id}/keywords"), Some(json!({"text": "network|graph,  citation"})))
        .await;
    assert_eq!(reply.status, StatusCode::OK);
    assert_eq!(reply.json()["state"]["keywords"], "NETWORK|GRAPH, CITATION");
    let page = api.get(&format!("/sessions/{id}/suggestions")).await.json();
    let top = &page["entries"][0];
    assert!(top["score"]["b"].as_u64().unwrap() >= 1);
    for e in page["entries"].as_array().unwrap() {
        let s = &e["score"];
        let base = s["o"].as_u64().unwrap() + s["i"].as_u64().unwrap();
        assert_eq!(s["s"].as_u64().unwrap(), base << s["b"].as_u64().unwrap());
        assert_eq!(e["boost_level"], s["b"].as_u64().unwrap().min(3));
        let spans = e["title_spans"].as_array().unwrap();
        assert_eq!(spans.is_empty(), s["b"] == 0);
    }

    let off = api
        .call(Method::PUT, &format!("/sessions/{id}/keywords"), Some(json!({"text": "network", "boost_enabled": false})))
        .await
        .json();
    assert_eq!(off["state"]["boost_enabled"], false);
    let page = api.get(&format!("/sessions/{id}/suggestions")).await.json();
    // matches are still reported, but no longer change the score
    for e in page["entries"].as_array().unwrap() {
        let s = &e["score"];
        assert_eq!(s["s"].as_u64().unwrap(), s["o"].as_u64().unwrap() + s["i"].as_u64().unwrap());
    }
}

#[tokio::test]
async fn staging_only_applies_on_update() {
    let api = Api::new();
    let id = seeded(&api).await;
    let before = api.get(&format!("/sessions/{id}/suggestions")).await.json();
    let picked = dois(&before)[..2].to_vec();
    let dropped = dois(&before)[2].clone();

    let staged = api.post(&format!("/sessions/{id}/stage"), json!({"include": picked, "exclude": [dropped]})).await;
    assert_eq!(staged.revision(), 2);
    let view = staged.json();
    assert_eq!(view["state"]["selected"].as_array().unwrap().len(), 3);
    assert_eq!(view["state"]["staged_include"].as_array().unwrap().len(), 2);
    let unchanged = api.get(&format!("/sessions/{id}/suggestions")).await.json();
    assert_eq!(dois(&unchanged), dois(&before));

    let export = api.get(&format!("/sessions/{id}/export/session")).await;
    assert_eq!(export.status, StatusCode::CONFLICT);
    assert_eq!(export.json()["error"]["code"], "conflict");

    let updated = api.call(Method::POST, &format!("/sessions/{id}/update"), None).await.json();
    let selected: Vec<&str> = updated["state"]["selected"].as_array().unwrap().iter().map(|d| d.as_str().unwrap()).collect();
    assert_eq!(selected.len(), 5);
    assert!(picked.iter().all(|p| selected.contains(&p.as_str())));
    assert_eq!(updated["state"]["excluded"], json!([dropped]));
    assert_eq!(updated["state"]["staged_include"], json!([]));
    let after = dois(&api.get(&format!("/sessions/{id}/suggestions?limit=1000")).await.json());
    assert!(!after.contains(&dropped));
    assert!(picked.iter().all(|p| !after.contains(p)));

    let export = api.get(&format!("/sessions/{id}/export/session")).await;
    assert_eq!(export.status, StatusCode::OK);
    let state: SessionState = litscope_core::load_session(&export.bytes).unwrap();
    assert_eq!(state.selected.len(), 5);
}

#[tokio::test]
async fn session_export_imports_to_the_same_suggestions() {
    let api = Api::new();
    let id = seeded(&api).await;
    api.call(Method::PUT, &format!("/sessions/{id}/keywords"), Some(json!({"text": "graph"}))).await;
    let original = api.get(&format!("/sessions/{id}/suggestions")).await;
    let file = api.get(&format!("/sessions/{id}/export/session")).await;
    assert!(file.headers["content-disposition"].to_str().unwrap().contains("session.json"));

    let imported = api.call(Method::POST, "/sessions/import", None).await;
    assert_eq!(imported.status, StatusCode::BAD_REQUEST);
    let router = api.router.clone();
    use tower::ServiceExt;
    let request = axum::http::Request::post("/sessions/import").body(axum::body::Body::from(file.bytes.clone())).unwrap();
    let response = router.oneshot(request).await.unwrap();
    assert_eq!(response.status(), StatusCode::CREATED);
    let body = http_body_util::BodyExt::collect(response.into_body()).await.unwrap().to_bytes();
    let new_id = serde_json::from_slice::<Value>(&body).unwrap()["id"].as_str().unwrap().to_string();
    assert_ne!(new_id, id);
    let copy = api.get(&format!("/sessions/{new_id}/suggestions")).await;
    assert_eq!(copy.bytes, original.bytes);
}

#[tokio::test]
async fn filters_match_the_engine_filter() {
    let api = Api::new();
    let id = seeded(&api).await;
    let all = api.get(&format!("/sessions/{id}/suggestions")).await.json();
    let new = api.get(&format!("/sessions/{id}/suggestions?tag=new")).await.json();
    let expected: Vec<String> = all["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["tags"].as_array().unwrap().contains(&json!("new")))
        .map(|e| e["doi"].as_str().unwrap().to_string())
        .collect();
    assert!(!expected.is_empty());
    assert_eq!(dois(&new), expected);
    assert_eq!(new["filtered_count"], expected.len());

    // same answer as filtering the engine's list directly
    let engine = engine_with(api.provider.clone(), Execution::Sequential);
    let mut state = SessionState::default();
    state.select(SEEDS.iter().map(|d| d.parse().unwrap()));
    let derived = engine.recompute(&state, 50).await.unwrap();
    let filter = FilterSpec { tag: Some(Tag::New), ..Default::default() };
    let direct = apply_filter(&derived.suggestions, &filter).unwrap();
    let direct: Vec<String> = direct.entries.iter().map(|e| e.doi().to_string()).collect();
    assert_eq!(direct, expected);

    let years = api.get(&format!("/sessions/{id}/suggestions?year_min=2010&year_max=2015")).await.json();
    for e in years["entries"].as_array().unwrap() {
        let y = e["year"].as_i64().unwrap();
        assert!((2010..=2015).contains(&y));
    }
    let titled = api.get(&format!("/sessions/{id}/suggestions?title=TIMELINE")).await.json();
    assert!(!dois(&titled).is_empty());
    for e in titled["entries"].as_array().unwrap() {
        assert!(e["title"].as_str().unwrap().to_lowercase().contains("timeline"));
    }
}

#[tokio::test]
async fn bad_requests_are_json_errors() {
    let api = Api::new();
    let id = seeded(&api).await;
    for uri in [
        format!("/sessions/{id}/suggestions?tag=famous"),
        format!("/sessions/{id}/suggestions?year_min=2020&year_max=2010"),
        format!("/sessions/{id}/suggestions?offset=minus"),
    ] {
        let reply = api.get(&uri).await;
        assert_eq!(reply.status, StatusCode::BAD_REQUEST, "{uri}");
        assert_eq!(reply.json()["error"]["code"], "bad_request");
    }
    let reply = api.post(&format!("/sessions/{id}/select"), json!({"dois": ["not a doi"]})).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    let reply = api.post(&format!("/sessions/{id}/select"), json!({"wrong": 1})).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    let reply = api.get("/sessions/0123456789abcdef/suggestions").await;
    assert_eq!(reply.status, StatusCode::NOT_FOUND);
    assert_eq!(reply.json()["error"]["code"], "not_found");
}

#[tokio::test]
async fn search_by_text_and_by_doi() {
    let api = Api::new();
    let id = api.new_session().await;
    let found = api.post(&format!("/sessions/{id}/search"), json!({"q": "citation visualization"})).await.json();
    assert_eq!(found["mode"], "query");
    let results = found["results"].as_array().unwrap();
    assert!(!results.is_empty() && results.len() <= 20);

    let q = "see https://doi.org/10.1000/demo.004 and doi:10.1000/DEMO.001, plus 10.1000/missing.9.";
    let found = api.post(&format!("/sessions/{id}/search"), json!({ "q": q })).await.json();
    assert_eq!(found["mode"], "dois");
    let titles: Vec<&str> = found["results"].as_array().unwrap().iter().map(|r| r["title"].as_str().unwrap()).collect();
    assert_eq!(titles, ["A Survey of Citation Visualization Techniques", "Citation Visualization: Exploring Scholarly Literature"]);
    assert_eq!(found["not_found"], json!(["10.1000/missing.9"]));

    let empty = api.post(&format!("/sessions/{id}/search"), json!({"q": "   "})).await;
    assert_eq!(empty.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn publication_lookup_repairs_metadata() {
    let api = Api::new();
    let reply = api.get("/publications/10.1000/demo.007").await;
    assert_eq!(reply.status, StatusCode::OK);
    let body = reply.json();
    assert_eq!(body["publication"]["title"], "Café Networks & Co-Citation Maps");
    let missing = api.get("/publications/10.1000/nothing.here").await;
    assert_eq!(missing.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn heavily_cited_selection_is_flagged() {
    let api = Api::new();
    let id = api.new_session().await;
    let view = api.post(&format!("/sessions/{id}/select"), json!({"dois": ["10.1000/demo.006"]})).await.json();
    let kinds: Vec<&str> = view["warnings"].as_array().unwrap().iter().map(|w| w["kind"].as_str().unwrap()).collect();
    assert!(kinds.contains(&"citations_skipped_large"), "{kinds:?}");
    assert_eq!(api.provider.calls_for(CallKind::Citations, &"10.1000/demo.006".parse().unwrap()), 0);
    let detail = api.get("/publications/10.1000/demo.006").await.json();
    assert_eq!(detail["publication"]["cited_by"], json!([]));
    assert_eq!(detail["flags"]["citations_skipped_large"], true);
}

#[tokio::test]
async fn missing_dois_become_warnings() {
    let api = Api::new();
    let id = api.new_session().await;
    let view = api
        .post(&format!("/sessions/{id}/select"), json!({"dois": ["10.1000/demo.001", "10.1000/gone.1"]}))
        .await
        .json();
    assert_eq!(view["warnings"], json!([{"doi": "10.1000/gone.1", "kind": "not_found"}]));
    assert_eq!(view["selected"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn offline_upstream_is_a_bad_gateway() {
    let provider = provider();
    provider.set_offline(true);
    let api = Api::with_provider(provider, Execution::Parallel);
    let id = api.new_session().await;
    let reply = api.post(&format!("/sessions/{id}/select"), json!({ "dois": SEEDS })).await;
    assert_eq!(reply.status, StatusCode::BAD_GATEWAY);
    assert_eq!(reply.json()["error"]["code"], "source_unavailable");
    // the failed write left the session untouched
    assert_eq!(api.get(&format!("/sessions/{id}")).await.revision(), 0);
}

#[tokio::test]
async fn read_marks_do_not_recompute() {
    let api = Api::new();
    let id = seeded(&api).await;
    let top = dois(&api.get(&format!("/sessions/{id}/suggestions?limit=1")).await.json())[0].clone();
    let calls = api.provider.total_calls();
    let view = api.post(&format!("/sessions/{id}/read"), json!({ "doi": top })).await.json();
    assert_eq!(view["state"]["read"], json!([top]));
    assert_eq!(api.provider.total_calls(), calls);
    let page = api.get(&format!("/sessions/{id}/suggestions?limit=2")).await.json();
    assert_eq!(page["entries"][0]["unread"], false);
    assert_eq!(page["entries"][1]["unread"], true);
}

#[tokio::test]
async fn authors_follow_the_condition_flags() {
    let api = Api::new();
    let id = seeded(&api).await;
    let counts = api.get(&format!("/sessions/{id}/authors")).await.json();
    assert_eq!(counts["condition"], "aa");
    let authors = counts["authors"].as_array().unwrap();
    for a in authors {
        assert_eq!(a["score"].as_u64().unwrap() as usize, a["publications"].as_array().unwrap().len());
    }
    // Lin Wei, L. Wei and Lin Wei again: one author on all three seeds
    assert_eq!(authors[0]["publications"].as_array().unwrap().len(), 3);

    let full = api.get(&format!("/sessions/{id}/authors?weight_score=true&boost_first=true&boost_new=true&limit=2")).await;
    let full = full.json();
    assert_eq!(full["condition"], "bb");
    assert_eq!(full["authors"].as_array().unwrap().len(), 2);
    assert_eq!(full["total"], counts["total"]);
}

#[tokio::test]
async fn network_payload_respects_settings() {
    let api = Api::new();
    let id = seeded(&api).await;
    api.call(Method::PUT, &format!("/sessions/{id}/keywords"), Some(json!({"text": "citation, network"}))).await;
    let net = api.get(&format!("/sessions/{id}/network?n_suggested=5&n_authors=3&keywords=true&authors=true")).await;
    assert_eq!(net.status, StatusCode::OK);
    let net = net.json();
    let text = net.to_string();
    assert!(text.contains("10.1000/demo.001"));
    let plain = api.get(&format!("/sessions/{id}/network?n_suggested=0&keywords=false&authors=false")).await.json();
    assert_ne!(plain, net);
}

#[tokio::test]
async fn bibtex_export_has_one_entry_per_selected() {
    let api = Api::new();
    let id = seeded(&api).await;
    let reply = api.get(&format!("/sessions/{id}/export/bibtex")).await;
    assert_eq!(reply.status, StatusCode::OK);
    assert!(reply.headers["content-type"].to_str().unwrap().starts_with("application/x-bibtex"));
    let bib = biblatex::Bibliography::parse(&reply.text()).expect("export parses");
    assert_eq!(bib.len(), 3);
    let keys: BTreeSet<_> = bib.iter().map(|e| e.key.clone()).collect();
    assert_eq!(keys.len(), 3);
}

#[tokio::test]
async fn concurrent_updates_conflict() {
    let provider = Arc::new(FixtureProvider::from_path(&fixture_path()).unwrap().with_latency(Duration::from_millis(40)));
    let api = Api::with_provider(provider, Execution::Parallel);
    let id = api.new_session().await;
    let uri = format!("/sessions/{id}/select");
    let (a, b) = tokio::join!(api.post(&uri, json!({ "dois": SEEDS })), async {
        tokio::time::sleep(Duration::from_millis(10)).await;
        api.post(&uri, json!({"dois": ["10.1000/demo.004"]})).await
    });
    assert_eq!(a.status, StatusCode::OK);
    assert_eq!(b.status, StatusCode::CONFLICT);
    assert_eq!(b.json()["error"]["code"], "conflict");
    // readers saw a whole revision throughout
    let now = api.get(&format!("/sessions/{id}")).await;
    assert_eq!(now.revision(), 1);
    assert_eq!(now.json()["state"]["selected"].as_array().unwrap().len(), 3);
}

#[tokio::test]
async fn revisions_grow_by_one_per_write() {
    let api = Api::new();
    let id = seeded(&api).await;
    let mut last = api.get(&format!("/sessions/{id}")).await.revision();
    for body in [json!({"include": ["10.1000/demo.009"]}), json!({"unstage": ["10.1000/demo.009"]})] {
        let r = api.post(&format!("/sessions/{id}/stage"), body).await;
        assert_eq!(r.revision(), last + 1);
        last += 1;
    }
    let r = api.call(Method::POST, &format!("/sessions/{id}/update"), None).await;
    assert_eq!(r.revision(), last + 1);
}

#[tokio::test]
async fn sequential_and_parallel_engines_agree() {
    let a = Api::with_provider(provider(), Execution::Sequential);
    let b = Api::with_provider(provider(), Execution::Parallel);
    assert_eq!(a.golden_scenario().await, b.golden_scenario().await);
}

#[tokio::test]
async fn golden_suggestions_file() {
    let produced = Api::new().golden_scenario().await;
    let path = golden_path();
    if std::env::var_os("UPDATE_GOLDEN").is_some() || !path.exists() {
        std::fs::write(&path, &produced).unwrap();
    }
    let expected = std::fs::read(&path).unwrap();
    assert_eq!(String::from_utf8(produced).unwrap(), String::from_utf8(expected).unwrap());
}
