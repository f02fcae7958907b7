//! HTTP routes. Each handler parses its body, calls one library operation
//! and returns that operation's output serialized without additions.

use std::collections::BTreeMap;
use std::future::Future;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{StatusCode, Uri};
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::net::TcpListener;

use exemplar_core::credit::{whatif_rescore, CreditApplicant, DEFAULT_THRESHOLD_RATING};
use exemplar_core::engine::recommend;
use exemplar_core::explain::training_report;
use exemplar_core::model::{read_instances_jsonl, ModelProfile, UserProfile};
use exemplar_core::store::{Collection, Filter, Metric};
use exemplar_core::DecisionRecordF64;

use crate::config::ServerConfig;
use crate::error::{AppError, AppResult};
use crate::methods::{explain, ExplainRequest};
use crate::state::AppState;

pub type Shared = Arc<AppState>;

fn parse<T: DeserializeOwned>(body: &[u8]) -> AppResult<T> {
    serde_json::from_slice(body).map_err(|e| AppError::BadRequest(e.to_string()))
}

/// Runs CPU-bound explainer work off the async executor.
async fn blocking<R: Send + 'static>(f: impl FnOnce() -> AppResult<R> + Send + 'static) -> AppResult<R> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| AppError::Io(std::io::Error::other(e.to_string())))?
}

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/collections", post(create_collection))
        .route("/collections/{name}/instances", post(ingest))
        .route("/collections/{name}/query", post(query))
        .route("/recommend", post(recommend_handler))
        .route("/explain/{method}", post(explain_handler))
        .route("/whatif", post(whatif))
        .route("/decisions", get(list_decisions).post(create_decision))
        .route("/report/{collection}", get(report))
        .fallback(no_route)
        .with_state(state)
}

async fn no_route(uri: Uri) -> AppError {
    AppError::NoRoute(uri.path().to_owned())
}

async fn health() -> Json<Value> {
    Json(json!({"status": "ok"}))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NewCollection {
    name: String,
    dimension: usize,
    metric: Metric,
}

async fn create_collection(State(s): State<Shared>, body: Bytes) -> AppResult<impl IntoResponse> {
    let req: NewCollection = parse(&body)?;
    s.create_collection(Collection::new(req.name.clone(), req.dimension, req.metric)?)?;
    Ok((
        StatusCode::CREATED,
        Json(json!({"name": req.name, "dimension": req.dimension, "metric": req.metric})),
    ))
}

async fn ingest(State(s): State<Shared>, Path(name): Path<String>, body: Bytes) -> AppResult<Json<Value>> {
    let instances = read_instances_jsonl(&body[..])?;
    let stored = s.upsert(&name, instances)?;
    Ok(Json(json!({"stored": stored})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryRequest {
    query: Vec<f64>,
    k: usize,
    #[serde(default)]
    filter: Option<Filter<f64>>,
}

async fn query(State(s): State<Shared>, Path(name): Path<String>, body: Bytes) -> AppResult<Json<Value>> {
    let req: QueryRequest = parse(&body)?;
    let c = s.snapshot(&name)?;
    let hits = c.knn_query(&req.query, req.k, req.filter.as_ref())?;
    Ok(Json(json!(hits)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecommendRequest {
    pub model: ModelProfile,
    pub user: UserProfile,
}

async fn recommend_handler(State(s): State<Shared>, body: Bytes) -> AppResult<Json<Value>> {
    let req: RecommendRequest = parse(&body)?;
    let r = recommend(&req.model, &req.user, &s.catalog, &s.table)?;
    Ok(Json(json!(r)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreditCase {
    id: String,
}

async fn explain_handler(State(s): State<Shared>, Path(method): Path<String>, body: Bytes) -> AppResult<Json<Value>> {
    if method == "credit-rejection" {
        let req: CreditCase = parse(&body)?;
        return blocking(move || {
            let harness = s.credit.as_ref().ok_or_else(|| AppError::UnknownMethod(method.clone()))?;
            let out = s.with_decisions(|log| {
                let log = (log.dimension() == harness.collection.dimension()).then_some(log);
                harness.explain_rejection(&req.id, log)
            })?;
            Ok(Json(json!(out)))
        })
        .await;
    }
    let req: ExplainRequest = parse(&body)?;
    let name = req
        .collection
        .clone()
        .ok_or_else(|| AppError::BadRequest("missing field `collection`".into()))?;
    let c = s.snapshot(&name)?;
    blocking(move || explain(&c, &method, &req).map(Json)).await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WhatIfRequest {
    #[serde(default)]
    applicant: Option<CreditApplicant>,
    #[serde(default)]
    applicant_id: Option<String>,
    #[serde(default)]
    edits: BTreeMap<String, f64>,
    #[serde(default)]
    threshold: Option<f64>,
}

async fn whatif(State(s): State<Shared>, body: Bytes) -> AppResult<Json<Value>> {
    let req: WhatIfRequest = parse(&body)?;
    let portfolio = s.credit.as_ref().map(|h| &h.portfolio);
    let applicant = match (&req.applicant, &req.applicant_id) {
        (Some(a), None) => a.clone(),
        (None, Some(id)) => portfolio
            .and_then(|p| p.get(id))
            .cloned()
            .ok_or_else(|| exemplar_core::Error::UnknownId(id.clone()))?,
        _ => return Err(AppError::BadRequest("give exactly one of applicant and applicant_id".into())),
    };
    let threshold = req
        .threshold
        .or(portfolio.map(|p| p.threshold))
        .unwrap_or(DEFAULT_THRESHOLD_RATING);
    Ok(Json(json!(whatif_rescore(&applicant, &req.edits, threshold)?)))
}

async fn list_decisions(State(s): State<Shared>) -> Json<Value> {
    Json(json!(s.decisions()))
}

async fn create_decision(State(s): State<Shared>, body: Bytes) -> AppResult<impl IntoResponse> {
    let record: DecisionRecordF64 = parse(&body)?;
    let stored = s.record_decision(record)?;
    Ok((StatusCode::CREATED, Json(json!(stored))))
}

async fn report(State(s): State<Shared>, Path(name): Path<String>) -> AppResult<Json<Value>> {
    let c = s.snapshot(&name)?;
    Ok(Json(json!(training_report(&c, &s.config_digest))))
}

pub async fn bind(config: &ServerConfig) -> AppResult<TcpListener> {
    TcpListener::bind(("0.0.0.0", config.port)).await.map_err(|e| match e.kind() {
        std::io::ErrorKind::AddrInUse => AppError::PortInUse(config.port),
        _ => AppError::Io(e),
    })
}

/// Serves until `shutdown` resolves, then drains in-flight requests.
pub async fn serve(state: Shared, listener: TcpListener, shutdown: impl Future<Output = ()> + Send + 'static) -> AppResult<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
        .map_err(AppError::Io)
}
