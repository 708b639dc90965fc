//! HTTP/JSON front end over an [`Engine`].
//!
//! Every response carries the catalog snapshot version, in the JSON body and
//! in the `x-snapshot-version` header.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, Request, State};
use axum::http::{HeaderValue, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

use crate::config::EngineConfig;
use crate::crawl::DocId;
use crate::engine::{Engine, SearchRequest};
use crate::error::Error;
use crate::organize::HierarchyMethod;
use crate::retrieval::Model;

pub const VERSION_HEADER: &str = "x-snapshot-version";

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
pub struct SearchParams {
    pub q: Option<String>,
    pub model: Option<String>,
    #[serde(rename = "type")]
    pub doc_type: Option<String>,
    pub collection: Option<String>,
    pub cluster: Option<String>,
    pub expand: Option<String>,
    pub k: Option<String>,
    pub hierarchy: Option<String>,
    pub limit: Option<String>,
}

fn flag(name: &str, value: &Option<String>) -> Result<Option<bool>, String> {
    match value.as_deref().map(str::to_ascii_lowercase).as_deref() {
        None => Ok(None),
        Some("1" | "true" | "yes" | "on") => Ok(Some(true)),
        Some("0" | "false" | "no" | "off") => Ok(Some(false)),
        Some(other) => Err(format!("{name}: expected a boolean, got {other:?}")),
    }
}

fn count(name: &str, value: &Option<String>) -> Result<Option<usize>, String> {
    value
        .as_deref()
        .map(|v| v.parse::<usize>().map_err(|_| format!("{name}: expected a count, got {v:?}")))
        .transpose()
}

impl SearchParams {
    pub fn into_request(self) -> Result<SearchRequest, String> {
        let q = self.q.clone().filter(|q| !q.trim().is_empty()).ok_or("missing query parameter q")?;
        let model = self
            .model
            .as_deref()
            .map(|m| m.parse::<Model>().map_err(|e| e.to_string()))
            .transpose()?;
        let types = self
            .doc_type
            .as_deref()
            .map(|t| t.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect())
            .unwrap_or_default();
        Ok(SearchRequest {
            q,
            model,
            types,
            collection: self.collection.clone().filter(|c| !c.is_empty()),
            cluster: flag("cluster", &self.cluster)?.unwrap_or(false),
            expand: flag("expand", &self.expand)?,
            k: count("k", &self.k)?,
            hierarchy: self
                .hierarchy
                .as_deref()
                .map(|h| h.parse::<HierarchyMethod>().map_err(|e| e.to_string()))
                .transpose()?,
            limit: count("limit", &self.limit)?,
        })
    }
}

#[derive(Debug, Serialize)]
struct ConfigView {
    snapshot_version: u64,
    config: EngineConfig,
}

fn version(engine: &Engine) -> u64 {
    engine.snapshot().version
}

fn error(engine: &Engine, status: StatusCode, message: impl Into<String>) -> Response {
    let body = json!({ "snapshot_version": version(engine), "error": message.into() });
    (status, Json(body)).into_response()
}

fn status_of(e: &Error) -> StatusCode {
    match e {
        Error::Query(_) | Error::Config(_) => StatusCode::BAD_REQUEST,
        _ => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

async fn search(State(engine): State<Arc<Engine>>, Query(params): Query<SearchParams>) -> Response {
    let request = match params.into_request() {
        Ok(r) => r,
        Err(m) => return error(&engine, StatusCode::BAD_REQUEST, m),
    };
    let worker = engine.clone();
    match tokio::task::spawn_blocking(move || worker.search(&request)).await {
        Ok(Ok(response)) => Json(response).into_response(),
        Ok(Err(e)) => error(&engine, status_of(&e), e.to_string()),
        Err(e) => error(&engine, StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn document(State(engine): State<Arc<Engine>>, Path(id): Path<String>) -> Response {
    let Ok(id) = id.parse::<DocId>() else {
        return error(&engine, StatusCode::NOT_FOUND, format!("no document {id}"));
    };
    match engine.document(&id) {
        Ok(Some(view)) => Json(view).into_response(),
        Ok(None) => error(&engine, StatusCode::NOT_FOUND, format!("no document {id}")),
        Err(e) => error(&engine, StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn get_config(State(engine): State<Arc<Engine>>) -> Response {
    Json(ConfigView {
        snapshot_version: version(&engine),
        config: (*engine.config()).clone(),
    })
    .into_response()
}

async fn put_config(State(engine): State<Arc<Engine>>, body: Bytes) -> Response {
    let config: EngineConfig = match serde_json::from_slice(&body) {
        Ok(c) => c,
        Err(e) if e.classify() == serde_json::error::Category::Data => {
            return error(&engine, StatusCode::CONFLICT, e.to_string())
        }
        Err(e) => return error(&engine, StatusCode::BAD_REQUEST, e.to_string()),
    };
    match engine.set_config(config) {
        Ok(config) => Json(ConfigView {
            snapshot_version: version(&engine),
            config: (*config).clone(),
        })
        .into_response(),
        Err(e @ Error::Config(_)) => error(&engine, StatusCode::CONFLICT, e.to_string()),
        Err(e) => error(&engine, StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn reload(State(engine): State<Arc<Engine>>) -> Response {
    let worker = engine.clone();
    match tokio::task::spawn_blocking(move || worker.reload()).await {
        Ok(Ok(v)) => Json(json!({ "snapshot_version": v })).into_response(),
        Ok(Err(e)) => error(&engine, StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
        Err(e) => error(&engine, StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn stats(State(engine): State<Arc<Engine>>) -> Response {
    let worker = engine.clone();
    match tokio::task::spawn_blocking(move || worker.stats()).await {
        Ok(view) => Json(view).into_response(),
        Err(e) => error(&engine, StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
    }
}

async fn no_ui(State(engine): State<Arc<Engine>>) -> Response {
    error(&engine, StatusCode::NOT_FOUND, "no ui directory configured")
}

async fn not_found(State(engine): State<Arc<Engine>>) -> Response {
    error(&engine, StatusCode::NOT_FOUND, "no such endpoint")
}

async fn stamp_version(State(engine): State<Arc<Engine>>, request: Request, next: Next) -> Response {
    let mut response = next.run(request).await;
    if !response.headers().contains_key(VERSION_HEADER) {
        let v = HeaderValue::from(version(&engine));
        response.headers_mut().insert(VERSION_HEADER, v);
    }
    response
}

/// The service routes. Static files come from `service.ui_dir` as it was
/// when the router was built.
pub fn router(engine: Arc<Engine>) -> Router {
    let mut app = Router::new()
        .route("/search", get(search))
        .route("/doc/{id}", get(document))
        .route("/admin/config", get(get_config).put(put_config))
        .route("/admin/reload", post(reload))
        .route("/stats", get(stats));
    app = match engine.config().service.ui_dir.clone() {
        Some(dir) => app.nest_service("/ui", ServeDir::new(dir).append_index_html_on_directories(true)),
        None => app.route("/ui", get(no_ui)).route("/ui/{*rest}", get(no_ui)),
    };
    app.fallback(not_found)
        .layer(middleware::from_fn_with_state(engine.clone(), stamp_version))
        .with_state(engine)
}

/// Serves until ctrl-c.
pub async fn serve(engine: Arc<Engine>, addr: &str) -> crate::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| Error::io(addr, e))?;
    log::info!("listening on http://{}", listener.local_addr().map_err(|e| Error::io(addr, e))?);
    axum::serve(listener, router(engine))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Error::io(addr, e))
}
