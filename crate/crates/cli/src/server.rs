use std::collections::BTreeMap;
use std::future::Future;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use anchorlight_core::query::{search, AnchorScheme, Scorer, ScorerWeights, PRESETS};
use anchorlight_core::store::AnalysisStatus;
use anchorlight_core::IndexHandle;
use axum::extract::{Query, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde::Serialize;
use tower_http::services::ServeDir;

use crate::error::AppError;
use crate::request::SearchParams;

/// Shared by all request handlers: read-only handles on one index file.
pub struct AppState {
    path: PathBuf,
    default_preset: String,
    pool: Mutex<Vec<IndexHandle>>,
}

impl AppState {
    /// Opens `path` read-only once up front so a bad index fails at startup.
    pub fn open(path: &Path, default_preset: &str) -> Result<Self, AppError> {
        ScorerWeights::preset(default_preset)?;
        let first = IndexHandle::open_read_only(path)?;
        Ok(AppState {
            path: path.to_path_buf(),
            default_preset: default_preset.to_string(),
            pool: Mutex::new(vec![first]),
        })
    }

    fn with_handle<T>(&self, f: impl FnOnce(&IndexHandle) -> Result<T, AppError>) -> Result<T, AppError> {
        let pooled = self.pool.lock().expect("pool lock").pop();
        let h = match pooled {
            Some(h) => h,
            None => IndexHandle::open_read_only(&self.path)?,
        };
        debug_assert!(h.is_read_only());
        let out = f(&h);
        self.pool.lock().expect("pool lock").push(h);
        out
    }
}

pub fn router(state: Arc<AppState>, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/search", get(api_search))
        .route("/api/meta", get(api_meta))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(placeholder)).fallback(not_found),
    }
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    app: Router,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, app).with_graceful_shutdown(shutdown).await
}

fn json_response(status: u16, body: String) -> Response {
    (
        StatusCode::from_u16(status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR),
        [(header::CONTENT_TYPE, "application/json")],
        body,
    )
        .into_response()
}

fn error_response(e: AppError) -> Response {
    json_response(e.http_status(), e.to_json())
}

/// Runs `f` on a blocking thread; query evaluation is synchronous SQLite work.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, AppError> + Send + 'static,
) -> Result<T, AppError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| AppError::runtime(format!("worker failed: {e}")))?
}

async fn api_search(
    State(state): State<Arc<AppState>>,
    Query(pairs): Query<Vec<(String, String)>>,
) -> Response {
    let req = match SearchParams::from_pairs(pairs).and_then(|p| p.into_request(&state.default_preset)) {
        Ok(r) => r,
        Err(e) => return error_response(e),
    };
    let result = blocking(move || state.with_handle(|h| Ok(search(h, &req)?.to_json()))).await;
    match result {
        Ok(body) => json_response(200, body),
        Err(e) => error_response(e),
    }
}

#[derive(Serialize)]
struct ScorerInfo {
    name: &'static str,
    query_dependent: bool,
    default_weight: f64,
}

#[derive(Serialize)]
struct Meta {
    pages: u64,
    indexed_pages: u64,
    words: u64,
    links: u64,
    stemming: bool,
    stop_list_version: String,
    schema_version: String,
    analysis: AnalysisStatus,
    pending: Vec<&'static str>,
    scorers: Vec<ScorerInfo>,
    default_preset: String,
    presets: BTreeMap<&'static str, BTreeMap<String, f64>>,
    schemes: Vec<u8>,
    default_scheme: u8,
    modes: [&'static str; 2],
}

fn meta(h: &IndexHandle, default_preset: &str) -> Result<Meta, AppError> {
    let stats = h.stats()?;
    let m = h.meta()?;
    let status = h.analysis_status()?;
    let defaults = ScorerWeights::preset(default_preset)?;
    let mut presets = BTreeMap::new();
    for (name, _) in PRESETS {
        presets.insert(*name, ScorerWeights::preset(name)?.as_name_map());
    }
    Ok(Meta {
        pages: stats.urls,
        indexed_pages: stats.indexed_pages,
        words: stats.words,
        links: stats.links,
        stemming: m.stemming_enabled,
        stop_list_version: m.stop_list_version,
        schema_version: m.schema_version,
        analysis: status,
        pending: status.pending(),
        scorers: Scorer::ALL
            .iter()
            .map(|&s| ScorerInfo {
                name: s.name(),
                query_dependent: s.query_dependent(),
                default_weight: defaults.get(s),
            })
            .collect(),
        default_preset: default_preset.to_string(),
        presets,
        schemes: vec![1, 2, 3, 4],
        default_scheme: AnchorScheme::default().get(),
        modes: ["qd", "qi"],
    })
}

async fn api_meta(State(state): State<Arc<AppState>>) -> Response {
    let result = blocking(move || {
        state.with_handle(|h| {
            let m = meta(h, &state.default_preset)?;
            Ok(serde_json::to_string(&m).expect("meta serializes"))
        })
    })
    .await;
    match result {
        Ok(body) => json_response(200, body),
        Err(e) => error_response(e),
    }
}

const PLACEHOLDER: &str = "<!DOCTYPE html>
<html><head><meta charset=\"utf-8\"><title>anchorlight</title></head>
<body>
<h1>anchorlight</h1>
<p>No UI bundle is configured. Set <code>serve.static_dir</code> or pass <code>--static-dir</code>.</p>
<p>JSON endpoints: <a href=\"/api/meta\">/api/meta</a>, <code>/api/search?q=...&amp;w.bm25=1</code></p>
</body></html>
";

async fn placeholder() -> Html<&'static str> {
    Html(PLACEHOLDER)
}

async fn not_found() -> Response {
    json_response(
        404,
        serde_json::json!({"error": {"code": "NotFound", "message": "no such route"}}).to_string(),
    )
}
