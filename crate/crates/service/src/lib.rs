//! HTTP/JSON service for the corner-base game: interactive training
//! sessions for the browser UI, plus batch runs and pits for the CLI.

pub mod error;
pub mod session;

use std::collections::HashMap;
use std::future::Future;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use axum::extract::{Path as UrlPath, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use cornerbase::harness::{
    cross_evaluate, load_pit_pair, prepare_plan, run_plan, PitOptions, PitReport, Plan, RunOptions, StatsRow,
};
use cornerbase::wire::{
    CreateSession, ErrorBody, MoveReply, Pending, PitRequest, PlanRef, RunReply, RunRequest, SessionCreated, StateView,
};
use cornerbase::{Error, Move};
use serde_json::json;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;

pub use error::ApiError;
use error::Body;
use session::Session;

pub const DEFAULT_PORT: u16 = 8377;

#[derive(Debug, Clone, Default)]
pub struct ServeConfig {
    /// Plan that `POST /sessions` may refer to by name.
    pub plan: Option<PathBuf>,
    /// Where session outputs go, one `session-<id>` directory each.
    pub out: PathBuf,
    /// Static files to serve at `/`.
    pub ui_dir: Option<PathBuf>,
}

#[derive(Clone)]
struct AppState {
    config: Arc<ServeConfig>,
    sessions: Arc<Mutex<HashMap<String, Arc<Session>>>>,
}

pub fn router(config: ServeConfig) -> Router {
    let ui = config.ui_dir.clone();
    let state = AppState { config: Arc::new(config), sessions: Arc::default() };
    let api = Router::new()
        .route("/health", get(health))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/state", get(session_state))
        .route("/sessions/{id}/moves", post(submit_move))
        .route("/sessions/{id}/stats", get(session_stats))
        .route("/runs", post(run))
        .route("/pits", post(pit))
        .with_state(state);
    match ui {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    config: ServeConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(config)).with_graceful_shutdown(shutdown).await
}

/// Binds an ephemeral local port and serves in the background. Used by the
/// CLI when no server address is given, and by tests.
pub async fn spawn_local(config: ServeConfig) -> std::io::Result<SocketAddr> {
    let listener = TcpListener::bind(("127.0.0.1", 0)).await?;
    let addr = listener.local_addr()?;
    tokio::spawn(async move {
        if let Err(e) = axum::serve(listener, router(config)).await {
            tracing::error!("local server stopped: {e}");
        }
    });
    Ok(addr)
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

impl AppState {
    fn session(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.sessions.lock().expect("session table").get(id).cloned().ok_or_else(|| ApiError::no_session(id))
    }

    /// Resolves a named plan: the server's own plan by file name or stem,
    /// otherwise a path readable by the server.
    fn resolve(&self, name: &str) -> Result<Plan, ApiError> {
        if let Some(own) = &self.config.plan {
            let matches = own.as_os_str() == name
                || own.file_name().is_some_and(|f| f == name)
                || own.file_stem().is_some_and(|f| f == name);
            if matches {
                return Plan::load(own).map_err(|e| ApiError::from_core(&e));
            }
        }
        let path = Path::new(name);
        if !path.is_file() {
            return Err(
                ApiError::new(StatusCode::NOT_FOUND, "no-such-plan", format!("no plan named {name:?}")).with_exit(4)
            );
        }
        Plan::load(path).map_err(|e| ApiError::from_core(&e))
    }
}

async fn create_session(
    State(app): State<AppState>,
    Body(req): Body<CreateSession>,
) -> Result<(StatusCode, Json<SessionCreated>), ApiError> {
    let (plan, key) = match req.plan {
        PlanRef::Named(name) => (app.resolve(&name)?, name),
        PlanRef::Inline(plan) => {
            let key = serde_json::to_string(&plan).expect("plan serialises");
            (plan, key)
        }
    };
    let plan = prepare_plan(&plan, &RunOptions { seed: req.seed });
    plan.validate().map_err(|e| ApiError::from_core(&e.into()))?;
    if !plan.batches.iter().any(|b| b.has_interactive_stage()) {
        return Err(ApiError::new(
            StatusCode::BAD_REQUEST,
            "no-interactive-stage",
            "the plan has no human stage; use POST /runs for automatic plans",
        )
        .with_exit(2));
    }

    let mut sessions = app.sessions.lock().expect("session table");
    if sessions.values().any(|s| s.plan_key == key && s.is_live()) {
        return Err(ApiError::new(StatusCode::CONFLICT, "session-exists", "a live session already runs this plan"));
    }
    let id = uuid::Uuid::new_v4().simple().to_string();
    let out = app.config.out.join(format!("session-{id}"));
    tracing::info!("session {id} writes to {}", out.display());
    sessions.insert(id.clone(), Arc::new(Session::start(plan, key, out)));
    Ok((StatusCode::CREATED, Json(SessionCreated { session_id: id })))
}

async fn session_state(State(app): State<AppState>, UrlPath(id): UrlPath<String>) -> Result<Json<StateView>, ApiError> {
    Ok(Json(app.session(&id)?.snapshot().view))
}

async fn session_stats(
    State(app): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<Vec<StatsRow>>, ApiError> {
    Ok(Json(app.session(&id)?.snapshot().rows))
}

async fn submit_move(
    State(app): State<AppState>,
    UrlPath(id): UrlPath<String>,
    Body(mv): Body<Move>,
) -> Result<Json<MoveReply>, ApiError> {
    let session = app.session(&id)?;
    let pending = session.snapshot().view.pending;
    if pending != Pending::WaitingHuman {
        return Err(ApiError::not_waiting(format!("not waiting for a human move (session is {pending:?})")));
    }
    let rx = session.submit(mv).ok_or_else(|| ApiError::not_waiting("the session has stopped"))?;
    rx.await.map_err(|_| ApiError::not_waiting("the session stopped before answering"))?.map(Json)
}

fn error_body(e: &Error) -> ErrorBody {
    ApiError::from_core(e).body
}

async fn run(Body(req): Body<RunRequest>) -> Result<Json<RunReply>, ApiError> {
    let result = tokio::task::spawn_blocking(move || run_plan(&req.plan, &req.out, &RunOptions { seed: req.seed }))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "panic", e.to_string()))?;
    let outcome = result.map_err(|e| ApiError::from_core(&e))?;
    Ok(Json(RunReply { error: outcome.error.as_ref().map(error_body), batches: outcome.batches }))
}

async fn pit(Body(req): Body<PitRequest>) -> Result<Json<PitReport>, ApiError> {
    let result = tokio::task::spawn_blocking(move || {
        let (board, white, black) = load_pit_pair(&req.white, &req.black)?;
        let opts = PitOptions {
            games: req.games,
            learn: !req.frozen,
            seed: req.seed,
            scheme: req.scheme,
            ..PitOptions::default()
        };
        cross_evaluate(&req.label, &white, &black, board, &opts)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "panic", e.to_string()))?;
    result.map(Json).map_err(|e| ApiError::from_core(&e))
}
