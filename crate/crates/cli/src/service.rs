//! JSON-over-HTTP API used by the playground.
//!
//! Session mutations happen under one store lock, so moves on a session are
//! applied in arrival order. Solver work (greedy runs, analysis, optimal
//! hints) runs on the blocking pool behind a semaphore and only ever sees
//! cloned snapshots.

use std::path::PathBuf;
use std::sync::{Arc, Mutex, MutexGuard};

use axum::body::Bytes;
use axum::extract::rejection::QueryRejection;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chipfire::engine::{run_greedy, EngineError, Outcome, RunOptions};
use chipfire::solver::{verify_theorem, MethodChoice, SolveOptions};
use chipfire::{lower_bound, Divisor, Graph, GraphError, Instance, Move, Side, SolverError};
use serde::Deserialize;
use serde_json::{json, Value};
use tokio::sync::Semaphore;
use tower_http::services::ServeDir;

use crate::family_params::{build_family, FamilyParams, FamilyRequestError};
use crate::sessions::{Hint, Session, SessionStore, Strategy, DEFAULT_SESSION_CAP};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub max_sessions: usize,
    /// Concurrent solver jobs.
    pub workers: usize,
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            max_sessions: DEFAULT_SESSION_CAP,
            workers: std::thread::available_parallelism().map_or(2, |n| n.get()),
            static_dir: None,
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, message)
    }

    fn not_found(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("no game with id `{id}`"))
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

impl From<SolverError> for ApiError {
    fn from(e: SolverError) -> Self {
        let status = match &e {
            SolverError::GreedyFailed(_) => StatusCode::UNPROCESSABLE_ENTITY,
            SolverError::CapExceeded { .. }
            | SolverError::BudgetExceeded { .. }
            | SolverError::StateLimitExceeded { .. }
            | SolverError::Engine(EngineError::StepLimitExceeded { .. }) => StatusCode::CONFLICT,
            SolverError::Graph(GraphError::Overflow) => StatusCode::UNPROCESSABLE_ENTITY,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.to_string())
    }
}

type ApiResult<T> = Result<T, ApiError>;

struct Shared {
    sessions: Mutex<SessionStore>,
    workers: Semaphore,
}

#[derive(Clone)]
pub struct AppState(Arc<Shared>);

impl AppState {
    pub fn new(config: &ServiceConfig) -> Self {
        AppState(Arc::new(Shared {
            sessions: Mutex::new(SessionStore::new(config.max_sessions)),
            workers: Semaphore::new(config.workers.max(1)),
        }))
    }

    fn sessions(&self) -> MutexGuard<'_, SessionStore> {
        // A panic while holding the lock leaves the store itself consistent.
        self.0.sessions.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn with_session<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> ApiResult<T>) -> ApiResult<T> {
        let mut store = self.sessions();
        let session = store.get_mut(id).ok_or_else(|| ApiError::not_found(id))?;
        f(session)
    }

    async fn run_blocking<T, F>(&self, job: F) -> ApiResult<T>
    where
        T: Send + 'static,
        F: FnOnce() -> T + Send + 'static,
    {
        let _permit = self
            .0
            .workers
            .acquire()
            .await
            .map_err(|e| ApiError::internal(e.to_string()))?;
        tokio::task::spawn_blocking(job)
            .await
            .map_err(|e| ApiError::internal(e.to_string()))
    }
}

pub fn router(config: &ServiceConfig) -> Router {
    let api = Router::new()
        .route("/api/games", post(create_game))
        .route("/api/games/{id}", get(get_game))
        .route("/api/games/{id}/moves", post(post_move))
        .route("/api/games/{id}/undo", post(undo))
        .route("/api/games/{id}/hint", get(hint))
        .route("/api/analyze", post(analyze))
        .route("/api/families/{name}", get(family))
        .with_state(AppState::new(config));
    match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

fn parse_body(body: &[u8]) -> ApiResult<Value> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed JSON: {e}")))
}

/// Accepts either a bare instance or `{"instance": ..., ...}`; returns the
/// instance and the remaining wrapper object.
fn split_instance(body: Value) -> ApiResult<(Instance, Value)> {
    let (instance, rest) = match body {
        Value::Object(mut map) if map.contains_key("instance") => {
            let instance = map.remove("instance").expect("key checked");
            (instance, Value::Object(map))
        }
        other => (other, Value::Object(Default::default())),
    };
    let instance = Instance::from_value(instance).map_err(|e| ApiError::bad_request(e.to_string()))?;
    Ok((instance, rest))
}

fn quiet() -> RunOptions {
    RunOptions {
        record_states: false,
        ..Default::default()
    }
}

async fn create_game(State(state): State<AppState>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let (instance, _) = split_instance(parse_body(&body)?)?;
    let snapshot = instance.clone();
    let m0 = state
        .run_blocking(move || {
            match run_greedy(&snapshot.graph, &snapshot.divisor, snapshot.side, &quiet()) {
                Ok(Outcome::Settled(trace)) => Some(trace.move_count()),
                _ => None,
            }
        })
        .await?;
    let bound = m0.and_then(|m| lower_bound(m, instance.graph.num_vertices()).ok());
    let session = Session::new(instance, m0, bound);
    let view = session.view();
    state.sessions().insert(session);
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    state.with_session(&id, |s| Ok(Json(s.view())))
}

async fn post_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> ApiResult<impl IntoResponse> {
    let m: Move = serde_json::from_slice(&body)
        .map_err(|e| ApiError::bad_request(format!("expected {{\"vertex\", \"kind\"}}: {e}")))?;
    state.with_session(&id, |s| {
        s.apply(m)
            .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()))?;
        Ok(Json(s.view()))
    })
}

async fn undo(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    state.with_session(&id, |s| {
        if s.undo().is_none() {
            return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "no move to undo"));
        }
        Ok(Json(s.view()))
    })
}

#[derive(Debug, Deserialize)]
struct HintQuery {
    strategy: Option<String>,
}

async fn hint(
    State(state): State<AppState>,
    Path(id): Path<String>,
    query: Result<Query<HintQuery>, QueryRejection>,
) -> ApiResult<Response> {
    let Query(query) = query.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let strategy = match query.strategy.as_deref() {
        None | Some("greedy") => Strategy::Greedy,
        Some("optimal") => Strategy::Optimal,
        Some(other) => {
            return Err(ApiError::bad_request(format!(
                "unknown strategy `{other}` (expected greedy or optimal)"
            )))
        }
    };

    let snapshot = state.with_session(&id, |s| {
        Ok(match s.cached_hint(strategy, &s.current) {
            Some(cached) => Err(cached.clone()),
            None => Ok((s.instance.graph.clone(), s.instance.side, s.current.clone())),
        })
    })?;
    let hint = match snapshot {
        Err(cached) => cached,
        Ok((graph, side, current)) => {
            let key = current.clone();
            let computed = state
                .run_blocking(move || compute_hint(&graph, side, &current, strategy))
                .await??;
            // The session may have been evicted meanwhile; the hint is still valid.
            if let Some(s) = state.sessions().get_mut(&id) {
                s.cache_hint(strategy, key, computed.clone());
            }
            computed
        }
    };
    Ok(match hint {
        Some(h) => Json(h).into_response(),
        None => StatusCode::NO_CONTENT.into_response(),
    })
}

fn target_name(side: Side) -> &'static str {
    match side {
        Side::Dollar => "an effective divisor",
        Side::Chip => "a stable divisor",
    }
}

fn moves(count: u64) -> String {
    if count == 1 {
        "1 move".into()
    } else {
        format!("{count} moves")
    }
}

/// `None` when the current divisor already needs no move.
pub fn compute_hint(g: &Graph, side: Side, current: &Divisor, strategy: Strategy) -> ApiResult<Option<Hint>> {
    if side.is_done(g, current.values()) {
        return Ok(None);
    }
    match strategy {
        Strategy::Greedy => {
            let why = match side {
                Side::Dollar => "is in debt, so the borrowing binge borrows there",
                Side::Chip => "holds at least its degree, so greedy stabilization fires it",
            };
            let (trace, estimate, tail) = match run_greedy(g, current, side, &quiet()) {
                Ok(Outcome::Settled(t)) => {
                    let m = t.move_count();
                    (t, Some(m), format!("; greedy play finishes in {}", moves(m)))
                }
                Ok(Outcome::Cycle(w)) => (
                    w.trace,
                    None,
                    "; greedy play revisits a configuration from here and never finishes".into(),
                ),
                Ok(Outcome::NegativeDegree { .. }) => unreachable!("shortcut is disabled"),
                Err(EngineError::StepLimitExceeded { trace, .. }) => {
                    (*trace, None, "; greedy play hit its step limit".into())
                }
                Err(e) => return Err(ApiError::bad_request(e.to_string())),
            };
            let next = trace.moves[0];
            Ok(Some(Hint {
                next,
                rationale: format!("vertex {} {why}{tail}", next.vertex),
                remaining_estimate: estimate,
            }))
        }
        Strategy::Optimal => {
            let report = verify_theorem(g, current, side, &SolveOptions::default()).map_err(|e| match e {
                SolverError::GreedyFailed(_) => ApiError::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    "greedy play does not finish from this state, so no optimal hint is available",
                ),
                other => other.into(),
            })?;
            let next = report.witness_moves[0];
            Ok(Some(Hint {
                next,
                rationale: format!(
                    "first move of a shortest sequence ({}) to {} (greedy needs {})",
                    moves(report.m_min),
                    target_name(side),
                    moves(report.m0)
                ),
                remaining_estimate: Some(report.m_min),
            }))
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyzeOptions {
    method: Option<MethodChoice>,
    cap: Option<u64>,
    budget: Option<u64>,
}

async fn analyze(State(state): State<AppState>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let (instance, rest) = split_instance(parse_body(&body)?)?;
    let opts: AnalyzeOptions =
        serde_json::from_value(rest).map_err(|e| ApiError::bad_request(e.to_string()))?;
    let mut options = SolveOptions {
        radius_cap: opts.cap,
        ..Default::default()
    };
    if let Some(method) = opts.method {
        options.method = method;
    }
    if let Some(budget) = opts.budget {
        options.coset_budget = budget;
    }
    let report = state
        .run_blocking(move || verify_theorem(&instance.graph, &instance.divisor, instance.side, &options))
        .await??;
    Ok(Json(report))
}

async fn family(
    Path(name): Path<String>,
    query: Result<Query<FamilyParams>, QueryRejection>,
) -> ApiResult<impl IntoResponse> {
    let Query(params) = query.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let instance = build_family(&name, &params).map_err(|e| match e {
        FamilyRequestError::UnknownFamily(_) => ApiError::new(StatusCode::NOT_FOUND, e.to_string()),
        FamilyRequestError::Invalid(_) => ApiError::bad_request(e.to_string()),
    })?;
    Ok(Json(instance.to_json_value()))
}
