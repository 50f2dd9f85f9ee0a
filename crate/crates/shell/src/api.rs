//! HTTP session service.
//!
//! ```text
//! POST /sessions                  model descriptor -> session state
//! GET  /sessions/{id}             state: Hamiltonian, diagram, components, free sites
//! POST /sessions/{id}/gates       one gate step -> new state
//! POST /sessions/{id}/undo        -> previous state
//! GET  /sessions/{id}/spectrum?k= -> spectrum, or a job for more than 8 sites
//! GET  /jobs/{id}                 -> job status and result
//! GET  /models, GET /scenarios, POST /scenarios/{name}/run
//! ```

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use spindual::lab::{run_scenario, scenario_info, ScenarioParams, SCENARIOS};
use spindual::models::{ModelDescriptor, MODEL_CATALOG};
use spindual::spectra::{extremal_eigs_with, full_spectrum_capped, Caps, Method, SpectrumResult};
use spindual::{Error, GateStep, Hamiltonian};
use uuid::Uuid;

use crate::session::{Session, SessionError};

/// Spectra above this many sites run as background jobs.
pub const INLINE_SPECTRUM_SITES: usize = 8;

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Job {
    Pending,
    Done { result: SpectrumResult },
    Failed { error: String },
}

#[derive(Default)]
pub struct AppState {
    pub caps: Caps,
    sessions: RwLock<HashMap<Uuid, Arc<Mutex<Session>>>>,
    jobs: RwLock<HashMap<Uuid, Job>>,
}

impl AppState {
    pub fn new(caps: Caps) -> Self {
        Self { caps, ..Default::default() }
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let id = Uuid::parse_str(id).map_err(|_| ApiError::not_found(format!("no session {id}")))?;
        self.sessions.read().unwrap().get(&id).cloned().ok_or_else(|| ApiError::not_found(format!("no session {id}")))
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/gates", post(apply_gate))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/spectrum", get(spectrum))
        .route("/jobs/{id}", get(job))
        .route("/models", get(models))
        .route("/scenarios", get(scenarios))
        .route("/scenarios/{name}/run", post(run))
        .with_state(state)
}

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, msg: impl Into<String>) -> Self {
        Self { status, body: json!({ "error": msg.into() }) }
    }

    fn not_found(msg: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, msg)
    }

    fn from_core(e: Error) -> Self {
        match e {
            Error::CapExceeded { what, n_sites, cap } => Self {
                status: StatusCode::FORBIDDEN,
                body: json!({
                    "error": format!("{what} needs {n_sites} sites but the cap is {cap}"),
                    "n_sites": n_sites,
                    "cap": cap,
                }),
            },
            Error::Unknown { .. } => Self::not_found(e.to_string()),
            Error::NoConvergence { .. } => Self::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()),
            other => Self::new(StatusCode::UNPROCESSABLE_ENTITY, other.to_string()),
        }
    }

    /// Syntax errors are 400; well-formed JSON of the wrong shape is 422.
    fn from_json(e: serde_json::Error) -> Self {
        let status = if e.is_data() { StatusCode::UNPROCESSABLE_ENTITY } else { StatusCode::BAD_REQUEST };
        Self::new(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn parse<T: for<'de> Deserialize<'de>>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(ApiError::from_json)
}

async fn create_session(State(app): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let model: ModelDescriptor = parse(&body)?;
    let session = Session::new(model).map_err(ApiError::from_core)?;
    let view = serde_json::to_value(session.view()).expect("serializable");
    app.sessions.write().unwrap().insert(session.id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = app.session(&id)?;
    let view = s.lock().unwrap().view();
    Ok(Json(serde_json::to_value(view).expect("serializable")))
}

async fn apply_gate(State(app): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    let s = app.session(&id)?;
    let step: GateStep = parse(&body)?;
    let mut s = s.lock().unwrap();
    match s.apply(step) {
        Ok(()) => Ok(Json(serde_json::to_value(s.view()).expect("serializable"))),
        Err(SessionError::InvalidStep(reason)) => Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, reason)),
        Err(other) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("{other:?}"))),
    }
}

async fn undo(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Value>> {
    let s = app.session(&id)?;
    let mut s = s.lock().unwrap();
    match s.undo() {
        Ok(_) => Ok(Json(serde_json::to_value(s.view()).expect("serializable"))),
        Err(SessionError::NothingToUndo) => Err(ApiError::new(StatusCode::CONFLICT, "nothing to undo")),
        Err(SessionError::Diverged { expected, got }) => Err(ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            format!("replay reached state {got}, expected {expected}"),
        )),
        Err(SessionError::InvalidStep(reason)) => Err(ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, reason)),
    }
}

#[derive(Deserialize)]
struct SpectrumQuery {
    k: Option<usize>,
}

fn compute_spectrum(h: &Hamiltonian, k: Option<usize>, caps: Caps) -> spindual::Result<SpectrumResult> {
    match k {
        None => full_spectrum_capped(h, caps),
        Some(k) => extremal_eigs_with(h, k, Method::Auto, caps),
    }
}

/// Caps are checked up front so oversize requests get 403 instead of a job.
fn check_caps(n: usize, k: Option<usize>, caps: Caps) -> ApiResult<()> {
    let (what, cap) = match k {
        None => ("full spectrum", caps.dense),
        Some(_) => ("extremal eigenvalues", caps.dense.max(caps.iterative)),
    };
    if n > cap {
        return Err(ApiError::from_core(Error::CapExceeded { what, n_sites: n, cap }));
    }
    Ok(())
}

async fn spectrum(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(q): Query<SpectrumQuery>,
) -> ApiResult<Response> {
    let h = app.session(&id)?.lock().unwrap().current.clone();
    let caps = app.caps;
    check_caps(h.n_sites(), q.k, caps)?;
    if h.n_sites() <= INLINE_SPECTRUM_SITES {
        let result = tokio::task::spawn_blocking(move || compute_spectrum(&h, q.k, caps))
            .await
            .expect("spectrum task")
            .map_err(ApiError::from_core)?;
        return Ok(Json(result).into_response());
    }
    let job = Uuid::new_v4();
    app.jobs.write().unwrap().insert(job, Job::Pending);
    let worker = app.clone();
    tokio::task::spawn_blocking(move || {
        let status = match compute_spectrum(&h, q.k, caps) {
            Ok(result) => Job::Done { result },
            Err(e) => Job::Failed { error: e.to_string() },
        };
        worker.jobs.write().unwrap().insert(job, status);
    });
    let body = json!({ "job": job, "status": "pending", "poll": format!("/jobs/{job}") });
    Ok((StatusCode::ACCEPTED, Json(body)).into_response())
}

async fn job(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Job>> {
    let id = Uuid::parse_str(&id).map_err(|_| ApiError::not_found(format!("no job {id}")))?;
    app.jobs.read().unwrap().get(&id).cloned().map(Json).ok_or_else(|| ApiError::not_found(format!("no job {id}")))
}

async fn models() -> Json<Value> {
    Json(json!(MODEL_CATALOG))
}

async fn scenarios() -> Json<Value> {
    Json(json!(SCENARIOS))
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RunRequest {
    size: Option<String>,
    seed: Option<u64>,
    g: Option<f64>,
    #[serde(rename = "J")]
    j: Option<f64>,
}

async fn run(Path(name): Path<String>, body: Bytes) -> ApiResult<Json<Value>> {
    scenario_info(&name).map_err(ApiError::from_core)?;
    let req: RunRequest = if body.is_empty() { RunRequest::default() } else { parse(&body)? };
    let mut params = ScenarioParams::default();
    if let Some(size) = req.size {
        params.size = Some(size.parse().map_err(ApiError::from_core)?);
    }
    params.seed = req.seed;
    params.g = req.g.unwrap_or(params.g);
    params.j = req.j.unwrap_or(params.j);
    let report = tokio::task::spawn_blocking(move || run_scenario(&name, &params))
        .await
        .expect("scenario task")
        .map_err(ApiError::from_core)?;
    Ok(Json(serde_json::to_value(report).expect("serializable")))
}

pub async fn serve(port: u16, caps: Caps) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(AppState::new(caps)))).await
}
