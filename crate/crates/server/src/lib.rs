//! HTTP/JSON front end for the games: one in-memory session per episode,
//! plus batch endpoints for evaluation, statistics and dataset export.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use tokio::net::TcpListener;
use tokio::task::JoinHandle;

use modworld::api::{
    DatasetRequest, ErrorBody, EvalRequest, GameInfo, NewSession, SessionState, StatsRequest, StepReply,
    StepRequest, VariationSummary,
};
use modworld::dataset::{self, DatasetBundle, ActionStats, STATS_EPISODES};
use modworld::game::{self, EpisodeVariation};
use modworld::harness::{self, EvalSummary};
use modworld::module::{module_for, KnowledgeBase};
use modworld::{action, Episode, Error, GameId, Split};

#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<Mutex<HashMap<String, Episode>>>,
}

impl AppState {
    pub fn session_count(&self) -> usize {
        self.sessions.lock().expect("session table poisoned").len()
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/games", get(games))
        .route("/games/{game}/variations", get(variations))
        .route("/games/{game}/variations/{split}/{index}", get(variation))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(session).delete(delete_session))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/reset", post(reset))
        .route("/eval", post(eval))
        .route("/stats", post(stats))
        .route("/datasets", post(datasets))
        .route("/kb", get(kb))
        .with_state(state)
}

pub fn app() -> Router {
    router(AppState::default())
}

pub async fn serve(listener: TcpListener) -> std::io::Result<()> {
    axum::serve(listener, app()).await
}

/// Binds `addr` and serves in the background. Port 0 picks a free port.
pub async fn spawn(addr: &str) -> std::io::Result<(SocketAddr, JoinHandle<std::io::Result<()>>)> {
    let listener = TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    Ok((local, tokio::spawn(serve(listener))))
}

pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, kind: &str, error: impl Into<String>) -> Self {
        ApiError {
            status,
            body: ErrorBody {
                kind: kind.into(),
                error: error.into(),
            },
        }
    }

    fn no_session(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no session {id}"))
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let (status, kind) = match &e {
            Error::UnknownGame(_)
            | Error::UnknownSplit(_)
            | Error::UnknownAgent(_)
            | Error::UnrecognizedCommand(_)
            | Error::MalformedRecord(_)
            | Error::Json(_) => (StatusCode::BAD_REQUEST, "bad_request"),
            Error::IndexOutOfRange(..) => (StatusCode::NOT_FOUND, "not_found"),
            Error::InvalidAction(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_action"),
            Error::EpisodeDone => (StatusCode::CONFLICT, "episode_done"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        ApiError::new(status, kind, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

/// Runs CPU-bound work off the async workers.
async fn blocking<T, F>(work: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> modworld::Result<T> + Send + 'static,
{
    tokio::task::spawn_blocking(work)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
        .map_err(ApiError::from)
}

fn parse_game(text: &str) -> Result<GameId, ApiError> {
    text.parse::<GameId>().map_err(ApiError::from)
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

async fn games() -> Json<Vec<GameInfo>> {
    Json(
        GameId::ALL
            .iter()
            .map(|&g| GameInfo {
                id: g,
                title: g.title().to_string(),
                module: module_for(g).name().to_string(),
            })
            .collect(),
    )
}

#[derive(Deserialize)]
struct SplitQuery {
    split: Option<Split>,
}

async fn variations(Path(game): Path<String>, Query(q): Query<SplitQuery>) -> ApiResult<Vec<VariationSummary>> {
    let game = parse_game(&game)?;
    let split = q.split.unwrap_or(Split::Test);
    let all = blocking(move || game::generate_split(game, split)).await?;
    Ok(Json(
        all.iter()
            .enumerate()
            .map(|(index, v)| VariationSummary {
                index,
                seed: v.seed,
                task: v.task_description.clone(),
            })
            .collect(),
    ))
}

async fn variation(Path((game, split, index)): Path<(String, String, usize)>) -> ApiResult<EpisodeVariation> {
    let game = parse_game(&game)?;
    let split: Split = split.parse()?;
    Ok(Json(blocking(move || game::generate(game, split, index)).await?))
}

fn resolve(request: &NewSession) -> modworld::Result<EpisodeVariation> {
    match (request.index, request.seed) {
        (None, Some(seed)) if request.split.is_none() => game::from_seed(request.game, seed),
        (index, _) => game::generate(request.game, request.split.unwrap_or(Split::Test), index.unwrap_or(0)),
    }
}

async fn create_session(
    State(state): State<AppState>,
    Json(request): Json<NewSession>,
) -> Result<(StatusCode, Json<SessionState>), ApiError> {
    let modules = request.modules;
    let episode = blocking(move || Episode::new(resolve(&request)?, modules)).await?;
    let id = uuid::Uuid::new_v4().to_string();
    let reply = SessionState::of(id.clone(), &episode);
    state.sessions.lock().expect("session table poisoned").insert(id, episode);
    Ok((StatusCode::CREATED, Json(reply)))
}

async fn session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<SessionState> {
    let sessions = state.sessions.lock().expect("session table poisoned");
    let episode = sessions.get(&id).ok_or_else(|| ApiError::no_session(&id))?;
    Ok(Json(SessionState::of(id.clone(), episode)))
}

async fn delete_session(State(state): State<AppState>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    match state.sessions.lock().expect("session table poisoned").remove(&id) {
        Some(_) => Ok(StatusCode::NO_CONTENT),
        None => Err(ApiError::no_session(&id)),
    }
}

async fn step(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Json(request): Json<StepRequest>,
) -> ApiResult<StepReply> {
    let mut sessions = state.sessions.lock().expect("session table poisoned");
    let episode = sessions.get_mut(&id).ok_or_else(|| ApiError::no_session(&id))?;
    let outcome = if request.exact {
        let parsed = action::parse(&request.action)?;
        episode.step(&parsed)?
    } else {
        episode.step_text(&request.action)?
    };
    Ok(Json(StepReply::of(outcome, episode)))
}

/// Restarts the session on the same variation and module setting.
async fn reset(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<SessionState> {
    let mut sessions = state.sessions.lock().expect("session table poisoned");
    let episode = sessions.get_mut(&id).ok_or_else(|| ApiError::no_session(&id))?;
    *episode = Episode::new(episode.variation().clone(), episode.modules())?;
    Ok(Json(SessionState::of(id.clone(), episode)))
}

async fn eval(Json(r): Json<EvalRequest>) -> ApiResult<EvalSummary> {
    let summary = blocking(move || harness::evaluate(r.agent, r.game, r.split, r.modules, r.episodes, r.seed)).await?;
    Ok(Json(summary))
}

async fn stats(Json(r): Json<StatsRequest>) -> ApiResult<ActionStats> {
    let episodes = r.episodes.unwrap_or(STATS_EPISODES);
    Ok(Json(blocking(move || dataset::action_stats(r.game, r.modules, episodes, r.seed)).await?))
}

async fn datasets(Json(r): Json<DatasetRequest>) -> ApiResult<DatasetBundle> {
    Ok(Json(blocking(move || dataset::build_dataset(r.game, r.split, r.modules)).await?))
}

async fn kb() -> impl IntoResponse {
    (
        [(header::CONTENT_TYPE, "text/tab-separated-values; charset=utf-8")],
        KnowledgeBase::shared().to_tsv(),
    )
}
