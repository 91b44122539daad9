//! JSON HTTP API consumed by the survey page.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use uuid::Uuid;

use regret_elicit::engine::Progress;
use regret_elicit::FuzzyResponse;

use crate::display::ProblemPayload;
use crate::error::ServiceError;
use crate::events::{SessionConfig, SubjectKind};
use crate::session::{Ack, NextProblem};
use crate::store::SessionStore;

pub fn router(store: Arc<SessionStore>) -> Router {
    Router::new()
        .route("/api/sessions", post(create_session).get(list_sessions))
        .route("/api/sessions/{id}/next", get(next_problem))
        .route("/api/sessions/{id}/responses", post(submit_response))
        .route("/api/sessions/{id}/report", get(report))
        .with_state(store)
}

pub enum ApiError {
    Service(ServiceError),
    /// A problem was fetched again before being answered.
    Outstanding(Box<ProblemPayload>),
}

impl From<ServiceError> for ApiError {
    fn from(e: ServiceError) -> Self {
        ApiError::Service(e)
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::Service(ServiceError::Invalid(regret_elicit::Error::Input(
            e.body_text(),
        )))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let error = match self {
            ApiError::Service(e) => e,
            ApiError::Outstanding(payload) => {
                let body = json!({
                    "error": "conflict",
                    "message": "a presented problem is still awaiting its response",
                    "outstanding": payload,
                });
                return (StatusCode::CONFLICT, Json(body)).into_response();
            }
        };
        let message = error.to_string();
        let (status, kind) = match &error {
            ServiceError::NotFound(_) => (StatusCode::NOT_FOUND, "not-found"),
            ServiceError::Conflict { .. } => (StatusCode::CONFLICT, "conflict"),
            ServiceError::Invalid(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid"),
            ServiceError::Corrupt(_) | ServiceError::Io(_) => {
                tracing::error!(error = %message, "request failed");
                (StatusCode::INTERNAL_SERVER_ERROR, "internal")
            }
        };
        (status, Json(json!({ "error": kind, "message": message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

#[derive(Debug, Deserialize)]
pub struct CreateRequest {
    pub money_scale: f64,
    pub seed: Option<u64>,
    #[serde(default)]
    pub practice: bool,
}

#[derive(Debug, Serialize)]
struct Created {
    session_id: Uuid,
    total_problems: usize,
}

async fn create_session(
    State(store): State<Arc<SessionStore>>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<Created>)> {
    let Json(req) = body?;
    let session_id = Uuid::new_v4();
    let config = SessionConfig {
        session_id,
        money_scale: req.money_scale,
        // without a seed, derive one from the id so the log stays self-contained
        seed: req.seed.unwrap_or(session_id.as_u64_pair().0),
        practice: req.practice,
        subject: SubjectKind::Human,
    };
    let handle = store.create(config)?;
    let total_problems = handle.lock().progress().total;
    tracing::info!(%session_id, "session created");
    Ok((
        StatusCode::CREATED,
        Json(Created {
            session_id,
            total_problems,
        }),
    ))
}

#[derive(Debug, Serialize)]
struct SessionSummary {
    session_id: Uuid,
    created_at: String,
    progress: Progress,
    complete: bool,
}

async fn list_sessions(
    State(store): State<Arc<SessionStore>>,
) -> ApiResult<Json<Vec<SessionSummary>>> {
    let mut out = Vec::new();
    for id in store.ids() {
        let handle = store.get(id)?;
        let session = handle.lock();
        out.push(SessionSummary {
            session_id: id,
            created_at: session.created_at().to_rfc3339(),
            progress: session.progress(),
            complete: session.is_complete(),
        });
    }
    Ok(Json(out))
}

fn parse_id(raw: &str) -> Result<Uuid, ServiceError> {
    Uuid::parse_str(raw).map_err(|_| ServiceError::NotFound(raw.to_string()))
}

#[derive(Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
enum NextBody {
    Problem(Box<ProblemPayload>),
    SessionComplete { progress: Progress },
}

async fn next_problem(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> ApiResult<Json<NextBody>> {
    let id = parse_id(&id)?;
    let handle = store.get(id)?;
    let mut session = handle.lock();
    if let Some(probe) = session.outstanding() {
        // the 409 body lets a client that lost the problem pick it up again
        return Err(ApiError::Outstanding(Box::new(ProblemPayload::new(
            &probe,
            session.progress(),
        ))));
    }
    let mut draft = session.clone();
    let (next, events) = draft.present()?;
    store.persist(id, &events)?;
    *session = draft;
    Ok(Json(match next {
        NextProblem::Problem(probe) => {
            NextBody::Problem(Box::new(ProblemPayload::new(&probe, session.progress())))
        }
        NextProblem::Complete(progress) => NextBody::SessionComplete { progress },
    }))
}

async fn submit_response(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    body: Result<Json<FuzzyResponse>, JsonRejection>,
) -> ApiResult<Json<Ack>> {
    let id = parse_id(&id)?;
    let handle = store.get(id)?;
    let Json(response) = body?;
    let mut session = handle.lock();
    // commit in memory only once the events are on disk
    let mut draft = session.clone();
    let (ack, events) = draft.submit(response)?;
    store.persist(id, &events)?;
    *session = draft;
    Ok(Json(ack))
}

async fn report(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
) -> ApiResult<Json<crate::session::SessionReport>> {
    let id = parse_id(&id)?;
    let handle = store.get(id)?;
    let report = handle.lock().report()?;
    Ok(Json(report))
}
