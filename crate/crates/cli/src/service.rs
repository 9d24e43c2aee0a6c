//! HTTP service over one simulated device.
//!
//! Read endpoints share a read lock so they observe a consistent snapshot.
//! Commands take the write lock, so they are serialized, and only they
//! change device state.

use std::convert::Infallible;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::stream::{self, Stream};
use serde::{Deserialize, Serialize};
use tokio::sync::{broadcast, RwLock};

use voxnav_core::dialogue::{Device, DialogueSession, ExecutionResult};
use voxnav_core::harness::{AppSummary, SimDevice};
use voxnav_core::lang::{CommandParser, RuleParser};
use voxnav_core::screen::{ScreenTree, TooltipMap};

/// Events buffered per subscriber before the slowest one starts lagging.
const EVENT_BUFFER: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenSnapshot {
    pub screen: ScreenTree,
    pub tooltips: TooltipMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServiceEvent {
    /// One executed, ineffective or rejected step.
    Feedback { utterance: String, result: Box<ExecutionResult> },
    /// The screen after a step.
    Snapshot(ScreenSnapshot),
}

impl ServiceEvent {
    fn name(&self) -> &'static str {
        match self {
            ServiceEvent::Feedback { .. } => "feedback",
            ServiceEvent::Snapshot(_) => "snapshot",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandRequest {
    pub utterance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandResponse {
    pub utterance: String,
    /// Canonical MR text when the utterance parsed.
    pub mr: Option<String>,
    /// Transcript entries this command added, in execution order.
    pub results: Vec<ExecutionResult>,
    pub feedback: Vec<String>,
    pub error: Option<ErrorBody>,
    pub screen: ScreenTree,
    pub tooltips: TooltipMap,
}

pub struct AppState {
    session: RwLock<DialogueSession<SimDevice>>,
    parser: Box<dyn CommandParser + Send + Sync>,
    events: broadcast::Sender<ServiceEvent>,
}

pub type SharedState = Arc<AppState>;

impl AppState {
    pub fn new(session: DialogueSession<SimDevice>, parser: RuleParser) -> SharedState {
        let (events, _) = broadcast::channel(EVENT_BUFFER);
        Arc::new(Self {
            session: RwLock::new(session),
            parser: Box::new(parser),
            events,
        })
    }

    pub fn subscribe(&self) -> broadcast::Receiver<ServiceEvent> {
        self.events.subscribe()
    }

    fn publish(&self, event: ServiceEvent) {
        // no subscribers is fine
        let _ = self.events.send(event);
    }
}

fn snapshot(session: &DialogueSession<SimDevice>) -> ScreenSnapshot {
    ScreenSnapshot {
        screen: session.device().current_screen().clone(),
        tooltips: session.tooltips().clone(),
    }
}

pub fn router(state: SharedState) -> Router {
    Router::new()
        .route("/apps", get(list_apps))
        .route("/apps/{package}", get(get_app))
        .route("/screen", get(get_screen))
        .route("/transcript", get(get_transcript))
        .route("/command", post(post_command))
        .route("/events", get(events))
        .with_state(state)
}

async fn list_apps(State(state): State<SharedState>) -> Json<Vec<AppSummary>> {
    Json(state.session.read().await.device().app_summaries())
}

async fn get_app(State(state): State<SharedState>, Path(package): Path<String>) -> Response {
    match state.session.read().await.device().app_summary(&package) {
        Some(app) => Json(app).into_response(),
        None => (
            StatusCode::NOT_FOUND,
            Json(ErrorBody {
                code: "UnknownApp".into(),
                message: format!("no installed app {package}"),
                command_index: None,
            }),
        )
            .into_response(),
    }
}

async fn get_screen(State(state): State<SharedState>) -> Json<ScreenSnapshot> {
    Json(snapshot(&*state.session.read().await))
}

async fn get_transcript(State(state): State<SharedState>) -> Json<Vec<ExecutionResult>> {
    Json(state.session.read().await.transcript().to_vec())
}

/// Parses against the current screen, queues and executes step by step,
/// publishing feedback and a snapshot after each step. Parse failures and
/// rejected steps answer 422 with the same body shape.
async fn post_command(State(state): State<SharedState>, Json(req): Json<CommandRequest>) -> Response {
    let mut session = state.session.write().await;
    let mut response = CommandResponse {
        utterance: req.utterance.clone(),
        mr: None,
        results: Vec::new(),
        feedback: Vec::new(),
        error: None,
        screen: session.device().current_screen().clone(),
        tooltips: session.tooltips().clone(),
    };
    let mr = match state.parser.parse(&req.utterance, &session.screen_schema()) {
        Ok(mr) => mr,
        Err(e) => {
            response.feedback.push(format!("could not understand {:?}: {}", req.utterance, e.kind));
            response.error = Some(ErrorBody {
                code: e.kind.code().into(),
                message: e.to_string(),
                command_index: Some(e.command_index),
            });
            return (StatusCode::UNPROCESSABLE_ENTITY, Json(response)).into_response();
        }
    };
    response.mr = Some(mr.to_string());
    let enqueue_error = session.enqueue(&mr).err();
    while let Ok(result) = session.step() {
        let rejected = result.status.is_rejected();
        state.publish(ServiceEvent::Feedback {
            utterance: req.utterance.clone(),
            result: Box::new(result.clone()),
        });
        state.publish(ServiceEvent::Snapshot(snapshot(&session)));
        response.results.push(result);
        if rejected {
            session.clear_queue();
            break;
        }
    }
    if let Some(e) = enqueue_error {
        for result in e.rejected {
            state.publish(ServiceEvent::Feedback {
                utterance: req.utterance.clone(),
                result: Box::new(result.clone()),
            });
            response.results.push(result);
        }
    }
    response.feedback = response.results.iter().map(|r| r.feedback.clone()).collect();
    let failed = response.results.iter().find_map(|r| match &r.status {
        voxnav_core::dialogue::Status::Rejected { reason } => Some(ErrorBody {
            code: reason.code().into(),
            message: reason.to_string(),
            command_index: None,
        }),
        _ => None,
    });
    let now = snapshot(&session);
    response.screen = now.screen;
    response.tooltips = now.tooltips;
    match failed {
        Some(error) => {
            response.error = Some(error);
            (StatusCode::UNPROCESSABLE_ENTITY, Json(response)).into_response()
        }
        None => Json(response).into_response(),
    }
}

/// Server-sent events: `snapshot` and `feedback`, JSON-encoded, in the
/// order steps ran. A lagging subscriber skips what it missed.
async fn events(State(state): State<SharedState>) -> Sse<impl Stream<Item = Result<Event, Infallible>>> {
    let rx = state.subscribe();
    let stream = stream::unfold(rx, |mut rx| async move {
        loop {
            match rx.recv().await {
                Ok(event) => {
                    let sse = Event::default()
                        .event(event.name())
                        .json_data(&event)
                        .unwrap_or_else(|_| Event::default().comment("unserializable event"));
                    return Some((Ok(sse), rx));
                }
                Err(broadcast::error::RecvError::Lagged(_)) => continue,
                Err(broadcast::error::RecvError::Closed) => return None,
            }
        }
    });
    Sse::new(stream).keep_alive(KeepAlive::new().interval(Duration::from_secs(15)))
}
