//! HTTP service: one-shot and streamed questions, molecule descriptions
//! and the tool list.
//!
//! Every request builds its own backend and agent run; the only shared
//! state is the immutable configuration and descriptor data.

use std::convert::Infallible;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::sse::{Event, KeepAlive, Sse};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chemagent_agent::{
    run, run_observed, AgentConfig, AgentEvent, AgentOutcome, Backend, ModelTokens, PromptStrategy, Termination,
};
use chemagent_core::toolbox::ToolRegistry;
use serde::{Deserialize, Serialize};
use tokio::sync::mpsc;

use crate::config::AppConfig;
use crate::describe::describe;

#[derive(Clone)]
pub struct AppState {
    pub config: Arc<AppConfig>,
    pub registry: Arc<ToolRegistry>,
    pub tokens: Arc<ModelTokens>,
}

impl AppState {
    pub fn new(config: AppConfig, registry: Arc<ToolRegistry>) -> Self {
        AppState {
            config: Arc::new(config),
            registry,
            tokens: Arc::new(ModelTokens::embedded()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AskRequest {
    pub question: String,
    /// `minimal` or `domain`; the configured strategy when absent.
    #[serde(default)]
    pub prompt_strategy: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepView {
    pub thought: String,
    pub tool: String,
    pub input: String,
    pub observation: String,
}

/// The service's view of an agent run. `answer` is empty unless
/// `termination` is `answered`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AskResponse {
    pub answer: String,
    pub steps: Vec<StepView>,
    pub timing_ms: u64,
    pub termination: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Payload of the stream's `final` event; the steps arrive as `step`
/// events before it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalEvent {
    pub answer: String,
    pub timing_ms: u64,
    pub termination: String,
}

/// Error body for all non-2xx responses, and payload of the stream's
/// `error` event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub termination: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<u16>,
}

#[derive(Debug, Clone, Deserialize)]
struct DescribeRequest {
    smiles: String,
}

impl From<&chemagent_agent::AgentStep> for StepView {
    fn from(s: &chemagent_agent::AgentStep) -> Self {
        StepView {
            thought: s.thought.clone(),
            tool: s.action.tool.clone(),
            input: s.action.input.clone(),
            observation: s.observation.clone(),
        }
    }
}

impl From<&AgentOutcome> for AskResponse {
    fn from(o: &AgentOutcome) -> Self {
        AskResponse {
            answer: o.final_answer.clone().unwrap_or_default(),
            steps: o.steps.iter().map(StepView::from).collect(),
            timing_ms: o.wall_time_ms,
            termination: o.termination.name().to_string(),
            error: o.error.clone(),
        }
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/v1/tools", get(tools))
        .route("/v1/describe", post(describe_handler))
        .route("/v1/ask", post(ask))
        .route("/v1/ask/stream", post(ask_stream))
        .with_state(state)
}

/// Serve until Ctrl-C, letting in-flight requests finish.
pub async fn serve(state: AppState, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
            tracing::info!("shutting down");
        })
        .await
}

fn error(status: StatusCode, message: impl Into<String>, termination: Option<&str>) -> Response {
    let body = ErrorBody {
        error: message.into(),
        termination: termination.map(str::to_string),
        status: Some(status.as_u16()),
    };
    (status, Json(body)).into_response()
}

// Handlers return early with a finished error response.
#[allow(clippy::result_large_err)]
fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, Response> {
    serde_json::from_slice(body)
        .map_err(|e| error(StatusCode::BAD_REQUEST, format!("malformed request body: {e}"), None))
}

async fn tools(State(state): State<AppState>) -> Json<serde_json::Value> {
    let list: Vec<serde_json::Value> = state
        .registry
        .tools()
        .iter()
        .map(|t| {
            serde_json::json!({
                "name": t.name,
                "description": t.description,
                "output": t.output_kind.name(),
            })
        })
        .collect();
    Json(serde_json::Value::Array(list))
}

async fn describe_handler(State(state): State<AppState>, body: Bytes) -> Response {
    let req: DescribeRequest = match parse_body(&body) {
        Ok(r) => r,
        Err(resp) => return resp,
    };
    match describe(&state.registry, &req.smiles) {
        Ok(values) => {
            let map: serde_json::Map<String, serde_json::Value> = values
                .into_iter()
                .map(|v| (v.tool, serde_json::Value::String(v.value)))
                .collect();
            Json(map).into_response()
        }
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, e, None),
    }
}

/// Everything a run needs, prepared before any response is started.
struct Prepared {
    question: String,
    agent: AgentConfig,
    backend: Arc<dyn Backend>,
}

#[allow(clippy::result_large_err)]
fn prepare(state: &AppState, body: &Bytes) -> Result<Prepared, Response> {
    let req: AskRequest = parse_body(body)?;
    if req.question.trim().is_empty() {
        return Err(error(StatusCode::BAD_REQUEST, "question must not be empty", None));
    }
    let strategy = match req.prompt_strategy.as_deref() {
        None => None,
        Some(s) => Some(
            s.parse::<PromptStrategy>()
                .map_err(|e| error(StatusCode::BAD_REQUEST, e.to_string(), None))?,
        ),
    };
    let agent = state
        .config
        .agent_config(strategy, &state.tokens)
        .map_err(|e| error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string(), None))?;
    let backend = state
        .config
        .backend
        .build(state.registry.clone(), &state.tokens)
        .map_err(|e| {
            error(
                StatusCode::BAD_GATEWAY,
                e.to_string(),
                Some(Termination::BackendError.name()),
            )
        })?;
    Ok(Prepared {
        question: req.question,
        agent,
        backend,
    })
}

fn timeout_message(state: &AppState) -> String {
    format!("no answer within {:.1} s", state.config.request_timeout.as_secs_f64())
}

async fn ask(State(state): State<AppState>, body: Bytes) -> Response {
    let p = match prepare(&state, &body) {
        Ok(p) => p,
        Err(resp) => return resp,
    };
    let run = run(&p.question, &p.agent, &state.registry, p.backend.as_ref());
    match tokio::time::timeout(state.config.request_timeout, run).await {
        Err(_) => error(StatusCode::GATEWAY_TIMEOUT, timeout_message(&state), Some("timeout")),
        Ok(outcome) if outcome.termination == Termination::BackendError => error(
            StatusCode::BAD_GATEWAY,
            outcome.error.unwrap_or_else(|| "backend failed".into()),
            Some(Termination::BackendError.name()),
        ),
        Ok(outcome) => Json(AskResponse::from(&outcome)).into_response(),
    }
}

async fn ask_stream(State(state): State<AppState>, body: Bytes) -> Response {
    let p = match prepare(&state, &body) {
        Ok(p) => p,
        Err(resp) => return resp,
    };
    let (tx, rx) = mpsc::unbounded_channel::<Event>();
    tokio::spawn(async move {
        let step_tx = tx.clone();
        let mut observer = move |event: AgentEvent| {
            if let AgentEvent::Step(step) = event {
                let event = Event::default().event("step").json_data(StepView::from(&step));
                // A closed channel means the client left; the run still finishes.
                let _ = step_tx.send(event.expect("step serializes"));
            }
        };
        let run = run_observed(
            &p.question,
            &p.agent,
            &state.registry,
            p.backend.as_ref(),
            &mut observer,
        );
        let last = match tokio::time::timeout(state.config.request_timeout, run).await {
            Err(_) => Event::default().event("error").json_data(ErrorBody {
                error: timeout_message(&state),
                termination: Some("timeout".into()),
                status: Some(StatusCode::GATEWAY_TIMEOUT.as_u16()),
            }),
            Ok(outcome) if outcome.termination == Termination::BackendError => {
                Event::default().event("error").json_data(ErrorBody {
                    error: outcome.error.unwrap_or_else(|| "backend failed".into()),
                    termination: Some(Termination::BackendError.name().into()),
                    status: Some(StatusCode::BAD_GATEWAY.as_u16()),
                })
            }
            Ok(outcome) => Event::default().event("final").json_data(FinalEvent {
                answer: outcome.final_answer.clone().unwrap_or_default(),
                timing_ms: outcome.wall_time_ms,
                termination: outcome.termination.name().to_string(),
            }),
        };
        let _ = tx.send(last.expect("event serializes"));
    });
    let stream = futures::stream::unfold(rx, |mut rx| async move {
        rx.recv().await.map(|event| (Ok::<_, Infallible>(event), rx))
    });
    Sse::new(stream).keep_alive(KeepAlive::default()).into_response()
}
