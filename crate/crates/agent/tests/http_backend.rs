//! The OpenAI-compatible client against a local mock server.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::extract::State;
use axum::http::{HeaderMap, StatusCode};
use axum::routing::post;
use axum::{Json, Router};
use chemagent_agent::{Backend, BackendError, CompletionRequest, HttpBackend, HttpSettings, WrapperMode};
use serde_json::{json, Value};

/// A recorded request: route, JSON body and authorization header.
type Recorded = (String, Value, Option<String>);

#[derive(Clone, Default)]
struct Mock {
    /// Number of initial requests answered with HTTP 500.
    failures: usize,
    delay: Duration,
    calls: Arc<AtomicUsize>,
    bodies: Arc<Mutex<Vec<Recorded>>>,
}

async fn completions(State(m): State<Mock>, headers: HeaderMap, Json(body): Json<Value>) -> (StatusCode, Json<Value>) {
    record(&m, "completions", &headers, body);
    respond(
        &m,
        json!({"choices": [{"text": " I know.\nFinal Answer: 20.23\nObservation: leaked"}]}),
    )
    .await
}

async fn chat(State(m): State<Mock>, headers: HeaderMap, Json(body): Json<Value>) -> (StatusCode, Json<Value>) {
    record(&m, "chat", &headers, body);
    respond(
        &m,
        json!({"choices": [{"message": {"role": "assistant", "content": "Final Answer: Yes"}}]}),
    )
    .await
}

fn record(m: &Mock, route: &str, headers: &HeaderMap, body: Value) {
    let auth = headers.get("authorization").map(|v| v.to_str().unwrap().to_string());
    m.bodies.lock().unwrap().push((route.to_string(), body, auth));
}

async fn respond(m: &Mock, ok: Value) -> (StatusCode, Json<Value>) {
    let n = m.calls.fetch_add(1, Ordering::SeqCst);
    tokio::time::sleep(m.delay).await;
    if n < m.failures {
        (StatusCode::INTERNAL_SERVER_ERROR, Json(json!({"error": "busy"})))
    } else {
        (StatusCode::OK, Json(ok))
    }
}

async fn serve(mock: Mock) -> String {
    let app = Router::new()
        .route("/v1/completions", post(completions))
        .route("/v1/chat/completions", post(chat))
        .with_state(mock);
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    format!("http://{addr}")
}

fn settings(url: String, mode: WrapperMode) -> HttpSettings {
    HttpSettings {
        endpoint_url: url,
        model_id: "test-model".into(),
        api_key: Some("secret".into()),
        mode,
        temperature: 0.0,
        max_tokens: 64,
        stop_sequences: vec!["Observation:".into()],
        timeout: Duration::from_millis(500),
        retry_count: 2,
        retry_base_delay: Duration::from_millis(10),
    }
}

fn request(prompt: &str) -> CompletionRequest<'_> {
    CompletionRequest {
        prompt,
        question: "q",
        history: &[],
    }
}

#[tokio::test]
async fn completion_request_shape_and_client_side_stop() {
    let mock = Mock::default();
    let url = serve(mock.clone()).await;
    let b = HttpBackend::new(settings(url, WrapperMode::Completion)).unwrap();
    let text = b.complete(&request("PROMPT")).await.unwrap();
    assert_eq!(text, " I know.\nFinal Answer: 20.23\n");
    assert!(!text.contains("Observation:"));
    let bodies = mock.bodies.lock().unwrap();
    let (route, body, auth) = &bodies[0];
    assert_eq!(route, "completions");
    assert_eq!(body["model"], "test-model");
    assert_eq!(body["prompt"], "PROMPT");
    assert_eq!(body["temperature"], 0.0);
    assert_eq!(body["max_tokens"], 64);
    assert_eq!(body["stop"], json!(["Observation:"]));
    assert_eq!(auth.as_deref(), Some("Bearer secret"));
}

#[tokio::test]
async fn chat_mode_sends_one_user_message() {
    let mock = Mock::default();
    let url = serve(mock.clone()).await;
    // A trailing /v1 on the endpoint is tolerated.
    let b = HttpBackend::new(settings(format!("{url}/v1/"), WrapperMode::Chat)).unwrap();
    assert_eq!(b.complete(&request("hello")).await.unwrap(), "Final Answer: Yes");
    let bodies = mock.bodies.lock().unwrap();
    assert_eq!(bodies[0].0, "chat");
    assert_eq!(bodies[0].1["messages"], json!([{"role": "user", "content": "hello"}]));
}

#[tokio::test]
async fn transient_failures_are_retried() {
    let mock = Mock {
        failures: 2,
        ..Default::default()
    };
    let url = serve(mock.clone()).await;
    let b = HttpBackend::new(settings(url, WrapperMode::Completion)).unwrap();
    assert!(b.complete(&request("p")).await.is_ok());
    assert_eq!(mock.calls.load(Ordering::SeqCst), 3);
}

#[tokio::test]
async fn persistent_failures_surface_after_retries() {
    let mock = Mock {
        failures: 100,
        ..Default::default()
    };
    let url = serve(mock.clone()).await;
    let b = HttpBackend::new(settings(url, WrapperMode::Completion)).unwrap();
    let err = b.complete(&request("p")).await.unwrap_err();
    assert!(
        matches!(
            err,
            BackendError::Status {
                status: 500,
                attempts: 3,
                ..
            }
        ),
        "{err}"
    );
    assert_eq!(mock.calls.load(Ordering::SeqCst), 3);
}

#[tokio::test]
async fn slow_upstream_times_out() {
    let mock = Mock {
        delay: Duration::from_secs(2),
        ..Default::default()
    };
    let url = serve(mock).await;
    let mut s = settings(url, WrapperMode::Completion);
    s.retry_count = 0;
    s.timeout = Duration::from_millis(100);
    let err = HttpBackend::new(s).unwrap().complete(&request("p")).await.unwrap_err();
    assert!(err.is_timeout(), "{err}");
}

#[tokio::test]
async fn unreachable_endpoint_is_a_transport_error() {
    let mut s = settings("http://127.0.0.1:9".into(), WrapperMode::Completion);
    s.retry_count = 1;
    let err = HttpBackend::new(s).unwrap().complete(&request("p")).await.unwrap_err();
    assert!(
        matches!(
            err,
            BackendError::Transport { attempts: 2, .. } | BackendError::Timeout { .. }
        ),
        "{err}"
    );
}

#[test]
fn missing_endpoint_or_model_is_rejected() {
    let mut s = settings(String::new(), WrapperMode::Completion);
    assert!(HttpBackend::new(s.clone()).is_err());
    s.endpoint_url = "http://x".into();
    s.model_id = String::new();
    assert!(HttpBackend::new(s).is_err());
}
