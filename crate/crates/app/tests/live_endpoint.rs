//! Benchmark runs against an OpenAI-compatible server, producing one
//! summary row.
//!
//! The live variant runs only when `CHEMAGENT_LIVE_ENDPOINT` and
//! `CHEMAGENT_LIVE_MODEL` are set (optionally `CHEMAGENT_LIVE_QUESTIONS`,
//! default 10, and `CHEMAGENT_LIVE_NODE`); otherwise it reports that it was
//! skipped. The mock variant always runs against a local stand-in server.

use axum::routing::post;
use axum::{Json, Router};
use chemagent_agent::ModelTokens;
use chemagent_app::config::{AppConfig, Settings};
use chemagent_bench::{
    generate, read_summary, run_benchmark, write_reports, BackendSource, BenchmarkSet, Labels, SetName, SummaryRow,
};
use chemagent_core::corpus::{parse_molecule_list, DEFAULT_MOLECULES};
use serde_json::{json, Value};

/// Every `len / n`-th question, so all tools are represented.
fn subset(set: SetName, n: usize) -> BenchmarkSet {
    let registry = chemagent_core::toolbox::default_registry();
    let full = generate(&registry, set, &parse_molecule_list(DEFAULT_MOLECULES), 1).unwrap();
    let step = (full.questions.len() / n.max(1)).max(1);
    BenchmarkSet {
        name: full.name,
        questions: full.questions.into_iter().step_by(step).take(n).collect(),
    }
}

/// Run `set` over HTTP and return the summary row exactly as written to
/// `summary.csv`, together with the file's text.
async fn run_http(endpoint: &str, model: &str, node: &str, set: &BenchmarkSet) -> (SummaryRow, String) {
    let settings: Settings = [
        ("backend", "http"),
        ("endpoint", endpoint),
        ("model", model),
        ("retries", "1"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect();
    let cfg = AppConfig::from_settings(&settings).unwrap();
    let registry = cfg.registry().unwrap();
    let tokens = ModelTokens::embedded();
    let agent = cfg.agent_config(None, &tokens).unwrap();
    let backends = BackendSource::from_config(&cfg.backend, registry.clone(), &tokens).unwrap();
    let labels = Labels {
        model: cfg.backend.model_label(),
        node: node.to_string(),
    };
    let run = run_benchmark(set, &agent, registry, &backends, 1, &labels).await;

    let dir = tempfile::tempdir().unwrap();
    write_reports(&run, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let rows = read_summary(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 1, "{text}");
    assert_eq!(text.lines().next(), Some("Model,Node,QuestionSet,Prompt,Time,Accuracy"));
    (rows.into_iter().next().unwrap(), text)
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn live_endpoint_emits_a_summary_row() {
    let (Ok(endpoint), Ok(model)) = (
        std::env::var("CHEMAGENT_LIVE_ENDPOINT"),
        std::env::var("CHEMAGENT_LIVE_MODEL"),
    ) else {
        eprintln!("skipped: set CHEMAGENT_LIVE_ENDPOINT and CHEMAGENT_LIVE_MODEL to run against a live server");
        return;
    };
    let n = std::env::var("CHEMAGENT_LIVE_QUESTIONS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(10);
    let node = std::env::var("CHEMAGENT_LIVE_NODE").unwrap_or_else(|_| "live".into());
    let set = subset(SetName::Full, n);
    let (row, text) = run_http(&endpoint, &model, &node, &set).await;
    print!("{text}");
    assert_eq!(row.model, model);
    assert_eq!(row.question_set, "Full");
    assert!((0.0..=100.0).contains(&row.accuracy));
    assert!(row.time >= 0.0, "time is reported in minutes to two decimals");
}

/// A stand-in server whose model always answers "Yes".
async fn yes_server() -> String {
    async fn completions(Json(_): Json<Value>) -> Json<Value> {
        Json(json!({"choices": [{"index": 0, "text": "Final Answer: Yes", "finish_reason": "stop"}]}))
    }
    async fn chat(Json(_): Json<Value>) -> Json<Value> {
        Json(json!({"choices": [{"index": 0, "message": {"role": "assistant", "content": "Final Answer: Yes"}}]}))
    }
    let app = Router::new()
        .route("/v1/completions", post(completions))
        .route("/v1/chat/completions", post(chat));
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    format!("http://{addr}")
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn mock_endpoint_emits_the_expected_summary_row() {
    let url = yes_server().await;
    let set = subset(SetName::Qualitative, 50);
    assert_eq!(set.questions.len(), 50);
    // Answering "Yes" to everything is right exactly when the gold is "Yes".
    let yes = set.questions.iter().filter(|q| q.gold == "Yes").count();
    assert!(yes > 0 && yes < 50, "the subset mixes Yes and No golds");
    let expected = 100.0 * yes as f64 / 50.0;

    let (row, text) = run_http(&url, "mock-model", "ci", &set).await;
    let line = text.lines().nth(1).unwrap();
    assert!(line.starts_with("mock-model,ci,Qualitative,"), "{line}");
    assert_eq!(row.accuracy, (expected * 10.0).round() / 10.0);
    assert!(row.time >= 0.0, "time is reported in minutes to two decimals");
}
