//! Client for OpenAI-compatible completion servers (vLLM, llama.cpp,
//! Ollama, hosted APIs).

use std::time::Duration;

use async_trait::async_trait;
use serde_json::{json, Value};

use crate::backend::{truncate_at_stop, Backend, BackendError, CompletionRequest};
use crate::prompt::WrapperMode;

/// Connection and sampling settings for [`HttpBackend`].
#[derive(Debug, Clone)]
pub struct HttpSettings {
    /// Server root, e.g. `http://localhost:8000`; `/v1/...` is appended.
    pub endpoint_url: String,
    pub model_id: String,
    pub api_key: Option<String>,
    pub mode: WrapperMode,
    pub temperature: f32,
    pub max_tokens: u32,
    pub stop_sequences: Vec<String>,
    pub timeout: Duration,
    /// Additional attempts after the first failure.
    pub retry_count: u32,
    /// Delay before the first retry; doubled for each further retry.
    pub retry_base_delay: Duration,
}

#[derive(Debug, Clone)]
pub struct HttpBackend {
    client: reqwest::Client,
    settings: HttpSettings,
}

impl HttpBackend {
    pub fn new(settings: HttpSettings) -> Result<Self, BackendError> {
        if settings.endpoint_url.trim().is_empty() || settings.model_id.trim().is_empty() {
            return Err(BackendError::Config(
                "an HTTP backend needs an endpoint URL and a model id".into(),
            ));
        }
        let client = reqwest::Client::builder()
            .timeout(settings.timeout)
            .build()
            .map_err(|e| BackendError::Config(e.to_string()))?;
        Ok(HttpBackend { client, settings })
    }

    pub fn settings(&self) -> &HttpSettings {
        &self.settings
    }

    fn url(&self) -> String {
        let root = self.settings.endpoint_url.trim_end_matches('/');
        let root = root.strip_suffix("/v1").unwrap_or(root);
        match self.settings.mode {
            WrapperMode::Completion => format!("{root}/v1/completions"),
            WrapperMode::Chat => format!("{root}/v1/chat/completions"),
        }
    }

    fn body(&self, prompt: &str) -> Value {
        let s = &self.settings;
        let mut body = json!({
            "model": s.model_id,
            "temperature": s.temperature,
            "max_tokens": s.max_tokens,
            "stop": s.stop_sequences,
        });
        match s.mode {
            WrapperMode::Completion => body["prompt"] = json!(prompt),
            WrapperMode::Chat => body["messages"] = json!([{ "role": "user", "content": prompt }]),
        }
        body
    }

    async fn attempt(&self, body: &Value, attempts: u32) -> Result<String, BackendError> {
        let mut request = self.client.post(self.url()).json(body);
        if let Some(key) = &self.settings.api_key {
            request = request.bearer_auth(key);
        }
        let response = request.send().await.map_err(|e| transport(e, attempts))?;
        let status = response.status();
        let text = response.text().await.map_err(|e| transport(e, attempts))?;
        if !status.is_success() {
            return Err(BackendError::Status {
                status: status.as_u16(),
                body: text.chars().take(500).collect(),
                attempts,
            });
        }
        let value: Value = serde_json::from_str(&text).map_err(|e| BackendError::Malformed {
            message: e.to_string(),
            attempts,
        })?;
        let choice = &value["choices"][0];
        let content = match self.settings.mode {
            WrapperMode::Completion => choice["text"].as_str(),
            WrapperMode::Chat => choice["message"]["content"].as_str(),
        };
        content.map(str::to_string).ok_or_else(|| BackendError::Malformed {
            message: "response has no choices[0] text".into(),
            attempts,
        })
    }
}

fn transport(e: reqwest::Error, attempts: u32) -> BackendError {
    if e.is_timeout() {
        BackendError::Timeout { attempts }
    } else {
        BackendError::Transport {
            message: e.to_string(),
            attempts,
        }
    }
}

#[async_trait]
impl Backend for HttpBackend {
    async fn complete(&self, request: &CompletionRequest<'_>) -> Result<String, BackendError> {
        let body = self.body(request.prompt);
        let mut delay = self.settings.retry_base_delay;
        let mut attempt = 1;
        loop {
            match self.attempt(&body, attempt).await {
                // Servers may ignore `stop`; enforce it here as well.
                Ok(text) => return Ok(truncate_at_stop(&text, &self.settings.stop_sequences)),
                Err(e) if attempt > self.settings.retry_count => return Err(e),
                Err(e) => {
                    tracing::warn!(attempt, error = %e, "completion request failed; retrying in {delay:?}");
                    tokio::time::sleep(delay).await;
                    delay = delay.saturating_mul(2);
                    attempt += 1;
                }
            }
        }
    }

    fn describe(&self) -> String {
        format!("{} at {}", self.settings.model_id, self.settings.endpoint_url)
    }
}
