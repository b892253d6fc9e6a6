//! Backend and agent settings.

use std::sync::Arc;
use std::time::Duration;

use chemagent_core::toolbox::ToolRegistry;
use serde::{Deserialize, Serialize};

use crate::backend::{Backend, BackendError, RuleOracleBackend, ScriptedBackend};
use crate::http::{HttpBackend, HttpSettings};
use crate::prompt::{ModelTokens, PromptStrategy, PromptTemplate, WrapperMode};

/// Environment variables consulted, in order, for the bearer token.
pub const API_KEY_VARS: [&str; 2] = ["CHEMAGENT_API_KEY", "OPENAI_API_KEY"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BackendKind {
    HttpOpenaiCompatible,
    Scripted {
        replies: Vec<String>,
        /// Keep answering with the last reply once the script runs out.
        #[serde(default)]
        repeat_last: bool,
    },
    RuleOracle {
        /// Probability of flipping a yes/no-style final answer.
        #[serde(default)]
        flip_probability: f64,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub endpoint_url: Option<String>,
    pub model_id: Option<String>,
    /// Overrides the mode from the model token table.
    pub wrapper_mode: Option<WrapperMode>,
    pub temperature: f32,
    pub max_tokens: u32,
    pub stop_sequences: Vec<String>,
    pub timeout: Duration,
    pub retry_count: u32,
    pub retry_base_delay: Duration,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            kind: BackendKind::RuleOracle {
                flip_probability: 0.0,
                seed: 0,
            },
            endpoint_url: None,
            model_id: None,
            wrapper_mode: None,
            temperature: 0.0,
            max_tokens: 256,
            stop_sequences: vec!["Observation:".to_string()],
            timeout: Duration::from_secs(120),
            retry_count: 3,
            retry_base_delay: Duration::from_millis(500),
        }
    }
}

impl BackendConfig {
    pub fn http(endpoint_url: impl Into<String>, model_id: impl Into<String>) -> Self {
        BackendConfig {
            kind: BackendKind::HttpOpenaiCompatible,
            endpoint_url: Some(endpoint_url.into()),
            model_id: Some(model_id.into()),
            ..Default::default()
        }
    }

    pub fn scripted<I: IntoIterator<Item = S>, S: Into<String>>(replies: I) -> Self {
        BackendConfig {
            kind: BackendKind::Scripted {
                replies: replies.into_iter().map(Into::into).collect(),
                repeat_last: false,
            },
            ..Default::default()
        }
    }

    pub fn rule_oracle() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        if self.kind == BackendKind::HttpOpenaiCompatible {
            let missing = |v: &Option<String>| v.as_deref().is_none_or(|s| s.trim().is_empty());
            if missing(&self.endpoint_url) || missing(&self.model_id) {
                return Err(BackendError::Config(
                    "http_openai_compatible needs an endpoint URL and a model id".into(),
                ));
            }
        }
        if let BackendKind::RuleOracle { flip_probability, .. } = self.kind {
            if !(0.0..=1.0).contains(&flip_probability) {
                return Err(BackendError::Config("flip probability must lie in [0, 1]".into()));
            }
        }
        Ok(())
    }

    /// Label used in reports: the model id, or the backend kind.
    pub fn model_label(&self) -> String {
        match (&self.kind, &self.model_id) {
            (BackendKind::HttpOpenaiCompatible, Some(m)) => m.clone(),
            (BackendKind::Scripted { .. }, _) => "scripted".into(),
            (BackendKind::RuleOracle { flip_probability, .. }, _) if *flip_probability > 0.0 => {
                format!("rule_oracle(p={flip_probability})")
            }
            _ => "rule_oracle".into(),
        }
    }

    /// Build the backend. HTTP backends take the wrapper mode from `tokens`
    /// unless overridden, and the bearer token from the environment.
    pub fn build(&self, registry: Arc<ToolRegistry>, tokens: &ModelTokens) -> Result<Arc<dyn Backend>, BackendError> {
        self.validate()?;
        Ok(match &self.kind {
            BackendKind::HttpOpenaiCompatible => {
                let model_id = self.model_id.clone().unwrap_or_default();
                let mode = self.wrapper_mode.unwrap_or_else(|| tokens.lookup(&model_id).mode);
                Arc::new(HttpBackend::new(HttpSettings {
                    endpoint_url: self.endpoint_url.clone().unwrap_or_default(),
                    model_id,
                    api_key: api_key_from_env(),
                    mode,
                    temperature: self.temperature,
                    max_tokens: self.max_tokens,
                    stop_sequences: self.stop_sequences.clone(),
                    timeout: self.timeout,
                    retry_count: self.retry_count,
                    retry_base_delay: self.retry_base_delay,
                })?)
            }
            BackendKind::Scripted { replies, repeat_last } => {
                let mut backend = ScriptedBackend::new(replies.clone());
                if let (true, Some(last)) = (repeat_last, replies.last()) {
                    // The script plays once, then the last reply repeats.
                    backend = backend.then_repeat(last.clone());
                }
                Arc::new(backend.with_stops(self.stop_sequences.clone()))
            }
            BackendKind::RuleOracle { flip_probability, seed } => {
                Arc::new(RuleOracleBackend::noisy(registry, *flip_probability, *seed))
            }
        })
    }

    /// The prompt template for `strategy` with this model's wrapper tokens.
    /// Chat-mode models get no tokens: the server applies its own template.
    pub fn template(&self, strategy: PromptStrategy, tokens: &ModelTokens) -> PromptTemplate {
        let template = PromptTemplate::embedded(strategy);
        match (&self.kind, &self.model_id) {
            (BackendKind::HttpOpenaiCompatible, Some(model)) => {
                let mut wrapper = tokens.lookup(model);
                if let Some(mode) = self.wrapper_mode {
                    wrapper.mode = mode;
                }
                if wrapper.mode == WrapperMode::Chat {
                    wrapper.begin.clear();
                    wrapper.end.clear();
                }
                template.with_wrapper(wrapper)
            }
            _ => template,
        }
    }
}

pub fn api_key_from_env() -> Option<String> {
    API_KEY_VARS
        .iter()
        .find_map(|v| std::env::var(v).ok().filter(|k| !k.trim().is_empty()))
}

/// Loop limits and the prompt.
#[derive(Debug, Clone)]
pub struct AgentConfig {
    /// Tool steps allowed before giving up; at least 1.
    pub max_steps: usize,
    /// Format errors tolerated; the run stops when this many occur.
    pub parse_retry_limit: usize,
    pub prompt: PromptTemplate,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            max_steps: 5,
            parse_retry_limit: 2,
            prompt: PromptTemplate::embedded(PromptStrategy::default()),
        }
    }
}

impl AgentConfig {
    pub fn with_strategy(strategy: PromptStrategy) -> Self {
        AgentConfig {
            prompt: PromptTemplate::embedded(strategy),
            ..Default::default()
        }
    }
}
