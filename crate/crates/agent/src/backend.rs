//! Language-model backends: the completion interface, a scripted backend
//! for tests and a rule-based oracle that answers benchmark questions.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use async_trait::async_trait;
use chemagent_core::toolbox::ToolRegistry;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::types::HistoryEntry;

/// What a backend is asked to continue. HTTP backends use only `prompt`;
/// the structured fields let test backends answer without re-parsing it.
#[derive(Debug, Clone, Copy)]
pub struct CompletionRequest<'a> {
    pub prompt: &'a str,
    pub question: &'a str,
    pub history: &'a [HistoryEntry],
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BackendError {
    #[error("script exhausted")]
    ScriptExhausted,
    #[error("request timed out after {attempts} attempt(s)")]
    Timeout { attempts: u32 },
    #[error("upstream returned HTTP {status} after {attempts} attempt(s): {body}")]
    Status { status: u16, body: String, attempts: u32 },
    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { message: String, attempts: u32 },
    #[error("malformed upstream response after {attempts} attempt(s): {message}")]
    Malformed { message: String, attempts: u32 },
    #[error("invalid backend configuration: {0}")]
    Config(String),
}

impl BackendError {
    pub fn is_timeout(&self) -> bool {
        matches!(self, BackendError::Timeout { .. })
    }
}

#[async_trait]
pub trait Backend: Send + Sync {
    /// Continue the prompt. The returned text never contains a stop
    /// sequence.
    async fn complete(&self, request: &CompletionRequest<'_>) -> Result<String, BackendError>;

    /// Short description for logs and reports.
    fn describe(&self) -> String;
}

/// Cut `text` at the earliest stop sequence.
pub fn truncate_at_stop(text: &str, stops: &[String]) -> String {
    let cut = stops
        .iter()
        .filter(|s| !s.is_empty())
        .filter_map(|s| text.find(s.as_str()))
        .min()
        .unwrap_or(text.len());
    text[..cut].to_string()
}

/// Replies with canned texts in order; errors once they run out, or
/// repeats the last one when built with [`ScriptedBackend::repeating`].
#[derive(Debug)]
pub struct ScriptedBackend {
    replies: Mutex<VecDeque<String>>,
    repeat: Option<String>,
    stops: Vec<String>,
}

impl ScriptedBackend {
    pub fn new<I, S>(replies: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ScriptedBackend {
            replies: Mutex::new(replies.into_iter().map(Into::into).collect()),
            repeat: None,
            stops: vec!["Observation:".to_string()],
        }
    }

    /// Answers every call with `reply`.
    pub fn repeating(reply: impl Into<String>) -> Self {
        ScriptedBackend {
            replies: Mutex::new(VecDeque::new()),
            repeat: Some(reply.into()),
            stops: vec!["Observation:".to_string()],
        }
    }

    /// Once the script is used up, answer every call with `reply`.
    pub fn then_repeat(mut self, reply: impl Into<String>) -> Self {
        self.repeat = Some(reply.into());
        self
    }

    pub fn with_stops(mut self, stops: Vec<String>) -> Self {
        self.stops = stops;
        self
    }

    pub fn remaining(&self) -> usize {
        self.replies.lock().expect("script lock").len()
    }
}

#[async_trait]
impl Backend for ScriptedBackend {
    async fn complete(&self, _request: &CompletionRequest<'_>) -> Result<String, BackendError> {
        let next = self.replies.lock().expect("script lock").pop_front();
        next.or_else(|| self.repeat.clone())
            .map(|r| truncate_at_stop(&r, &self.stops))
            .ok_or(BackendError::ScriptExhausted)
    }

    fn describe(&self) -> String {
        "scripted".to_string()
    }
}

/// Answers benchmark-phrased questions correctly: first the matching tool
/// call, then the tool's observation as the final answer.
///
/// With a flip probability, yes/no-style final answers are replaced by the
/// opposite word with that probability. The draw is seeded by the oracle
/// seed and the question text, so results do not depend on scheduling.
#[derive(Debug, Clone)]
pub struct RuleOracleBackend {
    registry: Arc<ToolRegistry>,
    flip_probability: f64,
    seed: u64,
}

impl RuleOracleBackend {
    pub fn new(registry: Arc<ToolRegistry>) -> Self {
        RuleOracleBackend {
            registry,
            flip_probability: 0.0,
            seed: 0,
        }
    }

    pub fn noisy(registry: Arc<ToolRegistry>, flip_probability: f64, seed: u64) -> Self {
        RuleOracleBackend {
            registry,
            flip_probability: flip_probability.clamp(0.0, 1.0),
            seed,
        }
    }

    fn flip(&self, question: &str, answer: &str, words: (&str, &str)) -> String {
        if self.flip_probability <= 0.0 {
            return answer.to_string();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(question));
        if !rng.gen_bool(self.flip_probability) {
            return answer.to_string();
        }
        match answer {
            a if a == words.0 => words.1.to_string(),
            a if a == words.1 => words.0.to_string(),
            a => a.to_string(),
        }
    }
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

#[async_trait]
impl Backend for RuleOracleBackend {
    async fn complete(&self, request: &CompletionRequest<'_>) -> Result<String, BackendError> {
        let Some((spec, smiles)) = self.registry.recognize_question(request.question) else {
            return Ok(
                " The question does not match a known tool.\nFinal Answer: I cannot answer this question.".into(),
            );
        };
        let last_step = request.history.iter().rev().find_map(|e| match e {
            HistoryEntry::Step(s) => Some(s),
            HistoryEntry::Correction { .. } => None,
        });
        Ok(match last_step {
            None => format!(
                " I should use {} on the molecule.\nAction: {}\nAction Input: {}",
                spec.name, spec.name, smiles
            ),
            Some(step) => {
                let answer = match spec.output_kind.words() {
                    Some(words) => self.flip(request.question, &step.observation, words),
                    None => step.observation.clone(),
                };
                format!(" I now know the final answer.\nFinal Answer: {answer}")
            }
        })
    }

    fn describe(&self) -> String {
        if self.flip_probability > 0.0 {
            format!("rule_oracle(p={})", self.flip_probability)
        } else {
            "rule_oracle".to_string()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req<'a>(q: &'a str, h: &'a [HistoryEntry]) -> CompletionRequest<'a> {
        CompletionRequest {
            prompt: "",
            question: q,
            history: h,
        }
    }

    #[tokio::test]
    async fn script_pops_then_exhausts() {
        let b = ScriptedBackend::new(["A", "B"]);
        assert_eq!(b.complete(&req("q", &[])).await.unwrap(), "A");
        assert_eq!(b.complete(&req("q", &[])).await.unwrap(), "B");
        assert_eq!(b.complete(&req("q", &[])).await, Err(BackendError::ScriptExhausted));
        assert_eq!(BackendError::ScriptExhausted.to_string(), "script exhausted");
    }

    #[tokio::test]
    async fn script_applies_stop_sequences() {
        let b = ScriptedBackend::new(["Action: x\nAction Input: C\nObservation: 3"]);
        assert_eq!(
            b.complete(&req("q", &[])).await.unwrap(),
            "Action: x\nAction Input: C\n"
        );
    }

    #[test]
    fn stop_truncation_picks_earliest() {
        let stops = vec!["Observation:".to_string(), "\nQuestion:".to_string()];
        assert_eq!(truncate_at_stop("a\nQuestion: b Observation:", &stops), "a");
        assert_eq!(truncate_at_stop("plain", &stops), "plain");
    }
}
