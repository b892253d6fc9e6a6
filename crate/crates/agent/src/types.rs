//! Records of an agent run.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A tool call chosen by the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentAction {
    pub tool: String,
    pub input: String,
}

/// One Thought → Action → Observation cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentStep {
    pub thought: String,
    pub action: AgentAction,
    /// The tool's answer, or the error text it produced.
    pub observation: String,
}

/// What the prompt history holds: tool steps and corrected format errors,
/// in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HistoryEntry {
    Step(AgentStep),
    /// A reply that matched neither format, and the corrective observation.
    Correction {
        reply: String,
        observation: String,
    },
}

impl HistoryEntry {
    /// The entry as prompt lines, each ending in a newline.
    pub fn serialize(&self) -> String {
        match self {
            HistoryEntry::Step(s) => format!(
                "Thought: {}\nAction: {}\nAction Input: {}\nObservation: {}\n",
                s.thought, s.action.tool, s.action.input, s.observation
            ),
            HistoryEntry::Correction { reply, observation } => {
                format!("Thought: {}\nObservation: {}\n", reply.trim(), observation)
            }
        }
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Answered,
    MaxSteps,
    ParseFailureLimit,
    BackendError,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::Answered => "answered",
            Termination::MaxSteps => "max_steps",
            Termination::ParseFailureLimit => "parse_failure_limit",
            Termination::BackendError => "backend_error",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of one run. `final_answer` is present exactly when the run was
/// answered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentOutcome {
    pub question: String,
    pub final_answer: Option<String>,
    pub steps: Vec<AgentStep>,
    pub history: Vec<HistoryEntry>,
    pub termination: Termination,
    pub parse_failures: usize,
    pub backend_calls: usize,
    /// Backend failure detail when `termination` is `backend_error`.
    pub error: Option<String>,
    /// Wall-clock duration; excluded from serialized transcripts so that
    /// reruns compare byte for byte.
    #[serde(skip)]
    pub wall_time_ms: u64,
}

/// Progress notifications emitted while a run executes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum AgentEvent {
    /// A completed tool step.
    Step(AgentStep),
    /// A reply rejected for its format.
    Correction { reply: String },
}
