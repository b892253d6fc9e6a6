//! A zero-shot ReAct agent over the cheminformatics tool registry.
//!
//! The model sees the tool names and descriptions and replies in a
//! Thought / Action / Action Input / Final Answer format. The loop runs the
//! chosen tool, feeds the observation back, and stops at a final answer,
//! after `max_steps` tool steps, after too many format errors, or when the
//! backend fails.

pub mod backend;
pub mod config;
pub mod http;
pub mod parse;
pub mod prompt;
pub mod run;
pub mod types;

pub use backend::{Backend, BackendError, CompletionRequest, RuleOracleBackend, ScriptedBackend};
pub use config::{AgentConfig, BackendConfig, BackendKind};
pub use http::{HttpBackend, HttpSettings};
pub use parse::{parse_model_output, ParsedReply};
pub use prompt::{ModelTokens, PromptStrategy, PromptTemplate, Wrapper, WrapperMode};
pub use run::{run, run_observed};
pub use types::{AgentAction, AgentEvent, AgentOutcome, AgentStep, HistoryEntry, Termination};
