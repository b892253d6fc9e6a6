//! The ReAct loop: render → complete → parse → act, until a final answer
//! or a limit.

use std::time::Instant;

use chemagent_core::toolbox::ToolRegistry;

use crate::backend::{Backend, CompletionRequest};
use crate::config::AgentConfig;
use crate::parse::{parse_model_output, ParsedReply};
use crate::prompt::CORRECTIVE_OBSERVATION;
use crate::types::{AgentEvent, AgentOutcome, AgentStep, HistoryEntry, Termination};

/// Answer `question` with tools from `registry`.
pub async fn run(question: &str, cfg: &AgentConfig, registry: &ToolRegistry, backend: &dyn Backend) -> AgentOutcome {
    run_observed(question, cfg, registry, backend, &mut |_| {}).await
}

/// As [`run`], reporting each completed step and format correction to
/// `observer` as it happens.
///
/// The run makes at most `max_steps + parse_retry_limit` backend calls:
/// every call either adds a tool step, counts a format error, or ends the
/// run.
pub async fn run_observed(
    question: &str,
    cfg: &AgentConfig,
    registry: &ToolRegistry,
    backend: &dyn Backend,
    observer: &mut (dyn FnMut(AgentEvent) + Send),
) -> AgentOutcome {
    let started = Instant::now();
    let max_steps = cfg.max_steps.max(1);
    let mut history: Vec<HistoryEntry> = Vec::new();
    let mut steps: Vec<AgentStep> = Vec::new();
    let mut parse_failures = 0;
    let mut backend_calls = 0;

    let finish = |termination, final_answer, steps, history, parse_failures, backend_calls, error| AgentOutcome {
        question: question.to_string(),
        final_answer,
        steps,
        history,
        termination,
        parse_failures,
        backend_calls,
        error,
        wall_time_ms: started.elapsed().as_millis() as u64,
    };

    while steps.len() < max_steps {
        let prompt = cfg.prompt.render(registry, question, &history);
        let request = CompletionRequest {
            prompt: &prompt,
            question,
            history: &history,
        };
        backend_calls += 1;
        let reply = match backend.complete(&request).await {
            Ok(reply) => reply,
            Err(e) => {
                tracing::debug!(error = %e, "backend failed");
                return finish(
                    Termination::BackendError,
                    None,
                    steps,
                    history,
                    parse_failures,
                    backend_calls,
                    Some(e.to_string()),
                );
            }
        };
        match parse_model_output(&reply) {
            ParsedReply::Final { answer, .. } => {
                return finish(
                    Termination::Answered,
                    Some(answer),
                    steps,
                    history,
                    parse_failures,
                    backend_calls,
                    None,
                );
            }
            ParsedReply::ThoughtAction { thought, action } => {
                let result = registry.invoke(&action.tool, &action.input);
                let step = AgentStep {
                    thought,
                    action,
                    observation: result.text,
                };
                observer(AgentEvent::Step(step.clone()));
                history.push(HistoryEntry::Step(step.clone()));
                steps.push(step);
            }
            ParsedReply::ParseError { reason } => {
                tracing::debug!(%reason, "reply not in the expected format");
                parse_failures += 1;
                observer(AgentEvent::Correction { reply: reply.clone() });
                history.push(HistoryEntry::Correction {
                    reply,
                    observation: CORRECTIVE_OBSERVATION.to_string(),
                });
                if parse_failures >= cfg.parse_retry_limit.max(1) {
                    return finish(
                        Termination::ParseFailureLimit,
                        None,
                        steps,
                        history,
                        parse_failures,
                        backend_calls,
                        None,
                    );
                }
            }
        }
    }
    finish(
        Termination::MaxSteps,
        None,
        steps,
        history,
        parse_failures,
        backend_calls,
        None,
    )
}
