//! Running a question set through the agent with a bounded worker pool.

use std::sync::Arc;
use std::time::Instant;

use chemagent_agent::{
    run, AgentConfig, AgentOutcome, Backend, BackendConfig, BackendError, BackendKind, ModelTokens, Termination,
};
use chemagent_core::toolbox::ToolRegistry;
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;
use tokio::task::JoinSet;

use crate::questions::{AnswerKind, BenchmarkSet, QuestionRecord};
use crate::report::SummaryRow;
use crate::score::score_answer;

/// Free-text labels copied into the summary row.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labels {
    pub model: String,
    pub node: String,
}

/// Builds a backend for a question.
pub type BackendFactory = Arc<dyn Fn(&QuestionRecord) -> Arc<dyn Backend> + Send + Sync>;

/// Where each question's backend comes from.
#[derive(Clone)]
pub enum BackendSource {
    /// One backend serves every question; it must not keep per-run state.
    Shared(Arc<dyn Backend>),
    /// A fresh backend per question, e.g. a scripted reply sequence that
    /// has to start over for every question.
    PerQuestion(BackendFactory),
}

impl BackendSource {
    /// Scripted backends are rebuilt per question so that every question
    /// sees the whole script; other kinds are shared.
    pub fn from_config(
        cfg: &BackendConfig,
        registry: Arc<ToolRegistry>,
        tokens: &ModelTokens,
    ) -> Result<Self, BackendError> {
        let first = cfg.build(registry.clone(), tokens)?;
        Ok(match cfg.kind {
            BackendKind::Scripted { .. } => {
                let (cfg, tokens) = (cfg.clone(), tokens.clone());
                BackendSource::PerQuestion(Arc::new(move |_| {
                    cfg.build(registry.clone(), &tokens)
                        .expect("configuration validated above")
                }))
            }
            _ => BackendSource::Shared(first),
        })
    }

    fn backend_for(&self, question: &QuestionRecord) -> Arc<dyn Backend> {
        match self {
            BackendSource::Shared(b) => b.clone(),
            BackendSource::PerQuestion(make) => make(question),
        }
    }
}

/// One scored question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionResult {
    pub id: String,
    pub tool: String,
    pub gold: String,
    pub kind: AnswerKind,
    pub correct: bool,
    #[serde(flatten)]
    pub outcome: AgentOutcome,
    #[serde(skip)]
    pub latency_ms: u64,
}

/// Accuracy for one tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolAccuracy {
    pub tool: String,
    pub asked: usize,
    pub correct: usize,
    /// Percent.
    pub accuracy: f64,
}

/// How runs ended. Every non-answered run scores incorrect; backend
/// failures are counted separately so that an unreachable endpoint is not
/// mistaken for a weak model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub answered: usize,
    pub max_steps: usize,
    pub parse_failure_limit: usize,
    pub backend_errors: usize,
}

#[derive(Debug, Clone)]
pub struct BenchmarkRun {
    /// In question order.
    pub results: Vec<QuestionResult>,
    pub summary: SummaryRow,
    /// In order of first appearance in the set.
    pub per_tool: Vec<ToolAccuracy>,
    pub diagnostics: Diagnostics,
}

/// Ask every question, at most `parallelism` at a time, and score the
/// answers. Results are keyed by position, so scheduling never changes
/// them.
pub async fn run_benchmark(
    set: &BenchmarkSet,
    cfg: &AgentConfig,
    registry: Arc<ToolRegistry>,
    backends: &BackendSource,
    parallelism: usize,
    labels: &Labels,
) -> BenchmarkRun {
    let started = Instant::now();
    let permits = Arc::new(Semaphore::new(parallelism.max(1)));
    let cfg = Arc::new(cfg.clone());
    let mut tasks = JoinSet::new();
    for (index, question) in set.questions.iter().cloned().enumerate() {
        let backend = backends.backend_for(&question);
        let (permits, cfg, registry) = (permits.clone(), cfg.clone(), registry.clone());
        tasks.spawn(async move {
            let _permit = permits.acquire_owned().await.expect("semaphore is never closed");
            let outcome = run(&question.question, &cfg, &registry, backend.as_ref()).await;
            let correct = score_answer(outcome.final_answer.as_deref(), &question.gold, question.kind);
            let latency_ms = outcome.wall_time_ms;
            (
                index,
                QuestionResult {
                    id: question.id,
                    tool: question.tool,
                    gold: question.gold,
                    kind: question.kind,
                    correct,
                    outcome,
                    latency_ms,
                },
            )
        });
    }
    let mut slots: Vec<Option<QuestionResult>> = vec![None; set.questions.len()];
    while let Some(joined) = tasks.join_next().await {
        match joined {
            Ok((index, result)) => slots[index] = Some(result),
            Err(e) if e.is_panic() => std::panic::resume_unwind(e.into_panic()),
            Err(e) => panic!("benchmark task cancelled: {e}"),
        }
    }
    let results: Vec<QuestionResult> = slots.into_iter().map(|r| r.expect("every task reports")).collect();
    let elapsed_minutes = started.elapsed().as_secs_f64() / 60.0;

    let per_tool = per_tool_accuracy(&results);
    let diagnostics = diagnose(&results);
    if diagnostics.backend_errors > 0 {
        tracing::warn!(
            count = diagnostics.backend_errors,
            "questions ended with a backend error"
        );
    }
    let summary = SummaryRow {
        model: labels.model.clone(),
        node: labels.node.clone(),
        question_set: set.name.report_label().to_string(),
        prompt: cfg.prompt.strategy.report_label().to_string(),
        time: elapsed_minutes,
        accuracy: accuracy(&results),
    };
    BenchmarkRun {
        results,
        summary,
        per_tool,
        diagnostics,
    }
}

/// Percent correct; 0 for no results.
pub fn accuracy(results: &[QuestionResult]) -> f64 {
    percent(results.iter().filter(|r| r.correct).count(), results.len())
}

fn percent(correct: usize, asked: usize) -> f64 {
    if asked == 0 {
        0.0
    } else {
        100.0 * correct as f64 / asked as f64
    }
}

pub fn per_tool_accuracy(results: &[QuestionResult]) -> Vec<ToolAccuracy> {
    let mut out: Vec<ToolAccuracy> = Vec::new();
    for r in results {
        let entry = match out.iter().position(|t| t.tool == r.tool) {
            Some(i) => &mut out[i],
            None => {
                out.push(ToolAccuracy {
                    tool: r.tool.clone(),
                    asked: 0,
                    correct: 0,
                    accuracy: 0.0,
                });
                out.last_mut().expect("just pushed")
            }
        };
        entry.asked += 1;
        entry.correct += usize::from(r.correct);
    }
    for t in &mut out {
        t.accuracy = percent(t.correct, t.asked);
    }
    out
}

pub fn diagnose(results: &[QuestionResult]) -> Diagnostics {
    let mut d = Diagnostics::default();
    for r in results {
        match r.outcome.termination {
            Termination::Answered => d.answered += 1,
            Termination::MaxSteps => d.max_steps += 1,
            Termination::ParseFailureLimit => d.parse_failure_limit += 1,
            Termination::BackendError => d.backend_errors += 1,
        }
    }
    d
}
