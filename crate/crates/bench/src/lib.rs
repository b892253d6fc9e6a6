//! Benchmark harness for the chemistry agent.
//!
//! Question sets are generated from a molecule list: each tool is asked
//! about 100 sampled molecules and the gold answer is the tool's own
//! output. Answers are scored leniently (trailing explanation is allowed),
//! and runs are summarised per set and per tool.

pub mod questions;
pub mod report;
pub mod runner;
pub mod score;

pub use questions::{
    generate, read_questions, write_questions, write_questions_file, AnswerKind, BenchmarkSet, GenerateError,
    QuestionRecord, SetName, MIN_MOLECULES, QUESTIONS_PER_TOOL,
};
pub use report::{read_summary, write_report_files, write_reports, ReportError, SummaryRow};
pub use runner::{
    accuracy, diagnose, per_tool_accuracy, run_benchmark, BackendFactory, BackendSource, BenchmarkRun, Diagnostics,
    Labels, QuestionResult, ToolAccuracy,
};
pub use score::{complement, first_number, score_answer};
