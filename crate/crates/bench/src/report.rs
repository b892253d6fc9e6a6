//! Report files: summary.csv, per_tool.csv and transcripts.jsonl.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::runner::{BenchmarkRun, QuestionResult, ToolAccuracy};

pub const SUMMARY_HEADER: [&str; 6] = ["Model", "Node", "QuestionSet", "Prompt", "Time", "Accuracy"];
pub const PER_TOOL_HEADER: [&str; 4] = ["tool", "asked", "correct", "accuracy"];

/// One row of the run summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    #[serde(rename = "Model")]
    pub model: String,
    /// Hardware label, free text.
    #[serde(rename = "Node")]
    pub node: String,
    #[serde(rename = "QuestionSet")]
    pub question_set: String,
    /// `Minimal` or `Full` (the domain prompt).
    #[serde(rename = "Prompt")]
    pub prompt: String,
    /// Wall-clock minutes.
    #[serde(rename = "Time")]
    pub time: f64,
    /// Percent correct.
    #[serde(rename = "Accuracy")]
    pub accuracy: f64,
}

impl SummaryRow {
    /// CSV fields: time with two decimals, accuracy with one.
    pub fn fields(&self) -> [String; 6] {
        [
            self.model.clone(),
            self.node.clone(),
            self.question_set.clone(),
            self.prompt.clone(),
            format!("{:.2}", self.time),
            format!("{:.1}", self.accuracy),
        ]
    }
}

/// Parse summary.csv text.
pub fn read_summary<R: io::Read>(input: R) -> csv::Result<Vec<SummaryRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("cannot serialize transcript: {0}")]
    Json(#[from] serde_json::Error),
}

/// Write the three report files into `dir`, creating it if needed. A run
/// with no results yields header-only CSV files and an empty transcript.
pub fn write_reports(run: &BenchmarkRun, dir: &Path) -> Result<(), ReportError> {
    let summaries: &[SummaryRow] = if run.results.is_empty() {
        &[]
    } else {
        std::slice::from_ref(&run.summary)
    };
    write_report_files(dir, summaries, &run.per_tool, &run.results)
}

pub fn write_report_files(
    dir: &Path,
    summaries: &[SummaryRow],
    per_tool: &[ToolAccuracy],
    results: &[QuestionResult],
) -> Result<(), ReportError> {
    fs::create_dir_all(dir).map_err(|source| ReportError::Io {
        path: dir.to_path_buf(),
        source,
    })?;

    let path = dir.join("summary.csv");
    write_csv(&path, &SUMMARY_HEADER, summaries.iter().map(|s| s.fields().to_vec()))?;

    let path = dir.join("per_tool.csv");
    write_csv(
        &path,
        &PER_TOOL_HEADER,
        per_tool.iter().map(|t| {
            vec![
                t.tool.clone(),
                t.asked.to_string(),
                t.correct.to_string(),
                format!("{:.1}", t.accuracy),
            ]
        }),
    )?;

    let path = dir.join("transcripts.jsonl");
    let io_err = |source| ReportError::Io {
        path: path.clone(),
        source,
    };
    let mut out = BufWriter::new(File::create(&path).map_err(io_err)?);
    for r in results {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n").map_err(io_err)?;
    }
    out.flush().map_err(io_err)?;
    Ok(())
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<(), ReportError> {
    let csv_err = |source| ReportError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}
