//! Prompt templates: a strategy-specific preamble, the tool block, the
//! shared format rules, the question and the running history.
//!
//! Every piece of wording is a text asset; the embedded copies can be
//! replaced by files in a prompts directory.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chemagent_core::toolbox::ToolRegistry;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::HistoryEntry;

pub const MINIMAL_PREAMBLE: &str = include_str!("../prompts/minimal.txt");
pub const DOMAIN_PREAMBLE: &str = include_str!("../prompts/domain.txt");
pub const FORMAT_RULES: &str = include_str!("../prompts/format.txt");
pub const MODEL_TOKENS: &str = include_str!("../prompts/model_tokens.tsv");

/// Observation injected after a reply that follows neither the action nor
/// the final-answer format.
pub const CORRECTIVE_OBSERVATION: &str = "Your response was not in the expected format. Reply with either \
\"Thought: ...\" followed by \"Action: <tool name>\" and \"Action Input: <SMILES>\", or with \"Final Answer: <answer>\".";

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{file} line {line}: {reason}")]
    Malformed {
        file: &'static str,
        line: usize,
        reason: String,
    },
    #[error("unknown prompt strategy {0:?}; expected minimal, domain or full")]
    UnknownStrategy(String),
}

/// Which preamble to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PromptStrategy {
    /// The stock agent instruction with only the tool descriptions.
    Minimal,
    /// A chemistry-specific preamble describing the usual solution steps.
    #[default]
    Domain,
}

impl PromptStrategy {
    pub fn name(self) -> &'static str {
        match self {
            PromptStrategy::Minimal => "minimal",
            PromptStrategy::Domain => "domain",
        }
    }

    /// The label used in summary reports ("Minimal" / "Full").
    pub fn report_label(self) -> &'static str {
        match self {
            PromptStrategy::Minimal => "Minimal",
            PromptStrategy::Domain => "Full",
        }
    }
}

impl fmt::Display for PromptStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PromptStrategy {
    type Err = PromptError;

    /// Accepts "minimal", "domain" and the report label "full" (= domain).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "minimal" => Ok(PromptStrategy::Minimal),
            "domain" | "full" => Ok(PromptStrategy::Domain),
            _ => Err(PromptError::UnknownStrategy(s.to_string())),
        }
    }
}

/// How the prompt reaches the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WrapperMode {
    /// Raw text to `/v1/completions`, wrapped in the model's turn tokens.
    Completion,
    /// One user message to `/v1/chat/completions`; the server applies the
    /// chat template.
    Chat,
}

/// Model-specific turn tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wrapper {
    pub mode: WrapperMode,
    pub begin: String,
    pub end: String,
}

impl Wrapper {
    pub fn none(mode: WrapperMode) -> Self {
        Wrapper {
            mode,
            begin: String::new(),
            end: String::new(),
        }
    }
}

/// Pattern → wrapper table; the first matching row wins.
#[derive(Debug, Clone)]
pub struct ModelTokens {
    rows: Vec<(String, Wrapper)>,
}

impl ModelTokens {
    pub fn embedded() -> Self {
        Self::parse(MODEL_TOKENS).expect("embedded model token table is valid")
    }

    pub fn parse(text: &str) -> Result<Self, PromptError> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |reason: String| PromptError::Malformed {
                file: "model_tokens.tsv",
                line: i + 1,
                reason,
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(malformed(format!(
                    "expected 4 tab-separated fields, found {}",
                    fields.len()
                )));
            }
            let mode = match fields[1] {
                "completion" => WrapperMode::Completion,
                "chat" => WrapperMode::Chat,
                other => return Err(malformed(format!("unknown mode {other:?}"))),
            };
            rows.push((
                fields[0].to_ascii_lowercase(),
                Wrapper {
                    mode,
                    begin: unescape(fields[2]),
                    end: unescape(fields[3]),
                },
            ));
        }
        Ok(ModelTokens { rows })
    }

    /// The wrapper for `model_id`; no tokens and completion mode when no
    /// row matches.
    pub fn lookup(&self, model_id: &str) -> Wrapper {
        let id = model_id.to_ascii_lowercase();
        self.rows
            .iter()
            .find(|(pattern, _)| pattern == "*" || id.contains(pattern.as_str()))
            .map(|(_, w)| w.clone())
            .unwrap_or_else(|| Wrapper::none(WrapperMode::Completion))
    }
}

fn unescape(field: &str) -> String {
    if field == "-" {
        return String::new();
    }
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('\\') => out.push('\\'),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// A complete prompt template.
#[derive(Debug, Clone)]
pub struct PromptTemplate {
    pub strategy: PromptStrategy,
    pub preamble: String,
    pub format_rules: String,
    pub wrapper: Wrapper,
}

impl PromptTemplate {
    /// The embedded wording for `strategy`, with no wrapper tokens.
    pub fn embedded(strategy: PromptStrategy) -> Self {
        PromptTemplate {
            strategy,
            preamble: match strategy {
                PromptStrategy::Minimal => MINIMAL_PREAMBLE,
                PromptStrategy::Domain => DOMAIN_PREAMBLE,
            }
            .to_string(),
            format_rules: FORMAT_RULES.to_string(),
            wrapper: Wrapper::none(WrapperMode::Completion),
        }
    }

    /// Wording from `dir` where present (`minimal.txt`, `domain.txt`,
    /// `format.txt`), embedded otherwise.
    pub fn load(strategy: PromptStrategy, dir: Option<&Path>) -> Result<Self, PromptError> {
        let mut t = Self::embedded(strategy);
        if let Some(dir) = dir {
            let read = |name: &str| -> Result<Option<String>, PromptError> {
                let path = dir.join(name);
                if !path.exists() {
                    return Ok(None);
                }
                std::fs::read_to_string(&path)
                    .map(Some)
                    .map_err(|source| PromptError::Io { path, source })
            };
            if let Some(p) = read(&format!("{}.txt", strategy.name()))? {
                t.preamble = p;
            }
            if let Some(f) = read("format.txt")? {
                t.format_rules = f;
            }
        }
        Ok(t)
    }

    pub fn with_wrapper(mut self, wrapper: Wrapper) -> Self {
        self.wrapper = wrapper;
        self
    }

    /// One line per tool: `name: description`.
    pub fn tool_block(registry: &ToolRegistry) -> String {
        registry
            .tools()
            .iter()
            .map(|t| format!("{}: {}", t.name, t.description))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// The full prompt. With an empty history it ends right after the
    /// question with the `Thought:` cue; each earlier step is reproduced as
    /// its Thought/Action/Action Input/Observation lines.
    pub fn render(&self, registry: &ToolRegistry, question: &str, history: &[HistoryEntry]) -> String {
        let mut out = String::new();
        out.push_str(&self.wrapper.begin);
        out.push_str(self.preamble.trim_end());
        out.push_str("\n\n");
        out.push_str(&Self::tool_block(registry));
        out.push_str("\n\n");
        out.push_str(self.format_rules.trim_end());
        out.push_str("\n\nQuestion: ");
        out.push_str(question.trim());
        out.push_str(&self.wrapper.end);
        out.push('\n');
        for entry in history {
            out.push_str(&entry.serialize());
        }
        out.push_str("Thought:");
        out
    }
}
