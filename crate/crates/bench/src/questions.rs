//! Question sets: generation from a molecule list, and the questions.csv
//! interchange format.

use std::fmt;
use std::io;
use std::path::Path;
use std::str::FromStr;

use chemagent_core::molkit::parse_smiles;
use chemagent_core::toolbox::{ToolRegistry, ToolSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Questions asked per tool in every set.
pub const QUESTIONS_PER_TOOL: usize = 100;

/// Fewest distinct valid molecules a set may be drawn from.
pub const MIN_MOLECULES: usize = 10;

/// Scoring family of a question, fixed by the tool's output kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerKind {
    Qualitative,
    Quantitative,
}

impl AnswerKind {
    pub fn of(spec: &ToolSpec) -> Self {
        if spec.output_kind.is_quantitative() {
            AnswerKind::Quantitative
        } else {
            AnswerKind::Qualitative
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AnswerKind::Qualitative => "qualitative",
            AnswerKind::Quantitative => "quantitative",
        }
    }
}

/// Which tools a set covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetName {
    /// The five tools with categorical answers.
    Qualitative,
    /// The five tools with two-decimal numeric answers.
    Quantitative,
    /// All ten tools.
    Full,
}

impl SetName {
    pub const ALL: [SetName; 3] = [SetName::Qualitative, SetName::Quantitative, SetName::Full];

    pub fn name(self) -> &'static str {
        match self {
            SetName::Qualitative => "qualitative",
            SetName::Quantitative => "quantitative",
            SetName::Full => "full",
        }
    }

    /// Label used in summary reports.
    pub fn report_label(self) -> &'static str {
        match self {
            SetName::Qualitative => "Qualitative",
            SetName::Quantitative => "Quantitative",
            SetName::Full => "Full",
        }
    }

    pub fn includes(self, kind: AnswerKind) -> bool {
        match self {
            SetName::Qualitative => kind == AnswerKind::Qualitative,
            SetName::Quantitative => kind == AnswerKind::Quantitative,
            SetName::Full => true,
        }
    }
}

impl fmt::Display for SetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SetName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qualitative" => Ok(SetName::Qualitative),
            "quantitative" => Ok(SetName::Quantitative),
            "full" => Ok(SetName::Full),
            other => Err(format!(
                "unknown question set `{other}` (expected qualitative, quantitative or full)"
            )),
        }
    }
}

/// One benchmark item. `gold` is the tool's own formatted answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionRecord {
    pub id: String,
    pub tool: String,
    pub smiles: String,
    pub question: String,
    pub gold: String,
    pub kind: AnswerKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkSet {
    pub name: SetName,
    pub questions: Vec<QuestionRecord>,
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("only {valid} valid molecule(s) available; at least {MIN_MOLECULES} are needed")]
    InsufficientMolecules { valid: usize },
    #[error("tool {tool} failed on {smiles}: {message}")]
    Tool {
        tool: String,
        smiles: String,
        message: String,
    },
}

/// Build a question set: for each tool in the set, [`QUESTIONS_PER_TOOL`]
/// molecules are drawn with replacement and the gold answer is computed by
/// invoking the tool.
///
/// Each tool draws from its own generator, seeded by `seed` and the tool's
/// position in the registry, so a tool's questions are the same in every
/// set that contains it. Question ids (`<tool>-<nnn>`) are stable likewise.
/// Molecules that fail to parse are skipped with a log line.
pub fn generate(
    registry: &ToolRegistry,
    set: SetName,
    molecules: &[String],
    seed: u64,
) -> Result<BenchmarkSet, GenerateError> {
    let mut valid: Vec<&str> = Vec::new();
    for smiles in molecules {
        match parse_smiles(smiles) {
            Ok(_) => valid.push(smiles),
            Err(e) => tracing::warn!(%smiles, error = %e, "excluding molecule that does not parse"),
        }
    }
    let distinct = {
        let mut d = valid.clone();
        d.sort_unstable();
        d.dedup();
        d.len()
    };
    if distinct < MIN_MOLECULES {
        return Err(GenerateError::InsufficientMolecules { valid: distinct });
    }

    let mut questions = Vec::new();
    for (index, spec) in registry.tools().iter().enumerate() {
        let kind = AnswerKind::of(spec);
        if !set.includes(kind) {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        for n in 0..QUESTIONS_PER_TOOL {
            let smiles = valid[rng.gen_range(0..valid.len())];
            let result = registry.invoke(spec.name, smiles);
            if !result.is_ok() {
                return Err(GenerateError::Tool {
                    tool: spec.name.to_string(),
                    smiles: smiles.to_string(),
                    message: result.text,
                });
            }
            questions.push(QuestionRecord {
                id: format!("{}-{:03}", spec.name, n + 1),
                tool: spec.name.to_string(),
                smiles: smiles.to_string(),
                question: spec.question(smiles),
                gold: result.text,
                kind,
            });
        }
    }
    Ok(BenchmarkSet { name: set, questions })
}

/// Write questions as CSV with columns id,tool,smiles,question,gold,kind.
pub fn write_questions<W: io::Write>(questions: &[QuestionRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "tool", "smiles", "question", "gold", "kind"])?;
    for q in questions {
        w.write_record([q.id.as_str(), &q.tool, &q.smiles, &q.question, &q.gold, q.kind.name()])?;
    }
    w.flush()?;
    Ok(())
}

/// Read questions written by [`write_questions`].
pub fn read_questions<R: io::Read>(input: R) -> csv::Result<Vec<QuestionRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn write_questions_file(questions: &[QuestionRecord], path: &Path) -> csv::Result<()> {
    write_questions(questions, std::fs::File::create(path)?)
}
