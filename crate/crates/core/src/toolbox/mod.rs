//! The agent-facing tool registry: ten named, described tools that take a
//! SMILES string and return a formatted answer.
//!
//! Failures never escape as errors: an unknown tool or an unparseable
//! input produces an observation string the model can react to. Names and
//! descriptions are the contract with the prompts and are listed in
//! `docs/tools.md`.

mod format;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptors::{DescriptorEngine, DescriptorError};
use crate::molkit::{parse_smiles, Molecule, SmilesError};

pub use format::{format_2dp, parse_2dp};

/// How a tool's answer is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    /// Two decimals, half-up.
    Real2dp,
    /// "Yes" / "No".
    YesNo,
    /// "High" / "Low".
    HighLow,
    /// "True" / "False".
    TrueFalse,
}

impl OutputKind {
    pub const ALL: [OutputKind; 4] = [
        OutputKind::Real2dp,
        OutputKind::YesNo,
        OutputKind::HighLow,
        OutputKind::TrueFalse,
    ];

    pub fn is_quantitative(self) -> bool {
        self == OutputKind::Real2dp
    }

    /// The (positive, negative) words of a boolean kind.
    pub fn words(self) -> Option<(&'static str, &'static str)> {
        match self {
            OutputKind::Real2dp => None,
            OutputKind::YesNo => Some(("Yes", "No")),
            OutputKind::HighLow => Some(("High", "Low")),
            OutputKind::TrueFalse => Some(("True", "False")),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OutputKind::Real2dp => "real2dp",
            OutputKind::YesNo => "yes_no",
            OutputKind::HighLow => "high_low",
            OutputKind::TrueFalse => "true_false",
        }
    }

    /// Write a raw value in this kind's format. A mismatched value kind is
    /// a programming error in the tool table.
    pub fn format(self, raw: RawValue) -> String {
        match (self, raw) {
            (OutputKind::Real2dp, RawValue::Real(x)) => format_2dp(x),
            (kind, RawValue::Flag(b)) => {
                let (yes, no) = kind.words().expect("boolean kind");
                (if b { yes } else { no }).to_string()
            }
            (kind, raw) => panic!("{raw:?} cannot be written as {}", kind.name()),
        }
    }

    /// Read a formatted answer back (exact format only).
    pub fn parse(self, text: &str) -> Option<RawValue> {
        match self.words() {
            None => parse_2dp(text).map(RawValue::Real),
            Some((yes, no)) => match text {
                t if t == yes => Some(RawValue::Flag(true)),
                t if t == no => Some(RawValue::Flag(false)),
                _ => None,
            },
        }
    }
}

impl fmt::Display for OutputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Unformatted tool value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RawValue {
    Real(f64),
    Flag(bool),
}

/// The ten computations behind the tools.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Computation {
    MolWeight,
    LogP,
    Tpsa,
    Qed,
    SaScore,
    BbbPermeant,
    GiAbsorption,
    Druglikeness,
    Brenk,
    Pains,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub output_kind: OutputKind,
    /// Benchmark phrasing; `{smiles}` marks the molecule.
    pub question_template: &'static str,
    #[serde(skip)]
    computation: Computation,
}

impl ToolSpec {
    pub fn input_kind(&self) -> &'static str {
        "SMILES"
    }

    /// The benchmark question about `smiles`.
    pub fn question(&self, smiles: &str) -> String {
        self.question_template.replace("{smiles}", smiles)
    }

    /// The molecule in `question` when it is this tool's benchmark phrasing.
    pub fn recognize<'q>(&self, question: &'q str) -> Option<&'q str> {
        let (prefix, suffix) = self.question_template.split_once("{smiles}")?;
        let smiles = question.trim().strip_prefix(prefix)?.strip_suffix(suffix)?;
        (!smiles.is_empty() && !smiles.contains(char::is_whitespace)).then_some(smiles)
    }
}

const TOOLS: [ToolSpec; 10] = [
    ToolSpec {
        name: "calculate_molwt",
        description: "Calculates the molecular weight (g/mol) of a molecule given as a SMILES string.",
        output_kind: OutputKind::Real2dp,
        question_template: "What is the molecular weight of {smiles}?",
        computation: Computation::MolWeight,
    },
    ToolSpec {
        name: "calculate_logp",
        description: "Calculates the Crippen LogP (octanol/water partition coefficient) of a molecule given as a SMILES string.",
        output_kind: OutputKind::Real2dp,
        question_template: "What is the LogP of {smiles}?",
        computation: Computation::LogP,
    },
    ToolSpec {
        name: "calculate_tpsa",
        description: "Calculates the topological polar surface area (TPSA, square angstroms) of a molecule given as a SMILES string.",
        output_kind: OutputKind::Real2dp,
        question_template: "What is the TPSA of {smiles}",
        computation: Computation::Tpsa,
    },
    ToolSpec {
        name: "calculate_qed",
        description: "Calculates the quantitative estimate of drug-likeness (QED, 0 to 1) of a molecule given as a SMILES string.",
        output_kind: OutputKind::Real2dp,
        question_template: "What is the QED of {smiles}?",
        computation: Computation::Qed,
    },
    ToolSpec {
        name: "calculate_sa",
        description: "Calculates the synthetic accessibility score (1 easy to 10 hard) of a molecule given as a SMILES string.",
        output_kind: OutputKind::Real2dp,
        question_template: "What is the synthetic accessibility score of {smiles}?",
        computation: Computation::SaScore,
    },
    ToolSpec {
        name: "check_bbb_permeant",
        description: "Predicts whether a molecule given as a SMILES string permeates the blood-brain barrier (BOILED-Egg); answers Yes or No.",
        output_kind: OutputKind::YesNo,
        question_template: "Does {smiles} pass the blood brain barrier?",
        computation: Computation::BbbPermeant,
    },
    ToolSpec {
        name: "check_gi_absorption",
        description: "Predicts the gastrointestinal absorption of a molecule given as a SMILES string (BOILED-Egg); answers High or Low.",
        output_kind: OutputKind::HighLow,
        question_template: "What is the GI absorption of {smiles}?",
        computation: Computation::GiAbsorption,
    },
    ToolSpec {
        name: "check_druglikeness",
        description: "Checks whether a molecule given as a SMILES string passes Lipinski's rule of five; answers True or False.",
        output_kind: OutputKind::TrueFalse,
        question_template: "Does {smiles} pass Lipinski's rule of five?",
        computation: Computation::Druglikeness,
    },
    ToolSpec {
        name: "check_brenk",
        description: "Checks whether a molecule given as a SMILES string passes the Brenk structural-alert filter; answers True or False.",
        output_kind: OutputKind::TrueFalse,
        question_template: "Does {smiles} pass the Brenk filter?",
        computation: Computation::Brenk,
    },
    ToolSpec {
        name: "check_pains",
        description: "Checks whether a molecule given as a SMILES string passes the PAINS filter; answers True or False.",
        output_kind: OutputKind::TrueFalse,
        question_template: "Does {smiles} pass the PAINS filter?",
        computation: Computation::Pains,
    },
];

/// Why a tool call produced no value. The display text is the observation
/// handed back to the model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ToolError {
    #[error("unknown tool {name}; available: {}", available.join(", "))]
    UnknownTool { name: String, available: Vec<&'static str> },
    #[error("invalid SMILES: {0}")]
    InvalidSmiles(String),
    #[error("descriptor error: {0}")]
    Descriptor(#[from] DescriptorError),
}

impl From<SmilesError> for ToolError {
    fn from(e: SmilesError) -> Self {
        ToolError::InvalidSmiles(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolResult {
    pub tool: String,
    pub input: String,
    /// The observation: the formatted value, or the error text.
    pub text: String,
    /// The unformatted value; `None` when the call failed.
    pub raw: Option<RawValue>,
    #[serde(skip)]
    pub error: Option<ToolError>,
}

impl ToolResult {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// The tool set offered to the agent. Immutable and shareable across
/// threads.
#[derive(Debug, Clone)]
pub struct ToolRegistry {
    tools: Vec<ToolSpec>,
    engine: Arc<DescriptorEngine>,
}

/// The ten tools backed by the embedded descriptor data.
pub fn default_registry() -> ToolRegistry {
    ToolRegistry::with_engine(DescriptorEngine::embedded_shared())
}

impl ToolRegistry {
    pub fn with_engine(engine: Arc<DescriptorEngine>) -> Self {
        ToolRegistry {
            tools: TOOLS.to_vec(),
            engine,
        }
    }

    pub fn tools(&self) -> &[ToolSpec] {
        &self.tools
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.tools.iter().map(|t| t.name).collect()
    }

    pub fn len(&self) -> usize {
        self.tools.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tools.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<&ToolSpec> {
        self.tools.iter().find(|t| t.name == name)
    }

    /// The tool and molecule a benchmark-phrased question asks about.
    pub fn recognize_question<'q>(&self, question: &'q str) -> Option<(&ToolSpec, &'q str)> {
        self.tools.iter().find_map(|t| t.recognize(question).map(|s| (t, s)))
    }

    pub fn engine(&self) -> &DescriptorEngine {
        &self.engine
    }

    /// Run `name` on `input`. Surrounding whitespace, quotes and backticks
    /// around the SMILES are ignored, since models often add them.
    pub fn invoke(&self, name: &str, input: &str) -> ToolResult {
        let name = name.trim();
        let outcome = match self.lookup(name) {
            None => Err(ToolError::UnknownTool {
                name: name.to_string(),
                available: self.names(),
            }),
            Some(spec) => parse_smiles(clean_input(input))
                .map_err(ToolError::from)
                .and_then(|m| self.compute(spec.computation, &m).map(|raw| (spec.output_kind, raw))),
        };
        match outcome {
            Ok((kind, raw)) => ToolResult {
                tool: name.to_string(),
                input: input.to_string(),
                text: kind.format(raw),
                raw: Some(raw),
                error: None,
            },
            Err(e) => ToolResult {
                tool: name.to_string(),
                input: input.to_string(),
                text: e.to_string(),
                raw: None,
                error: Some(e),
            },
        }
    }

    /// Every tool on one molecule, in registry order.
    pub fn invoke_all(&self, input: &str) -> Vec<ToolResult> {
        self.tools.iter().map(|t| self.invoke(t.name, input)).collect()
    }

    fn compute(&self, c: Computation, m: &Molecule) -> Result<RawValue, ToolError> {
        let e = &self.engine;
        Ok(match c {
            Computation::MolWeight => RawValue::Real(e.mol_weight(m)?),
            Computation::LogP => RawValue::Real(e.crippen_logp(m)?),
            Computation::Tpsa => RawValue::Real(e.tpsa(m).value),
            Computation::Qed => RawValue::Real(e.qed(m)?),
            Computation::SaScore => RawValue::Real(e.sa_score(m)),
            Computation::BbbPermeant => RawValue::Flag(e.boiled_egg(m)?.bbb),
            Computation::GiAbsorption => RawValue::Flag(e.boiled_egg(m)?.gi_high),
            Computation::Druglikeness => RawValue::Flag(e.lipinski(m)?.passes),
            Computation::Brenk => RawValue::Flag(e.brenk(m).passes),
            Computation::Pains => RawValue::Flag(e.pains(m).passes),
        })
    }
}

fn clean_input(input: &str) -> &str {
    let mut s = input.trim();
    for q in ['"', '\'', '`'] {
        if s.len() >= 2 && s.starts_with(q) && s.ends_with(q) {
            s = s[1..s.len() - 1].trim();
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_has_the_ten_tools() {
        let r = default_registry();
        assert_eq!(r.len(), 10);
        let mut names = r.names();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 10);
        assert!(r
            .tools()
            .iter()
            .all(|t| !t.description.is_empty() && t.description.contains("SMILES")));
        assert!(r.lookup("calculate_tpsa").is_some());
        assert!(r.lookup("nope").is_none());
    }

    #[test]
    fn errors_are_observations() {
        let r = default_registry();
        let res = r.invoke("nope", "CCO");
        assert!(res.text.starts_with("unknown tool nope; available: calculate_molwt, "));
        assert!(res.raw.is_none());
        let res = r.invoke("calculate_qed", "not-a-smiles");
        assert!(res.text.starts_with("invalid SMILES: "), "{}", res.text);
        let res = r.invoke("calculate_qed", "");
        assert!(res.text.starts_with("invalid SMILES: "));
    }

    #[test]
    fn input_decoration_is_ignored() {
        let r = default_registry();
        for input in ["C(CS)O", " C(CS)O\n", "\"C(CS)O\"", "`C(CS)O`", "'C(CS)O'"] {
            assert_eq!(r.invoke("calculate_tpsa", input).text, "20.23", "{input:?}");
        }
    }

    #[test]
    fn question_templates_round_trip() {
        let r = default_registry();
        assert_eq!(
            r.lookup("calculate_tpsa").unwrap().question("C(CS)O"),
            "What is the TPSA of C(CS)O"
        );
        assert_eq!(
            r.lookup("check_bbb_permeant").unwrap().question("CCON=O"),
            "Does CCON=O pass the blood brain barrier?"
        );
        for t in r.tools() {
            let q = t.question("c1ccccc1C(=O)O");
            let (found, smiles) = r.recognize_question(&q).unwrap();
            assert_eq!((found.name, smiles), (t.name, "c1ccccc1C(=O)O"));
        }
        assert!(r.recognize_question("What is the TPSA of").is_none());
        assert!(r.recognize_question("Tell me a joke").is_none());
    }

    #[test]
    fn kinds_format_and_parse() {
        assert_eq!(OutputKind::YesNo.format(RawValue::Flag(true)), "Yes");
        assert_eq!(OutputKind::HighLow.format(RawValue::Flag(false)), "Low");
        assert_eq!(OutputKind::TrueFalse.parse("False"), Some(RawValue::Flag(false)));
        assert_eq!(OutputKind::TrueFalse.parse("false"), None);
        assert_eq!(OutputKind::Real2dp.parse("20.23"), Some(RawValue::Real(20.23)));
    }
}
