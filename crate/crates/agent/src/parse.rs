//! Reading a model reply as either a tool call or a final answer.
//!
//! Labels are case-sensitive and must start a line (leading spaces
//! allowed). Text before the first `Action:` / `Final Answer:` label is the
//! thought, with an optional `Thought:` label removed; the reply usually
//! continues a prompt that already ends in `Thought:`. When both labels
//! occur, the earlier one decides.

use crate::types::AgentAction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedReply {
    ThoughtAction { thought: String, action: AgentAction },
    Final { thought: String, answer: String },
    ParseError { reason: String },
}

const ACTION: &str = "Action:";
const ACTION_INPUT: &str = "Action Input:";
const FINAL: &str = "Final Answer:";

pub fn parse_model_output(text: &str) -> ParsedReply {
    let lines: Vec<&str> = text.lines().collect();
    let label_at = |i: usize, label: &str| lines[i].trim_start().strip_prefix(label).map(str::trim);
    let first = (0..lines.len()).find_map(|i| {
        if let Some(rest) = label_at(i, FINAL) {
            Some((i, true, rest))
        } else {
            label_at(i, ACTION).map(|rest| (i, false, rest))
        }
    });
    let Some((at, is_final, rest)) = first else {
        return error("no Action or Final Answer label");
    };
    let thought = thought_text(&lines[..at]);
    if is_final {
        let mut answer = rest.to_string();
        for line in &lines[at + 1..] {
            answer.push('\n');
            answer.push_str(line);
        }
        let answer = answer.trim().to_string();
        if answer.is_empty() {
            return error("empty Final Answer");
        }
        return ParsedReply::Final { thought, answer };
    }
    if rest.is_empty() {
        return error("Action names no tool");
    }
    let tool = rest.split_whitespace().next().unwrap_or(rest);
    let Some(input) = (at + 1..lines.len()).find_map(|i| label_at(i, ACTION_INPUT)) else {
        return error("Action without Action Input");
    };
    if input.is_empty() {
        return error("empty Action Input");
    }
    ParsedReply::ThoughtAction {
        thought,
        action: AgentAction {
            tool: tool.trim_matches(|c| c == '[' || c == ']' || c == '`').to_string(),
            input: input.to_string(),
        },
    }
}

fn thought_text(lines: &[&str]) -> String {
    let text = lines.join("\n");
    let text = text.trim();
    text.strip_prefix("Thought:").unwrap_or(text).trim().to_string()
}

fn error(reason: &str) -> ParsedReply {
    ParsedReply::ParseError {
        reason: reason.to_string(),
    }
}
