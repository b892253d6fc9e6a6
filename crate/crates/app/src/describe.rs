//! All ten tool values for one molecule, shared by the CLI and the service.

use chemagent_core::toolbox::ToolRegistry;
use serde::Serialize;

/// Short display labels, in registry order.
pub const LABELS: [(&str, &str); 10] = [
    ("calculate_molwt", "Molecular weight"),
    ("calculate_logp", "LogP"),
    ("calculate_tpsa", "TPSA"),
    ("calculate_qed", "QED"),
    ("calculate_sa", "SA score"),
    ("check_bbb_permeant", "BBB permeant"),
    ("check_gi_absorption", "GI absorption"),
    ("check_druglikeness", "Lipinski"),
    ("check_brenk", "Brenk"),
    ("check_pains", "PAINS"),
];

pub fn label(tool: &str) -> &str {
    LABELS.iter().find(|(t, _)| *t == tool).map_or(tool, |(_, l)| l)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescribedValue {
    pub tool: String,
    pub label: String,
    pub value: String,
}

/// Every tool's formatted answer for `smiles`, or the first error
/// (typically `invalid SMILES: …`).
pub fn describe(registry: &ToolRegistry, smiles: &str) -> Result<Vec<DescribedValue>, String> {
    let results = registry.invoke_all(smiles);
    if let Some(failed) = results.iter().find(|r| !r.is_ok()) {
        return Err(failed.text.clone());
    }
    Ok(results
        .into_iter()
        .map(|r| DescribedValue {
            label: label(&r.tool).to_string(),
            tool: r.tool,
            value: r.text,
        })
        .collect())
}
