//! The shipped molecule list used for benchmark questions and tests.

/// Curated, valid SMILES, one per line; `#` starts a comment line.
pub const DEFAULT_MOLECULES: &str = include_str!("../data/molecules.txt");

/// SMILES entries of a molecule list: one per line, blank lines and `#`
/// comment lines ignored, surrounding whitespace trimmed.
pub fn parse_molecule_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}
