//! Substructure alert sets (Brenk, PAINS, QED alerts).
//!
//! File format: `label<TAB>pattern[<TAB>pattern...]`; an entry fires when
//! any of its patterns occurs. A pattern written with `.`-separated
//! components occurs when every component matches on pairwise disjoint
//! atoms. Entries using SMARTS features outside the supported subset are
//! skipped and counted rather than failing the load.

use std::collections::HashSet;

use serde::Serialize;

use crate::molkit::{has_match, match_pattern, parse_smarts, Molecule, Pattern, SmartsError};

use super::assets::{records, AssetError};

/// One alert pattern: one or more connected components.
#[derive(Debug, Clone)]
pub struct AlertPattern {
    pub text: String,
    pub components: Vec<Pattern>,
}

impl AlertPattern {
    pub fn parse(text: &str) -> Result<Self, SmartsError> {
        let components = split_components(text)
            .into_iter()
            .map(parse_smarts)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AlertPattern {
            text: text.to_string(),
            components,
        })
    }

    pub fn matches(&self, m: &Molecule) -> bool {
        if let [single] = self.components.as_slice() {
            return has_match(single, m);
        }
        let mut atom_sets: Vec<Vec<Vec<usize>>> = Vec::with_capacity(self.components.len());
        for c in &self.components {
            let mut sets: Vec<Vec<usize>> = match_pattern(c, m)
                .mappings
                .into_iter()
                .map(|mut s| {
                    s.sort_unstable();
                    s
                })
                .collect();
            sets.sort();
            sets.dedup();
            if sets.is_empty() {
                return false;
            }
            atom_sets.push(sets);
        }
        disjoint_choice(&atom_sets, &mut vec![false; m.atom_count()])
    }
}

/// Pick one atom set per component with no atom used twice.
fn disjoint_choice(sets: &[Vec<Vec<usize>>], used: &mut Vec<bool>) -> bool {
    let Some((first, rest)) = sets.split_first() else {
        return true;
    };
    for set in first {
        if set.iter().any(|&a| used[a]) {
            continue;
        }
        set.iter().for_each(|&a| used[a] = true);
        let found = disjoint_choice(rest, used);
        set.iter().for_each(|&a| used[a] = false);
        if found {
            return true;
        }
    }
    false
}

/// Split on `.` outside brackets and branches. Text opening with a
/// parenthesis is component-level grouping and is left whole for the
/// parser to reject.
fn split_components(text: &str) -> Vec<&str> {
    if text.starts_with('(') {
        return vec![text];
    }
    let (mut bracket, mut paren, mut start) = (0i32, 0i32, 0);
    let mut parts = Vec::new();
    for (i, ch) in text.char_indices() {
        match ch {
            '[' => bracket += 1,
            ']' => bracket -= 1,
            '(' if bracket == 0 => paren += 1,
            ')' if bracket == 0 => paren -= 1,
            '.' if bracket == 0 && paren == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

#[derive(Debug, Clone)]
pub struct AlertEntry {
    pub label: String,
    pub patterns: Vec<AlertPattern>,
}

impl AlertEntry {
    pub fn matches(&self, m: &Molecule) -> bool {
        self.patterns.iter().any(|p| p.matches(m))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedPattern {
    pub line: usize,
    pub label: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct AlertSet {
    name: String,
    entries: Vec<AlertEntry>,
    skipped: Vec<SkippedPattern>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlertReport {
    pub passes: bool,
    pub matched_labels: Vec<String>,
}

impl AlertSet {
    pub fn parse(name: &str, text: &str) -> Result<Self, AssetError> {
        let mut entries = Vec::new();
        let mut skipped = Vec::new();
        let mut labels = HashSet::new();
        for record in records(name, text, 2) {
            let (line, fields) = record?;
            let label = fields[0].to_string();
            if !labels.insert(label.clone()) {
                return Err(AssetError::malformed(name, line, format!("duplicate label {label:?}")));
            }
            let mut patterns = Vec::new();
            let mut skip_reason = None;
            for text in fields[1..].iter().filter(|f| !f.is_empty()) {
                match AlertPattern::parse(text) {
                    Ok(p) => patterns.push(p),
                    Err(e) if e.is_unsupported() => {
                        skip_reason.get_or_insert_with(|| e.to_string());
                    }
                    Err(e) => return Err(AssetError::malformed(name, line, format!("{label}: {e}"))),
                }
            }
            match skip_reason {
                Some(reason) => skipped.push(SkippedPattern { line, label, reason }),
                None => entries.push(AlertEntry { label, patterns }),
            }
        }
        if entries.is_empty() {
            return Err(AssetError::invalid(name, "no usable alert patterns"));
        }
        if !skipped.is_empty() {
            tracing::debug!(
                set = name,
                skipped = skipped.len(),
                "alert entries outside the SMARTS subset were skipped"
            );
        }
        Ok(AlertSet {
            name: name.to_string(),
            entries,
            skipped,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn entries(&self) -> &[AlertEntry] {
        &self.entries
    }

    pub fn skipped(&self) -> &[SkippedPattern] {
        &self.skipped
    }

    pub fn skipped_count(&self) -> usize {
        self.skipped.len()
    }

    /// Labels of the entries present in `m`, in file order.
    pub fn matched_labels(&self, m: &Molecule) -> Vec<String> {
        let m = m.with_implicit_hydrogens();
        self.entries
            .iter()
            .filter(|e| e.matches(&m))
            .map(|e| e.label.clone())
            .collect()
    }

    pub fn count_matching(&self, m: &Molecule) -> usize {
        let m = m.with_implicit_hydrogens();
        self.entries.iter().filter(|e| e.matches(&m)).count()
    }

    pub fn filter(&self, m: &Molecule) -> AlertReport {
        let matched_labels = self.matched_labels(m);
        AlertReport {
            passes: matched_labels.is_empty(),
            matched_labels,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molkit::parse_smiles;

    #[test]
    fn any_pattern_fires_the_entry() {
        let set = AlertSet::parse("t", "halide\t[Cl]\t[Br]\nnitro\t[N+](=O)[O-]\n").unwrap();
        let report = set.filter(&parse_smiles("CCBr").unwrap());
        assert!(!report.passes);
        assert_eq!(report.matched_labels, vec!["halide"]);
        assert!(set.filter(&parse_smiles("CCO").unwrap()).passes);
    }

    #[test]
    fn components_match_disjoint_atoms() {
        let set = AlertSet::parse(
            "t",
            "three_esters\tC(=O)O[C,H1].C(=O)O[C,H1].C(=O)O[C,H1]\nfour_f\tF.F.F.F\n",
        )
        .unwrap();
        let labels = |s: &str| set.matched_labels(&parse_smiles(s).unwrap());
        assert_eq!(labels("CCCCOC(=O)CCCCC(=O)OC(C)C(=O)OCCCC"), vec!["three_esters"]);
        assert!(labels("CCOC(=O)CC(=O)OCC").is_empty());
        assert_eq!(labels("FC(F)(F)C(F)C"), vec!["four_f"]);
        assert!(labels("FC(F)(F)C").is_empty());
    }

    #[test]
    fn unsupported_entries_are_counted() {
        let set = AlertSet::parse("t", "rec\t[$(CO)]\nok\tC=O\n").unwrap();
        assert_eq!(set.skipped_count(), 1);
        assert_eq!(set.entries().len(), 1);
        assert_eq!(set.skipped()[0].label, "rec");
    }

    #[test]
    fn empty_after_skips_is_an_error() {
        assert!(AlertSet::parse("t", "rec\t[$(CO)]\n").is_err());
        assert!(AlertSet::parse("t", "# nothing\n").is_err());
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        assert!(AlertSet::parse("t", "a\tC\na\tN\n").is_err());
    }

    #[test]
    fn syntax_errors_fail_the_load() {
        assert!(AlertSet::parse("t", "bad\tC(\n").is_err());
    }
}
