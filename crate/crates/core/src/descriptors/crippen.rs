//! Wildman–Crippen atom-typed LogP.

use crate::molkit::{matches_at, parse_smarts, Molecule, Pattern};

use super::assets::{parse_f64, records, AssetError};
use super::DescriptorError;

const ASSET: &str = "crippen.tsv";

#[derive(Debug, Clone)]
pub struct CrippenRule {
    pub label: String,
    pub pattern: Pattern,
    pub contribution: f64,
}

/// Ordered atom-type rules; the first rule whose pattern matches with its
/// first node on an atom types that atom. Hydrogens are typed like any
/// other atom, by rules whose first node is a hydrogen.
#[derive(Debug, Clone)]
pub struct CrippenTable {
    rules: Vec<CrippenRule>,
}

impl CrippenTable {
    pub fn parse(text: &str) -> Result<Self, AssetError> {
        let mut rules = Vec::new();
        for record in records(ASSET, text, 3) {
            let (line, fields) = record?;
            let pattern = parse_smarts(fields[1]).map_err(|e| AssetError::malformed(ASSET, line, e.to_string()))?;
            rules.push(CrippenRule {
                label: fields[0].to_string(),
                pattern,
                contribution: parse_f64(ASSET, line, fields[2])?,
            });
        }
        if rules.is_empty() {
            return Err(AssetError::invalid(ASSET, "no rules"));
        }
        Ok(CrippenTable { rules })
    }

    pub fn rules(&self) -> &[CrippenRule] {
        &self.rules
    }

    /// The rule typing each atom of `m.with_explicit_hydrogens()`, in that
    /// molecule's atom order (heavy atoms first, then hydrogens).
    pub fn atom_types(&self, m: &Molecule) -> Result<Vec<&CrippenRule>, DescriptorError> {
        let h = m.with_implicit_hydrogens().with_explicit_hydrogens();
        (0..h.atom_count())
            .map(|atom| {
                self.rules
                    .iter()
                    .find(|rule| matches_at(&rule.pattern, &h, atom))
                    .ok_or_else(|| DescriptorError::NoCrippenRule {
                        atom,
                        symbol: h.atom(atom).symbol().to_string(),
                    })
            })
            .collect()
    }

    pub fn logp(&self, m: &Molecule) -> Result<f64, DescriptorError> {
        Ok(self.atom_types(m)?.iter().map(|r| r.contribution).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::super::assets::CRIPPEN;
    use super::*;
    use crate::molkit::parse_smiles;

    fn table() -> CrippenTable {
        CrippenTable::parse(CRIPPEN).unwrap()
    }

    fn logp(s: &str) -> f64 {
        table().logp(&parse_smiles(s).unwrap()).unwrap()
    }

    #[test]
    fn methane_by_hand() {
        // CH4-type carbon plus four hydrogens on carbon.
        assert!((logp("C") - (0.1441 + 4.0 * 0.1230)).abs() < 1e-9);
    }

    #[test]
    fn ethane_by_hand() {
        assert!((logp("CC") - (2.0 * 0.1441 + 6.0 * 0.1230)).abs() < 1e-9);
    }

    #[test]
    fn explicit_hydrogens_do_not_change_the_sum() {
        assert!((logp("[H]C([H])([H])O") - logp("CO")).abs() < 1e-9);
    }

    #[test]
    fn unmatched_atom_is_an_error() {
        let t = CrippenTable::parse("X\t[#6]\t0.1\n").unwrap();
        let err = t.logp(&parse_smiles("CO").unwrap()).unwrap_err();
        assert!(matches!(err, DescriptorError::NoCrippenRule { atom: 1, .. }));
    }

    #[test]
    fn wildcard_default_row_applies() {
        let t = CrippenTable::parse("A\t[#8]\t-1.0\nDefault\t*\t0.5\n").unwrap();
        // O, C, and four hydrogens fall to the default row.
        assert!((t.logp(&parse_smiles("CO").unwrap()).unwrap() - (-1.0 + 5.0 * 0.5)).abs() < 1e-9);
    }
}
