//! Topological polar surface area from N/O (optionally S/P) environments.

use serde::Serialize;

use crate::molkit::{matches_at, parse_smarts, Molecule, Pattern};

use super::assets::{parse_f64, records, AssetError};

const ASSET: &str = "tpsa.tsv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TpsaSource {
    /// Published fragment value.
    Fragment,
    /// Environment outside the published table, valued by the polar-atom formula.
    Formula,
}

#[derive(Debug, Clone)]
pub struct TpsaRule {
    pub pattern: Pattern,
    pub contribution: f64,
    pub source: TpsaSource,
    /// Element the rule's first node is restricted to.
    pub atomic_number: u8,
}

#[derive(Debug, Clone)]
pub struct TpsaTable {
    rules: Vec<TpsaRule>,
    include_s_p: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TpsaResult {
    pub value: f64,
    /// Polar atoms (indices in the hydrogen-suppressed molecule) without a
    /// matching environment; each contributed 0.
    pub unmatched_atoms: Vec<usize>,
}

impl TpsaResult {
    pub fn has_warning(&self) -> bool {
        !self.unmatched_atoms.is_empty()
    }
}

impl TpsaTable {
    pub fn parse(text: &str) -> Result<Self, AssetError> {
        let mut rules = Vec::new();
        for record in records(ASSET, text, 2) {
            let (line, fields) = record?;
            let pattern = parse_smarts(fields[0]).map_err(|e| AssetError::malformed(ASSET, line, e.to_string()))?;
            let contribution = parse_f64(ASSET, line, fields[1])?;
            if contribution < 0.0 {
                return Err(AssetError::malformed(ASSET, line, "negative contribution"));
            }
            let source = match fields.get(2).copied().unwrap_or("fragment") {
                "fragment" => TpsaSource::Fragment,
                "formula" => TpsaSource::Formula,
                other => return Err(AssetError::malformed(ASSET, line, format!("unknown source {other:?}"))),
            };
            let atomic_number = first_element(&pattern)
                .ok_or_else(|| AssetError::malformed(ASSET, line, "first atom must name its element as #n"))?;
            rules.push(TpsaRule {
                pattern,
                contribution,
                source,
                atomic_number,
            });
        }
        Ok(TpsaTable {
            rules,
            include_s_p: false,
        })
    }

    pub fn rules(&self) -> &[TpsaRule] {
        &self.rules
    }

    pub fn include_s_p(&self) -> bool {
        self.include_s_p
    }

    /// Copy that also counts sulfur and phosphorus environments.
    pub fn with_s_p(&self, include: bool) -> Self {
        TpsaTable {
            rules: self.rules.clone(),
            include_s_p: include,
        }
    }

    fn is_polar(&self, z: u8) -> bool {
        matches!(z, 7 | 8) || (self.include_s_p && matches!(z, 15 | 16))
    }

    pub fn compute(&self, m: &Molecule) -> TpsaResult {
        let m = m.with_implicit_hydrogens();
        let mut value = 0.0;
        let mut unmatched_atoms = Vec::new();
        for atom in 0..m.atom_count() {
            let z = m.atom(atom).atomic_number;
            if !self.is_polar(z) {
                continue;
            }
            match self
                .rules
                .iter()
                .find(|r| r.atomic_number == z && matches_at(&r.pattern, &m, atom))
            {
                Some(rule) => value += rule.contribution,
                None => unmatched_atoms.push(atom),
            }
        }
        if !unmatched_atoms.is_empty() {
            tracing::debug!(
                smiles = m.source_text(),
                ?unmatched_atoms,
                "polar atoms without a TPSA environment"
            );
        }
        TpsaResult { value, unmatched_atoms }
    }
}

/// The atomic number a rule's first node requires, from a leading `#n`.
fn first_element(p: &Pattern) -> Option<u8> {
    use crate::molkit::{AtomExpr, AtomPrimitive};
    fn find(e: &AtomExpr) -> Option<u8> {
        match e {
            AtomExpr::Prim(AtomPrimitive::AtomicNumber(z)) => Some(*z),
            AtomExpr::Prim(AtomPrimitive::Element { atomic_number, .. }) => Some(*atomic_number),
            AtomExpr::And(v) => v.iter().find_map(find),
            _ => None,
        }
    }
    p.nodes().first().and_then(find)
}

#[cfg(test)]
mod tests {
    use super::super::assets::TPSA;
    use super::*;
    use crate::molkit::parse_smiles;

    fn tpsa(s: &str) -> TpsaResult {
        TpsaTable::parse(TPSA).unwrap().compute(&parse_smiles(s).unwrap())
    }

    #[test]
    fn hydroxyl_environment() {
        assert!((tpsa("CCO").value - 20.23).abs() < 1e-9);
        // Sulfur is excluded by default.
        assert!((tpsa("C(CS)O").value - 20.23).abs() < 1e-9);
        assert_eq!(tpsa("CCCC").value, 0.0);
    }

    #[test]
    fn sulfur_option() {
        let t = TpsaTable::parse(TPSA).unwrap().with_s_p(true);
        let r = t.compute(&parse_smiles("C(CS)O").unwrap());
        assert!((r.value - (20.23 + 38.80)).abs() < 1e-9);
    }

    #[test]
    fn unmatched_environment_warns() {
        // A bare triply charged nitrogen has no tabulated environment.
        let r = tpsa("[N+3]");
        assert_eq!(r.value, 0.0);
        assert_eq!(r.unmatched_atoms, vec![0]);
        assert!(r.has_warning());
    }
}
