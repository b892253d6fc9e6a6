//! Lipinski rule of five with the strict zero-violation reading.

use serde::Serialize;

use crate::molkit::Molecule;

pub const MAX_MOL_WEIGHT: f64 = 500.0;
pub const MAX_LOGP: f64 = 5.0;
pub const MAX_DONORS: usize = 5;
pub const MAX_ACCEPTORS: usize = 10;

fn is_n_or_o(m: &Molecule, atom: usize) -> bool {
    matches!(m.atom(atom).atomic_number, 7 | 8)
}

/// Nitrogen and oxygen atoms carrying at least one hydrogen.
pub fn hb_donors(m: &Molecule) -> usize {
    (0..m.atom_count())
        .filter(|&a| is_n_or_o(m, a) && m.total_h(a) > 0)
        .count()
}

/// Nitrogen and oxygen atoms.
pub fn hb_acceptors(m: &Molecule) -> usize {
    (0..m.atom_count()).filter(|&a| is_n_or_o(m, a)).count()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipinskiReport {
    pub mol_weight: f64,
    pub logp: f64,
    pub donors: usize,
    pub acceptors: usize,
    /// Names of the violated rules, in rule order.
    pub violations: Vec<&'static str>,
    /// True only when no rule is violated.
    pub passes: bool,
}

impl LipinskiReport {
    pub fn evaluate(mol_weight: f64, logp: f64, donors: usize, acceptors: usize) -> Self {
        let checks = [
            ("mol_weight > 500", mol_weight > MAX_MOL_WEIGHT),
            ("logp > 5", logp > MAX_LOGP),
            ("donors > 5", donors > MAX_DONORS),
            ("acceptors > 10", acceptors > MAX_ACCEPTORS),
        ];
        let violations: Vec<&'static str> = checks.iter().filter(|(_, v)| *v).map(|(n, _)| *n).collect();
        LipinskiReport {
            mol_weight,
            logp,
            donors,
            acceptors,
            passes: violations.is_empty(),
            violations,
        }
    }
}
