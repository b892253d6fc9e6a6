//! Backtracking subgraph-monomorphism search of a [`Pattern`] in a
//! [`Molecule`].

use std::collections::BTreeSet;

use super::graph::{BondOrder, Molecule};
use super::smarts::{AtomExpr, AtomPrimitive, BondExpr, Pattern};

/// All embeddings of a pattern. `mappings[k][node]` is the molecule atom
/// that pattern node `node` maps to in the k-th embedding.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchSet {
    pub mappings: Vec<Vec<usize>>,
    /// Number of distinct atom sets covered by the embeddings (symmetric
    /// embeddings of the same atoms count once).
    pub unique_atom_sets: usize,
}

impl MatchSet {
    pub fn is_empty(&self) -> bool {
        self.mappings.is_empty()
    }
}

/// Evaluate an atom expression on atom `idx` of `mol`.
pub fn atom_matches(expr: &AtomExpr, mol: &Molecule, idx: usize) -> bool {
    match expr {
        AtomExpr::Prim(p) => primitive_matches(*p, mol, idx),
        AtomExpr::Not(e) => !atom_matches(e, mol, idx),
        AtomExpr::And(v) => v.iter().all(|e| atom_matches(e, mol, idx)),
        AtomExpr::Or(v) => v.iter().any(|e| atom_matches(e, mol, idx)),
    }
}

fn primitive_matches(p: AtomPrimitive, mol: &Molecule, idx: usize) -> bool {
    let atom = mol.atom(idx);
    match p {
        AtomPrimitive::Element {
            atomic_number,
            aromatic,
        } => atom.atomic_number == atomic_number && aromatic.is_none_or(|a| a == atom.aromatic),
        AtomPrimitive::AtomicNumber(z) => atom.atomic_number == z,
        AtomPrimitive::Aromatic => atom.aromatic,
        AtomPrimitive::Aliphatic => !atom.aromatic,
        AtomPrimitive::Wildcard => true,
        AtomPrimitive::Degree(n) => mol.degree(idx) == n as usize,
        AtomPrimitive::TotalH(n) => mol.total_h(idx) == n as usize,
        AtomPrimitive::Connectivity(n) => mol.connectivity(idx) == n as usize,
        AtomPrimitive::RingMembership(None) => mol.rings().atom_in_ring(idx),
        AtomPrimitive::RingMembership(Some(n)) => mol.rings().num_atom_rings(idx) == n as usize,
        AtomPrimitive::SmallestRing(None) => mol.rings().atom_in_ring(idx),
        AtomPrimitive::SmallestRing(Some(0)) => !mol.rings().atom_in_ring(idx),
        AtomPrimitive::SmallestRing(Some(n)) => mol.rings().smallest_ring_of(idx) == Some(n as usize),
        AtomPrimitive::Charge(q) => atom.formal_charge == q,
        AtomPrimitive::Isotope(a) => atom.isotope == Some(a),
    }
}

/// Evaluate a bond expression on bond `idx` of `mol`.
pub fn bond_matches(expr: &BondExpr, mol: &Molecule, idx: usize) -> bool {
    let order = mol.bond(idx).order;
    match expr {
        BondExpr::Single => order == BondOrder::Single,
        BondExpr::Double => order == BondOrder::Double,
        BondExpr::Triple => order == BondOrder::Triple,
        BondExpr::Aromatic => order == BondOrder::Aromatic,
        BondExpr::Any => true,
        BondExpr::Ring => mol.rings().bond_in_ring(idx),
        BondExpr::Implicit => matches!(order, BondOrder::Single | BondOrder::Aromatic),
        BondExpr::Not(e) => !bond_matches(e, mol, idx),
        BondExpr::And(v) => v.iter().all(|e| bond_matches(e, mol, idx)),
        BondExpr::Or(v) => v.iter().any(|e| bond_matches(e, mol, idx)),
    }
}

struct Search<'a> {
    pattern: &'a Pattern,
    mol: &'a Molecule,
    /// Memoized node predicates: 0 = not evaluated, 1 = false, 2 = true.
    candidates: Vec<Vec<u8>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

const UNMAPPED: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(pattern: &'a Pattern, mol: &'a Molecule) -> Self {
        let candidates = vec![vec![0; mol.atom_count()]; pattern.len()];
        Search {
            pattern,
            mol,
            candidates,
            map: vec![UNMAPPED; pattern.len()],
            used: vec![false; mol.atom_count()],
        }
    }

    fn candidate(&mut self, node: usize, atom: usize) -> bool {
        let slot = &mut self.candidates[node][atom];
        if *slot == 0 {
            *slot = if atom_matches(&self.pattern.nodes()[node], self.mol, atom) {
                2
            } else {
                1
            };
        }
        *slot == 2
    }

    /// Check that every pattern edge from `node` to an already-mapped node
    /// has a matching molecule bond when `node` maps to `atom`.
    fn edges_ok(&self, node: usize, atom: usize) -> bool {
        self.pattern.neighbors(node).iter().all(|&(other, edge)| {
            let mapped = self.map[other];
            if mapped == UNMAPPED {
                return true;
            }
            match self.mol.bond_between(atom, mapped) {
                Some(b) => bond_matches(&self.pattern.edges()[edge].expr, self.mol, b),
                None => false,
            }
        })
    }

    /// Depth-first extension; `visit` returns `false` to stop the search.
    /// Returns `false` when stopped.
    fn extend(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let order = self.pattern.search_order();
        if depth == order.len() {
            return visit(&self.map);
        }
        let node = order[depth];
        // Every node after the first has a mapped neighbour; candidates are
        // that neighbour's molecule neighbours.
        let anchor = self
            .pattern
            .neighbors(node)
            .iter()
            .map(|&(w, _)| self.map[w])
            .find(|&a| a != UNMAPPED)
            .expect("search order keeps pattern connected");
        let options: Vec<usize> = self.mol.neighbors(anchor).iter().map(|&(n, _)| n).collect();
        for atom in options {
            if self.used[atom] || !self.candidate(node, atom) || !self.edges_ok(node, atom) {
                continue;
            }
            self.map[node] = atom;
            self.used[atom] = true;
            let go_on = self.extend(depth + 1, visit);
            self.used[atom] = false;
            self.map[node] = UNMAPPED;
            if !go_on {
                return false;
            }
        }
        true
    }

    fn run_from(&mut self, roots: impl IntoIterator<Item = usize>, visit: &mut dyn FnMut(&[usize]) -> bool) {
        if self.pattern.is_empty() {
            return;
        }
        let first = self.pattern.search_order()[0];
        for atom in roots {
            if !self.candidate(first, atom) {
                continue;
            }
            self.map[first] = atom;
            self.used[atom] = true;
            let go_on = self.extend(1, visit);
            self.used[atom] = false;
            self.map[first] = UNMAPPED;
            if !go_on {
                return;
            }
        }
    }
}

/// Enumerate every embedding of `pattern` in `mol`.
pub fn match_pattern(pattern: &Pattern, mol: &Molecule) -> MatchSet {
    let mut mappings = Vec::new();
    if pattern.len() > mol.atom_count() {
        return MatchSet::default();
    }
    let mut search = Search::new(pattern, mol);
    search.run_from(0..mol.atom_count(), &mut |m| {
        mappings.push(m.to_vec());
        true
    });
    let unique: BTreeSet<Vec<usize>> = mappings
        .iter()
        .map(|m| {
            let mut s = m.clone();
            s.sort_unstable();
            s
        })
        .collect();
    MatchSet {
        unique_atom_sets: unique.len(),
        mappings,
    }
}

/// True when `pattern` occurs anywhere in `mol`.
pub fn has_match(pattern: &Pattern, mol: &Molecule) -> bool {
    if pattern.len() > mol.atom_count() {
        return false;
    }
    let mut found = false;
    Search::new(pattern, mol).run_from(0..mol.atom_count(), &mut |_| {
        found = true;
        false
    });
    found
}

/// True when some embedding maps the first pattern node onto `atom`.
pub fn matches_at(pattern: &Pattern, mol: &Molecule, atom: usize) -> bool {
    if pattern.is_empty() || atom >= mol.atom_count() || pattern.len() > mol.atom_count() {
        return false;
    }
    if !atom_matches(&pattern.nodes()[0], mol, atom) {
        return false;
    }
    let mut found = false;
    Search::new(pattern, mol).run_from([atom], &mut |_| {
        found = true;
        false
    });
    found
}

#[cfg(test)]
mod tests {
    use super::super::{parse_smarts, parse_smiles};
    use super::*;

    fn count(smarts: &str, smiles: &str) -> (usize, usize) {
        let m = match_pattern(&parse_smarts(smarts).unwrap(), &parse_smiles(smiles).unwrap());
        (m.mappings.len(), m.unique_atom_sets)
    }

    #[test]
    fn benzene_ring() {
        assert_eq!(count("c1ccccc1", "c1ccccc1"), (12, 1));
        assert_eq!(count("c1ccccc1", "C1CCCCC1"), (0, 0));
    }

    #[test]
    fn hydroxyl() {
        assert_eq!(count("[OX2H]", "CCO"), (1, 1));
        assert_eq!(count("[OX2H]", "CC=O"), (0, 0));
        assert_eq!(count("[#6][OX2H]", "OCCO"), (2, 2));
    }

    #[test]
    fn implicit_bond_is_single_or_aromatic() {
        assert_eq!(count("CC", "C=C"), (0, 0));
        assert_eq!(count("C~C", "C=C"), (2, 1));
        assert_eq!(count("cc", "c1ccccc1"), (12, 6));
    }

    #[test]
    fn ring_primitives() {
        let mol = parse_smiles("C1CC1CC").unwrap();
        let p = parse_smarts("[r3]").unwrap();
        let hits: Vec<bool> = (0..5).map(|a| matches_at(&p, &mol, a)).collect();
        assert_eq!(hits, vec![true, true, true, false, false]);
        let p = parse_smarts("[R0]").unwrap();
        assert!(matches_at(&p, &mol, 4));
        assert!(!matches_at(&p, &mol, 0));
        assert_eq!(count("C@C", "C1CC1CC"), (6, 3));
        assert_eq!(count("C!@C", "C1CC1CC"), (4, 2));
    }

    #[test]
    fn matches_at_uses_first_node() {
        let mol = parse_smiles("CC(=O)O").unwrap();
        let acid_o = parse_smarts("[OH]C=O").unwrap();
        let hits: Vec<usize> = (0..4).filter(|&a| matches_at(&acid_o, &mol, a)).collect();
        assert_eq!(hits, vec![3]);
        assert!(has_match(&acid_o, &mol));
    }

    #[test]
    fn charges_and_hydrogens() {
        assert_eq!(count("[N+](=O)[O-]", "C[N+](=O)[O-]"), (1, 1));
        assert_eq!(count("[NH2]", "CN"), (1, 1));
        assert_eq!(count("[#1]", "[H]C"), (1, 1));
        assert_eq!(count("[H]", "CC"), (0, 0));
    }
}
