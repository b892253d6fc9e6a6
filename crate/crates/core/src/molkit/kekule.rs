//! Alternating single/double assignment for aromatic systems.

use thiserror::Error;

use super::graph::{BondOrder, Molecule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KekuleError {
    #[error("no Kekulé structure for aromatic system with atoms {atoms:?}")]
    NoAssignment { atoms: Vec<usize> },
}

/// Replaces aromatic bonds by explicit single/double bonds. Atoms lose their
/// aromatic flag; hydrogen counts are kept as they are.
pub fn kekulize(mol: &Molecule) -> Result<Molecule, KekuleError> {
    let n = mol.atom_count();
    if !mol.bonds().iter().any(|b| b.order == BondOrder::Aromatic) {
        return Ok(mol.clone());
    }
    let needs: Vec<bool> = (0..n).map(|i| needs_double_bond(mol, i)).collect();
    let mut mate: Vec<Option<usize>> = vec![None; n];

    // Solve each aromatic system separately so errors can name one.
    for system in aromatic_systems(mol) {
        let todo: Vec<usize> = system.iter().copied().filter(|&a| needs[a]).collect();
        if !assign(mol, &needs, &mut mate, &todo) {
            return Err(KekuleError::NoAssignment { atoms: system });
        }
    }

    let mut atoms = mol.atoms().to_vec();
    for a in atoms.iter_mut() {
        a.aromatic = false;
    }
    let bonds = mol
        .bonds()
        .iter()
        .map(|b| {
            let mut b = *b;
            if b.order == BondOrder::Aromatic {
                b.order = if mate[b.a] == Some(b.b) {
                    BondOrder::Double
                } else {
                    BondOrder::Single
                };
            }
            b
        })
        .collect();
    Ok(mol
        .with_parts(atoms, bonds)
        .expect("kekulization keeps the graph valid"))
}

/// Whether an aromatic atom must take one double bond inside its ring system.
fn needs_double_bond(mol: &Molecule, idx: usize) -> bool {
    let atom = mol.atom(idx);
    if !atom.aromatic {
        return false;
    }
    let has_exocyclic_double = mol
        .neighbors(idx)
        .iter()
        .any(|&(_, b)| matches!(mol.bond(b).order, BondOrder::Double | BondOrder::Triple));
    if has_exocyclic_double {
        return false;
    }
    let used = mol.bond_order_sum(idx) + mol.total_h(idx);
    let charge = atom.formal_charge as i32;
    let element = atom.element();
    let target = element
        .default_valences
        .iter()
        .map(|&v| adjusted_valence(&element.symbol, v as i32, charge))
        .filter(|&v| v >= used as i32)
        .min();
    match target {
        Some(v) => v > used as i32,
        None => false,
    }
}

/// Valence after accounting for formal charge (isoelectronic shift).
fn adjusted_valence(symbol: &str, valence: i32, charge: i32) -> i32 {
    match symbol {
        "C" | "B" => valence - charge.abs(),
        _ => valence + charge,
    }
}

fn aromatic_systems(mol: &Molecule) -> Vec<Vec<usize>> {
    let n = mol.atom_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] || !mol.atom(start).aromatic {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            for &(w, b) in mol.neighbors(comp[i]) {
                if !seen[w] && mol.bond(b).order == BondOrder::Aromatic {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn assign(mol: &Molecule, needs: &[bool], mate: &mut [Option<usize>], todo: &[usize]) -> bool {
    let candidates = |a: usize, mate: &[Option<usize>]| -> Vec<usize> {
        mol.neighbors(a)
            .iter()
            .filter(|&&(w, b)| mol.bond(b).order == BondOrder::Aromatic && needs[w] && mate[w].is_none())
            .map(|&(w, _)| w)
            .collect()
    };
    // Most constrained unmatched atom first.
    let next = todo
        .iter()
        .copied()
        .filter(|&a| mate[a].is_none())
        .min_by_key(|&a| (candidates(a, mate).len(), a));
    let Some(a) = next else { return true };
    for w in candidates(a, mate) {
        mate[a] = Some(w);
        mate[w] = Some(a);
        if assign(mol, needs, mate, todo) {
            return true;
        }
        mate[a] = None;
        mate[w] = None;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::parse_smiles;
    use super::*;

    fn count(m: &Molecule, order: BondOrder) -> usize {
        m.bonds().iter().filter(|b| b.order == order).count()
    }

    #[test]
    fn benzene_alternates() {
        let k = kekulize(&parse_smiles("c1ccccc1").unwrap()).unwrap();
        assert_eq!(count(&k, BondOrder::Double), 3);
        assert_eq!(count(&k, BondOrder::Single), 3);
        for i in 0..6 {
            let doubles = k
                .neighbors(i)
                .iter()
                .filter(|&&(_, b)| k.bond(b).order == BondOrder::Double)
                .count();
            assert_eq!(doubles, 1);
        }
    }

    #[test]
    fn aliphatic_unchanged() {
        let m = parse_smiles("CCO").unwrap();
        let k = kekulize(&m).unwrap();
        assert_eq!(k.bonds(), m.bonds());
    }

    #[test]
    fn pyridine_nitrogen_takes_one_double() {
        let k = kekulize(&parse_smiles("c1ccncc1").unwrap()).unwrap();
        let n_doubles = k
            .neighbors(3)
            .iter()
            .filter(|&&(_, b)| k.bond(b).order == BondOrder::Double)
            .count();
        assert_eq!(n_doubles, 1);
        assert_eq!(count(&k, BondOrder::Double), 3);
    }

    #[test]
    fn heteroaromatics_and_fused() {
        for s in [
            "c1cc[nH]c1",
            "c1ccoc1",
            "c1ccsc1",
            "O=c1cccc[nH]1",
            "c1ccc2ccccc2c1",
            "c1ccc2[nH]ccc2c1",
            "Cn1cnc2c1c(=O)n(C)c(=O)n2C",
            "c1cc[nH+]cc1",
            "c1ccc2c(c1)ccc1ccccc12",
        ] {
            let m = parse_smiles(s).unwrap();
            let k = kekulize(&m).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(k.total_hydrogens(), m.total_hydrogens(), "{s}");
            assert_eq!(count(&k, BondOrder::Aromatic), 0);
        }
    }

    #[test]
    fn impossible_system_is_reported() {
        // Pyrrole written without its N-H.
        let err = kekulize(&parse_smiles("c1ccnc1").unwrap()).unwrap_err();
        assert_eq!(
            err,
            KekuleError::NoAssignment {
                atoms: vec![0, 1, 2, 3, 4]
            }
        );
    }
}
