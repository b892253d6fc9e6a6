//! Rotatable-bond and aromatic-ring counts.

use crate::molkit::{BondOrder, Molecule};

fn is_aliphatic(m: &Molecule, a: usize, z: u8) -> bool {
    let atom = m.atom(a);
    atom.atomic_number == z && !atom.aromatic
}

fn has_triple_bond(m: &Molecule, a: usize) -> bool {
    m.neighbors(a)
        .iter()
        .any(|&(_, b)| m.bond(b).order == BondOrder::Triple)
}

/// Single or aromatic bond (the SMARTS implicit bond).
fn is_implicit(m: &Molecule, b: usize) -> bool {
    matches!(m.bond(b).order, BondOrder::Single | BondOrder::Aromatic)
}

fn is_chain_single(m: &Molecule, b: usize) -> bool {
    m.bond(b).order == BondOrder::Single && !m.rings().bond_in_ring(b)
}

/// Aliphatic carbon with three neighbours matching `pred` via single or
/// aromatic bonds (CF3, CCl3, CBr3, tert-butyl centres).
fn three_neighbours(m: &Molecule, a: usize, pred: impl Fn(usize) -> bool) -> bool {
    is_aliphatic(m, a, 6)
        && m.neighbors(a)
            .iter()
            .filter(|&&(n, b)| is_implicit(m, b) && pred(n))
            .count()
            >= 3
}

/// Atoms never counted as a rotatable-bond end: triple-bonded, terminal,
/// trihalomethyl and tert-butyl centres.
fn blocked(m: &Molecule, a: usize) -> bool {
    has_triple_bond(m, a)
        || m.degree(a) == 1
        || [9u8, 17, 35]
            .iter()
            .any(|&x| three_neighbours(m, a, |n| is_aliphatic(m, n, x)))
        || three_neighbours(m, a, |n| is_aliphatic(m, n, 6) && m.total_h(n) == 3)
}

/// `[CD3]` double-bonded to an aliphatic atom accepted by `partner`.
fn carbonyl_like(m: &Molecule, c: usize, partner: impl Fn(usize) -> bool) -> bool {
    is_aliphatic(m, c, 6)
        && m.degree(c) == 3
        && m.neighbors(c)
            .iter()
            .any(|&(n, b)| m.bond(b).order == BondOrder::Double && partner(n))
}

fn nos_acceptor(m: &Molecule, n: usize) -> bool {
    [7u8, 8, 16].iter().any(|&z| is_aliphatic(m, n, z))
}

fn charged_n(m: &Molecule, n: usize) -> bool {
    is_aliphatic(m, n, 7) && m.atom(n).formal_charge == 1
}

/// `[#7,O,S!D1]`
fn amide_heteroatom(m: &Molecule, x: usize) -> bool {
    m.atom(x).atomic_number == 7 || is_aliphatic(m, x, 8) || (is_aliphatic(m, x, 16) && m.degree(x) != 1)
}

/// `[#7!D1]`
fn amidine_nitrogen(m: &Molecule, x: usize) -> bool {
    m.atom(x).atomic_number == 7 && m.degree(x) != 1
}

/// Amide, thioamide, ester-like and amidinium ends, which only the first
/// atom of a rotatable-bond pair is tested for.
fn amide_like(m: &Molecule, a: usize) -> bool {
    let chain_neighbours = || {
        m.neighbors(a)
            .iter()
            .filter(|&&(_, b)| is_chain_single(m, b))
            .map(|&(n, _)| n)
    };
    let carbonyl = |c| carbonyl_like(m, c, |n| nos_acceptor(m, n));
    let amidinium = |c| carbonyl_like(m, c, |n| charged_n(m, n));
    (carbonyl(a) && chain_neighbours().any(|x| amide_heteroatom(m, x)))
        || (amide_heteroatom(m, a) && chain_neighbours().any(carbonyl))
        || (amidinium(a) && chain_neighbours().any(|x| amidine_nitrogen(m, x)))
        || (amidine_nitrogen(m, a) && chain_neighbours().any(amidinium))
}

/// Rotatable bonds, strict definition: non-ring single (or aromatic) bonds
/// between non-terminal heavy atoms, excluding bonds to triple-bonded atoms,
/// CX3/tert-butyl centres, and amide/ester/amidinium C–X bonds.
pub fn rotatable_bonds(m: &Molecule) -> usize {
    let m = m.with_implicit_hydrogens();
    let end_ok = |first: usize, second: usize| !blocked(&m, first) && !amide_like(&m, first) && !blocked(&m, second);
    (0..m.bonds().len())
        .filter(|&b| is_implicit(&m, b) && !m.rings().bond_in_ring(b))
        .filter(|&b| {
            let bond = m.bond(b);
            !m.atom(bond.a).is_hydrogen() && !m.atom(bond.b).is_hydrogen()
        })
        .filter(|&b| {
            let bond = m.bond(b);
            end_ok(bond.a, bond.b) || end_ok(bond.b, bond.a)
        })
        .count()
}

/// Smallest-set rings whose atoms are all aromatic.
pub fn aromatic_ring_count(m: &Molecule) -> usize {
    m.rings()
        .rings()
        .iter()
        .filter(|ring| ring.iter().all(|&a| m.atom(a).aromatic))
        .count()
}

/// Ring count used by QED's AROM property: the cycle rank of the graph left
/// after deleting every aliphatic ring atom that has a non-aromatic
/// neighbour through a single or aromatic bond. This counts aromatic rings
/// and fused systems the way the reference QED implementation does.
pub fn qed_aromatic_rings(m: &Molecule) -> usize {
    let m = m.with_implicit_hydrogens();
    let deleted: Vec<bool> = (0..m.atom_count())
        .map(|a| {
            !m.atom(a).aromatic
                && m.rings().atom_in_ring(a)
                && m.neighbors(a)
                    .iter()
                    .any(|&(n, b)| is_implicit(&m, b) && !m.atom(n).aromatic)
        })
        .collect();
    let kept: Vec<usize> = (0..m.atom_count()).filter(|&a| !deleted[a]).collect();
    let edges = m.bonds().iter().filter(|b| !deleted[b.a] && !deleted[b.b]).count();
    // Components of the remaining graph.
    let mut seen = deleted.clone();
    let mut components = 0;
    for &start in &kept {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(n, _) in m.neighbors(v) {
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
    }
    (edges + components).saturating_sub(kept.len())
}
