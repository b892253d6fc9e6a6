//! SMILES output. The string is not canonical, but parsing it back yields a
//! graph isomorphic to the input with identical atom and bond labels.

use std::fmt::Write as _;

use super::graph::{Atom, BondOrder, Molecule};
use super::smiles::implicit_hydrogens;

/// Write `mol` as SMILES, components separated by `.`.
pub fn write_smiles(mol: &Molecule) -> String {
    let n = mol.atom_count();
    let mut visited = vec![false; n];
    let mut out = String::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        if !out.is_empty() {
            out.push('.');
        }
        write_component(mol, root, &mut visited, &mut out);
    }
    out
}

/// Depth-first tree with ring-closure labels for the back edges.
fn write_component(mol: &Molecule, root: usize, visited: &mut [bool], out: &mut String) {
    let n = mol.atom_count();
    // First pass: discover tree order and back edges.
    let mut order = Vec::new();
    let mut parent_bond = vec![usize::MAX; n];
    let mut tree_bond = vec![false; mol.bonds().len()];
    let mut stack = vec![root];
    let mut seen = visited.to_vec();
    seen[root] = true;
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    // Iterative DFS in neighbour order.
    let mut cursor = vec![0usize; n];
    order.push(root);
    while let Some(&v) = stack.last() {
        let nbrs = mol.neighbors(v);
        if cursor[v] < nbrs.len() {
            let (w, b) = nbrs[cursor[v]];
            cursor[v] += 1;
            if !seen[w] {
                seen[w] = true;
                parent_bond[w] = b;
                tree_bond[b] = true;
                children[v].push(w);
                order.push(w);
                stack.push(w);
            }
        } else {
            stack.pop();
        }
    }
    let position: Vec<usize> = {
        let mut p = vec![usize::MAX; n];
        for (i, &a) in order.iter().enumerate() {
            p[a] = i;
        }
        p
    };
    // Ring-closure bonds, opened at the earlier atom in DFS order.
    let mut opens: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bond) in mol.bonds().iter().enumerate() {
        if tree_bond[i] || position[bond.a] == usize::MAX {
            continue;
        }
        let (first, second) = if position[bond.a] < position[bond.b] {
            (bond.a, bond.b)
        } else {
            (bond.b, bond.a)
        };
        opens[first].push(i);
        closes[second].push(i);
    }

    let mut labels: Vec<Option<u16>> = vec![None; mol.bonds().len()];
    let mut in_use: Vec<bool> = Vec::new();
    // Second pass: emit recursively (explicit stack of actions).
    enum Step {
        Atom(usize),
        Open,
        Close,
    }
    let mut steps = vec![Step::Atom(root)];
    while let Some(step) = steps.pop() {
        match step {
            Step::Open => out.push('('),
            Step::Close => out.push(')'),
            Step::Atom(v) => {
                visited[v] = true;
                if parent_bond[v] != usize::MAX {
                    out.push_str(bond_symbol(mol, parent_bond[v]));
                }
                write_atom(mol, v, out);
                for &b in &closes[v] {
                    let label = labels[b].take().expect("ring opened before closing");
                    in_use[label as usize] = false;
                    write_label(out, label);
                }
                for &b in &opens[v] {
                    let label = match in_use.iter().skip(1).position(|u| !u) {
                        Some(k) => (k + 1) as u16,
                        None => {
                            if in_use.is_empty() {
                                in_use.push(true);
                            }
                            in_use.push(false);
                            (in_use.len() - 1) as u16
                        }
                    };
                    in_use[label as usize] = true;
                    labels[b] = Some(label);
                    out.push_str(bond_symbol(mol, b));
                    write_label(out, label);
                }
                let kids = &children[v];
                // Last child continues the chain; the others are branches.
                for (k, &c) in kids.iter().enumerate().rev() {
                    if k + 1 == kids.len() {
                        steps.push(Step::Atom(c));
                    } else {
                        steps.push(Step::Close);
                        steps.push(Step::Atom(c));
                        steps.push(Step::Open);
                    }
                }
            }
        }
    }
}

fn write_label(out: &mut String, label: u16) {
    if label < 10 {
        let _ = write!(out, "{label}");
    } else {
        let _ = write!(out, "%{label:02}");
    }
}

fn bond_symbol(mol: &Molecule, bond: usize) -> &'static str {
    let b = mol.bond(bond);
    let both_aromatic = mol.atom(b.a).aromatic && mol.atom(b.b).aromatic;
    match b.order {
        BondOrder::Single if both_aromatic => "-",
        BondOrder::Single => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
        BondOrder::Aromatic if both_aromatic => "",
        BondOrder::Aromatic => ":",
    }
}

fn write_atom(mol: &Molecule, idx: usize, out: &mut String) {
    let atom = mol.atom(idx);
    if can_write_bare(mol, idx, atom) {
        push_symbol(atom, out);
        return;
    }
    out.push('[');
    if let Some(iso) = atom.isotope {
        let _ = write!(out, "{iso}");
    }
    push_symbol(atom, out);
    match atom.implicit_h {
        0 => {}
        1 => out.push('H'),
        h => {
            let _ = write!(out, "H{h}");
        }
    }
    match atom.formal_charge {
        0 => {}
        1 => out.push('+'),
        -1 => out.push('-'),
        q if q > 0 => {
            let _ = write!(out, "+{q}");
        }
        q => {
            let _ = write!(out, "-{}", -q);
        }
    }
    out.push(']');
}

fn push_symbol(atom: &Atom, out: &mut String) {
    let e = atom.element();
    if atom.aromatic && e.aromatic_capable() {
        out.push_str(&e.symbol.to_ascii_lowercase());
    } else {
        out.push_str(&e.symbol);
    }
}

/// A bare organic-subset atom is re-read with the same hydrogen count.
fn can_write_bare(mol: &Molecule, idx: usize, atom: &Atom) -> bool {
    let e = atom.element();
    if !e.organic_subset || atom.formal_charge != 0 || atom.isotope.is_some() {
        return false;
    }
    if atom.aromatic && !e.aromatic_capable() {
        return false;
    }
    let sum = mol.bond_order_sum(idx);
    if sum > e.max_valence().unwrap_or(0) as usize {
        return false;
    }
    implicit_hydrogens(&e.default_valences, sum, atom.aromatic) == atom.implicit_h
}
