//! Independent oracles shared by the molecule-toolkit tests and the
//! acceptance run: labelled-graph isomorphism for SMILES round trips and a
//! brute-force SMARTS matcher.
#![allow(dead_code)]

use std::collections::BTreeSet;

use chemagent_core::molkit::{
    parse_smarts, parse_smiles, AtomExpr, AtomPrimitive, BondExpr, BondOrder, Molecule, Pattern,
};

pub const CORPUS: &str = include_str!("../../data/molecules.txt");

pub fn corpus() -> Vec<Molecule> {
    CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|s| parse_smiles(s).unwrap_or_else(|e| panic!("{s}: {e}")))
        .collect()
}

// ---------------------------------------------------------------------------
// Labelled-graph isomorphism (colour refinement + backtracking).

pub type AtomLabel = (u8, i8, Option<u16>, bool, usize);

pub fn atom_label(m: &Molecule, i: usize) -> AtomLabel {
    let a = m.atom(i);
    (a.atomic_number, a.formal_charge, a.isotope, a.aromatic, m.total_h(i))
}

/// Stable colours from iterated neighbourhood refinement.
pub fn refined_colours(m: &Molecule) -> Vec<String> {
    let mut colours: Vec<String> = (0..m.atom_count()).map(|i| format!("{:?}", atom_label(m, i))).collect();
    for _ in 0..m.atom_count().min(12) {
        colours = (0..m.atom_count())
            .map(|i| {
                let mut around: Vec<String> = m
                    .neighbors(i)
                    .iter()
                    .map(|&(n, b)| format!("{:?}{}", m.bond(b).order, colours[n]))
                    .collect();
                around.sort();
                // Hash to keep the strings short.
                let text = format!("{}|{}", colours[i], around.join(","));
                format!("{:x}", fnv(&text))
            })
            .collect();
    }
    colours
}

pub fn fnv(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

pub fn isomorphic(a: &Molecule, b: &Molecule) -> bool {
    if a.atom_count() != b.atom_count() || a.bonds().len() != b.bonds().len() {
        return false;
    }
    let (ca, cb) = (refined_colours(a), refined_colours(b));
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut map = vec![usize::MAX; a.atom_count()];
    let mut used = vec![false; b.atom_count()];
    extend(a, b, &ca, &cb, 0, &mut map, &mut used)
}

pub fn extend(
    a: &Molecule,
    b: &Molecule,
    ca: &[String],
    cb: &[String],
    i: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == a.atom_count() {
        return true;
    }
    for j in 0..b.atom_count() {
        if used[j] || ca[i] != cb[j] {
            continue;
        }
        let consistent = a.neighbors(i).iter().filter(|&&(n, _)| n < i).all(|&(n, bond)| {
            b.bond_between(j, map[n])
                .is_some_and(|bb| b.bond(bb).order == a.bond(bond).order)
        }) && (0..i)
            .filter(|&n| a.bond_between(i, n).is_none())
            .all(|n| b.bond_between(j, map[n]).is_none());
        if !consistent {
            continue;
        }
        map[i] = j;
        used[j] = true;
        if extend(a, b, ca, cb, i + 1, map, used) {
            return true;
        }
        used[j] = false;
    }
    map[i] = usize::MAX;
    false
}

pub fn reachable_without(m: &Molecule, from: usize, to: usize, skip: usize) -> bool {
    let mut seen = vec![false; m.atom_count()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for &(n, b) in m.neighbors(v) {
            if b != skip && !seen[n] {
                seen[n] = true;
                stack.push(n);
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Brute-force SMARTS oracle: every injective node→atom assignment is tested
// against an independent evaluation of the atom and bond expressions.

pub fn oracle_atom(e: &AtomExpr, m: &Molecule, i: usize) -> bool {
    let a = m.atom(i);
    let in_ring = m.rings().rings().iter().any(|r| r.contains(&i));
    let ring_count = m.rings().rings().iter().filter(|r| r.contains(&i)).count();
    let smallest = m.rings().rings().iter().filter(|r| r.contains(&i)).map(Vec::len).min();
    let h_nodes = m
        .neighbors(i)
        .iter()
        .filter(|&&(n, _)| m.atom(n).atomic_number == 1)
        .count();
    match e {
        AtomExpr::Not(x) => !oracle_atom(x, m, i),
        AtomExpr::And(v) => v.iter().all(|x| oracle_atom(x, m, i)),
        AtomExpr::Or(v) => v.iter().any(|x| oracle_atom(x, m, i)),
        AtomExpr::Prim(p) => match *p {
            AtomPrimitive::Element {
                atomic_number,
                aromatic,
            } => a.atomic_number == atomic_number && aromatic.is_none_or(|ar| ar == a.aromatic),
            AtomPrimitive::AtomicNumber(z) => a.atomic_number == z,
            AtomPrimitive::Aromatic => a.aromatic,
            AtomPrimitive::Aliphatic => !a.aromatic,
            AtomPrimitive::Wildcard => true,
            AtomPrimitive::Degree(n) => m.neighbors(i).len() == n as usize,
            AtomPrimitive::TotalH(n) => a.implicit_h as usize + h_nodes == n as usize,
            AtomPrimitive::Connectivity(n) => m.neighbors(i).len() + a.implicit_h as usize == n as usize,
            AtomPrimitive::RingMembership(None) | AtomPrimitive::SmallestRing(None) => in_ring,
            AtomPrimitive::RingMembership(Some(n)) => ring_count == n as usize,
            AtomPrimitive::SmallestRing(Some(0)) => !in_ring,
            AtomPrimitive::SmallestRing(Some(n)) => smallest == Some(n as usize),
            AtomPrimitive::Charge(q) => a.formal_charge == q,
            AtomPrimitive::Isotope(x) => a.isotope == Some(x),
        },
    }
}

pub fn oracle_bond(e: &BondExpr, m: &Molecule, b: usize) -> bool {
    let order = m.bond(b).order;
    let bond = m.bond(b);
    let on_cycle = reachable_without(m, bond.a, bond.b, b);
    match e {
        BondExpr::Single => order == BondOrder::Single,
        BondExpr::Double => order == BondOrder::Double,
        BondExpr::Triple => order == BondOrder::Triple,
        BondExpr::Aromatic => order == BondOrder::Aromatic,
        BondExpr::Any => true,
        BondExpr::Ring => on_cycle,
        BondExpr::Implicit => order == BondOrder::Single || order == BondOrder::Aromatic,
        BondExpr::Not(x) => !oracle_bond(x, m, b),
        BondExpr::And(v) => v.iter().all(|x| oracle_bond(x, m, b)),
        BondExpr::Or(v) => v.iter().any(|x| oracle_bond(x, m, b)),
    }
}

pub fn oracle_mappings(p: &Pattern, m: &Molecule) -> BTreeSet<Vec<usize>> {
    let k = p.len();
    let n = m.atom_count();
    let mut out = BTreeSet::new();
    if k > n {
        return out;
    }
    let total = n.pow(k as u32);
    for code in 0..total {
        let mut map = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            map.push(c % n);
            c /= n;
        }
        if map.iter().collect::<BTreeSet<_>>().len() != k {
            continue;
        }
        let atoms_ok = (0..k).all(|node| oracle_atom(&p.nodes()[node], m, map[node]));
        let bonds_ok = p.edges().iter().all(|e| {
            m.bond_between(map[e.a], map[e.b])
                .is_some_and(|b| oracle_bond(&e.expr, m, b))
        });
        if atoms_ok && bonds_ok {
            out.insert(map);
        }
    }
    out
}

/// Every supported pattern of at most four nodes in the shipped typing and
/// alert tables.
pub fn small_shipped_patterns() -> Vec<Pattern> {
    let mut texts = BTreeSet::new();
    type Fields = fn(&str) -> Vec<String>;
    let files: [(&str, Fields); 5] = [
        (include_str!("../../data/crippen.tsv"), |l| {
            vec![l.split('\t').nth(1).unwrap_or("").to_string()]
        }),
        (include_str!("../../data/tpsa.tsv"), |l| {
            vec![l.split('\t').next().unwrap_or("").to_string()]
        }),
        (include_str!("../../data/brenk.smarts"), |l| {
            l.split('\t').skip(1).map(str::to_string).collect()
        }),
        (include_str!("../../data/pains.smarts"), |l| {
            l.split('\t').skip(1).map(str::to_string).collect()
        }),
        (include_str!("../../data/qed_alerts.smarts"), |l| {
            l.split('\t').skip(1).map(str::to_string).collect()
        }),
    ];
    for (text, fields) in files {
        for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
            for f in fields(line) {
                // Alert components are matched one at a time.
                texts.extend(f.split('.').filter(|s| !s.is_empty()).map(str::to_string));
            }
        }
    }
    texts
        .iter()
        .filter_map(|t| parse_smarts(t).ok())
        .filter(|p| p.len() <= 4)
        .collect()
}
