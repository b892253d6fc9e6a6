//! Smallest set of smallest rings.
//!
//! Candidate cycles come from Horton's construction (shortest path from a
//! root to both ends of an edge), sorted by size then by their sorted atom
//! indices, and greedily kept when independent over GF(2) in edge space.

use std::collections::{HashSet, VecDeque};

use super::graph::Molecule;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RingInfo {
    /// Each ring as an atom cycle in traversal order, starting at its lowest index.
    rings: Vec<Vec<usize>>,
    ring_bonds: Vec<Vec<usize>>,
    atom_ring_membership: Vec<usize>,
    atom_smallest_ring: Vec<Option<usize>>,
    bond_ring_membership: Vec<usize>,
}

impl RingInfo {
    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }

    /// Bond indices of each ring, aligned with `rings()`.
    pub fn ring_bonds(&self) -> &[Vec<usize>] {
        &self.ring_bonds
    }

    pub fn len(&self) -> usize {
        self.rings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rings.is_empty()
    }

    pub fn atom_ring_membership(&self) -> &[usize] {
        &self.atom_ring_membership
    }

    pub fn atom_smallest_ring(&self) -> &[Option<usize>] {
        &self.atom_smallest_ring
    }

    pub fn num_atom_rings(&self, atom: usize) -> usize {
        self.atom_ring_membership[atom]
    }

    pub fn smallest_ring_of(&self, atom: usize) -> Option<usize> {
        self.atom_smallest_ring[atom]
    }

    pub fn atom_in_ring(&self, atom: usize) -> bool {
        self.atom_ring_membership[atom] > 0
    }

    pub fn bond_in_ring(&self, bond: usize) -> bool {
        self.bond_ring_membership[bond] > 0
    }

    pub fn num_bond_rings(&self, bond: usize) -> usize {
        self.bond_ring_membership[bond]
    }

    pub fn atom_in_ring_of_size(&self, atom: usize, size: usize) -> bool {
        self.rings.iter().any(|r| r.len() == size && r.contains(&atom))
    }
}

struct Candidate {
    atoms_sorted: Vec<usize>,
    cycle: Vec<usize>,
    bonds: Vec<usize>,
}

pub fn perceive_rings(mol: &Molecule) -> RingInfo {
    let n = mol.atom_count();
    let m = mol.bonds().len();
    let nullity = (m + mol.components().len()).saturating_sub(n);
    let mut info = RingInfo {
        rings: Vec::new(),
        ring_bonds: Vec::new(),
        atom_ring_membership: vec![0; n],
        atom_smallest_ring: vec![None; n],
        bond_ring_membership: vec![0; m],
    };
    if nullity == 0 {
        return info;
    }

    let mut candidates = horton_candidates(mol);
    candidates.sort_by(|a, b| {
        a.cycle
            .len()
            .cmp(&b.cycle.len())
            .then_with(|| a.atoms_sorted.cmp(&b.atoms_sorted))
    });

    let words = m.div_ceil(64);
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for cand in candidates {
        if basis.len() == nullity {
            break;
        }
        let mut vec = vec![0u64; words];
        for &b in &cand.bonds {
            vec[b / 64] |= 1 << (b % 64);
        }
        for (pivot, row) in &basis {
            if vec[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (x, y) in vec.iter_mut().zip(row) {
                    *x ^= y;
                }
            }
        }
        let pivot = vec
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize);
        let Some(pivot) = pivot else { continue };
        // Keep rows reduced on the new pivot so later checks stay one pass.
        for (_, row) in basis.iter_mut() {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (x, y) in row.iter_mut().zip(&vec) {
                    *x ^= y;
                }
            }
        }
        basis.push((pivot, vec));
        info.rings.push(cand.cycle);
        info.ring_bonds.push(cand.bonds);
    }

    for (ring, bonds) in info.rings.iter().zip(&info.ring_bonds) {
        for &a in ring {
            info.atom_ring_membership[a] += 1;
            let size = ring.len();
            info.atom_smallest_ring[a] = Some(info.atom_smallest_ring[a].map_or(size, |s| s.min(size)));
        }
        for &b in bonds {
            info.bond_ring_membership[b] += 1;
        }
    }
    info
}

fn horton_candidates(mol: &Molecule) -> Vec<Candidate> {
    let n = mol.atom_count();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let ring_bond = super::smiles::ring_bonds(n, mol.bonds());

    for root in 0..n {
        if !mol.neighbors(root).iter().any(|&(_, b)| ring_bond[b]) {
            continue;
        }
        // BFS tree over ring bonds, neighbours visited in index order.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut dist = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let mut nbrs: Vec<(usize, usize)> = mol
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&(_, b)| ring_bond[b])
                .collect();
            nbrs.sort_unstable();
            for (w, b) in nbrs {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    parent[w] = Some((v, b));
                    queue.push_back(w);
                }
            }
        }
        let path_to_root = |mut v: usize| -> (Vec<usize>, Vec<usize>) {
            let mut atoms = vec![v];
            let mut bonds = Vec::new();
            while let Some((p, b)) = parent[v] {
                atoms.push(p);
                bonds.push(b);
                v = p;
            }
            (atoms, bonds)
        };

        for (bi, bond) in mol.bonds().iter().enumerate() {
            if !ring_bond[bi] || dist[bond.a] == usize::MAX || dist[bond.b] == usize::MAX {
                continue;
            }
            // Skip tree edges; they close no cycle.
            if parent[bond.a].map(|(_, b)| b) == Some(bi) || parent[bond.b].map(|(_, b)| b) == Some(bi) {
                continue;
            }
            let (pa, ba) = path_to_root(bond.a);
            let (pb, bb) = path_to_root(bond.b);
            // Paths must meet only at the root.
            let set_a: HashSet<usize> = pa[..pa.len() - 1].iter().copied().collect();
            if pb[..pb.len() - 1].iter().any(|x| set_a.contains(x)) {
                continue;
            }
            let mut cycle: Vec<usize> = pa.iter().rev().copied().collect();
            cycle.extend(pb[..pb.len() - 1].iter().copied());
            let mut bonds: Vec<usize> = ba.iter().rev().copied().collect();
            bonds.push(bi);
            bonds.extend(bb.iter().copied());
            let mut key = bonds.clone();
            key.sort_unstable();
            if !seen.insert(key) {
                continue;
            }
            let mut atoms_sorted = cycle.clone();
            atoms_sorted.sort_unstable();
            let cycle = canonical_cycle(mol, &cycle);
            let bonds = cycle_bonds(mol, &cycle);
            out.push(Candidate {
                atoms_sorted,
                cycle,
                bonds,
            });
        }
    }
    out
}

/// Rotates a cycle to start at its lowest atom and walk toward the smaller neighbour.
fn canonical_cycle(_mol: &Molecule, cycle: &[usize]) -> Vec<usize> {
    let len = cycle.len();
    let (start, _) = cycle.iter().enumerate().min_by_key(|(_, &a)| a).unwrap();
    let next = cycle[(start + 1) % len];
    let prev = cycle[(start + len - 1) % len];
    let forward = next < prev;
    (0..len)
        .map(|k| {
            if forward {
                cycle[(start + k) % len]
            } else {
                cycle[(start + len - k) % len]
            }
        })
        .collect()
}

fn cycle_bonds(mol: &Molecule, cycle: &[usize]) -> Vec<usize> {
    (0..cycle.len())
        .map(|k| {
            mol.bond_between(cycle[k], cycle[(k + 1) % cycle.len()])
                .expect("consecutive cycle atoms are bonded")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::parse_smiles;
    use super::*;

    fn sizes(smiles: &str) -> Vec<usize> {
        let m = parse_smiles(smiles).unwrap();
        m.rings().rings().iter().map(|r| r.len()).collect()
    }

    #[test]
    fn acyclic() {
        assert!(sizes("CCO").is_empty());
    }

    #[test]
    fn benzene_one_six_ring() {
        let m = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(m.rings().rings(), &[vec![0, 1, 2, 3, 4, 5]]);
        assert!(m.rings().atom_smallest_ring().iter().all(|&s| s == Some(6)));
    }

    #[test]
    fn bicyclopropyl() {
        assert_eq!(sizes("C1CC1C1CC1"), vec![3, 3]);
    }

    #[test]
    fn fused_and_bridged() {
        assert_eq!(sizes("c1ccc2ccccc2c1"), vec![6, 6]);
        // Norbornane: two five-membered rings.
        assert_eq!(sizes("C1CC2CCC1C2"), vec![5, 5]);
        // Cubane: five four-membered rings.
        assert_eq!(sizes("C12C3C4C1C5C2C3C45"), vec![4, 4, 4, 4, 4]);
        // Spiro[4.5]decane.
        assert_eq!(sizes("C1CCC2(CC1)CCCC2"), vec![5, 6]);
    }

    #[test]
    fn membership_is_consistent() {
        for s in [
            "c1ccc2ccccc2c1",
            "C12C3C4C1C5C2C3C45",
            "C1CC2CCC1C2",
            "c1ccc2c(c1)ccc1ccccc12",
        ] {
            let m = parse_smiles(s).unwrap();
            let r = m.rings();
            let total: usize = r.atom_ring_membership().iter().sum();
            let sizes: usize = r.rings().iter().map(|x| x.len()).sum();
            assert_eq!(total, sizes, "{s}");
            for ring in r.rings() {
                let set: HashSet<_> = ring.iter().collect();
                assert_eq!(set.len(), ring.len(), "simple cycle in {s}");
                for k in 0..ring.len() {
                    assert!(m.bond_between(ring[k], ring[(k + 1) % ring.len()]).is_some());
                }
            }
        }
    }
}
