use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use super::element::{Element, PeriodicTable};
use super::rings::{perceive_rings, RingInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to an atom's bond-order sum; aromatic bonds count as one
    /// here, the extra pi electron is accounted for per atom.
    pub fn valence_contribution(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BondOrder::Single => "-",
            BondOrder::Double => "=",
            BondOrder::Triple => "#",
            BondOrder::Aromatic => ":",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Atom {
    pub atomic_number: u8,
    pub formal_charge: i8,
    /// Mass number, when written in the input.
    pub isotope: Option<u16>,
    pub aromatic: bool,
    /// Hydrogen count given inside a bracket atom.
    pub explicit_h: Option<u8>,
    /// Hydrogens carried by this atom that are not graph nodes. Equals
    /// `explicit_h` for bracket atoms.
    pub implicit_h: u8,
}

impl Atom {
    pub fn new(atomic_number: u8) -> Self {
        Atom {
            atomic_number,
            formal_charge: 0,
            isotope: None,
            aromatic: false,
            explicit_h: None,
            implicit_h: 0,
        }
    }

    pub fn element(&self) -> &'static Element {
        PeriodicTable::global()
            .by_number(self.atomic_number)
            .expect("atoms only carry atomic numbers from the periodic table")
    }

    pub fn symbol(&self) -> &'static str {
        &self.element().symbol
    }

    pub fn is_hydrogen(&self) -> bool {
        self.atomic_number == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("bond {bond} references missing atom {atom}")]
    MissingAtom { bond: usize, atom: usize },
    #[error("bond {0} is a self-loop")]
    SelfLoop(usize),
    #[error("atoms {0} and {1} are bonded more than once")]
    DuplicateBond(usize, usize),
    #[error("aromatic bond {0} joins a non-aromatic atom")]
    AromaticBondOnAliphaticAtom(usize),
}

/// An immutable molecular graph. Ring information is computed on first use.
#[derive(Debug, Clone)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adjacency: Vec<Vec<(usize, usize)>>,
    rings: OnceLock<RingInfo>,
    source_text: String,
}

impl Molecule {
    pub fn new(atoms: Vec<Atom>, bonds: Vec<Bond>, source_text: impl Into<String>) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (i, bond) in bonds.iter().enumerate() {
            for atom in [bond.a, bond.b] {
                if atom >= atoms.len() {
                    return Err(GraphError::MissingAtom { bond: i, atom });
                }
            }
            if bond.a == bond.b {
                return Err(GraphError::SelfLoop(i));
            }
            if adjacency[bond.a].iter().any(|&(n, _)| n == bond.b) {
                return Err(GraphError::DuplicateBond(bond.a.min(bond.b), bond.a.max(bond.b)));
            }
            if bond.order == BondOrder::Aromatic && !(atoms[bond.a].aromatic && atoms[bond.b].aromatic) {
                return Err(GraphError::AromaticBondOnAliphaticAtom(i));
            }
            adjacency[bond.a].push((bond.b, i));
            adjacency[bond.b].push((bond.a, i));
        }
        Ok(Molecule {
            atoms,
            bonds,
            adjacency,
            rings: OnceLock::new(),
            source_text: source_text.into(),
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, idx: usize) -> &Atom {
        &self.atoms[idx]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, idx: usize) -> &Bond {
        &self.bonds[idx]
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| !a.is_hydrogen()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }

    /// `(neighbor, bond index)` pairs.
    pub fn neighbors(&self, atom: usize) -> &[(usize, usize)] {
        &self.adjacency[atom]
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a].iter().find(|&&(n, _)| n == b).map(|&(_, bi)| bi)
    }

    /// Number of explicit graph neighbours.
    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }

    pub fn heavy_degree(&self, atom: usize) -> usize {
        self.adjacency[atom]
            .iter()
            .filter(|&&(n, _)| !self.atoms[n].is_hydrogen())
            .count()
    }

    /// Implicit hydrogens plus hydrogen atoms present as graph nodes.
    pub fn total_h(&self, atom: usize) -> usize {
        let explicit_nodes = self.adjacency[atom]
            .iter()
            .filter(|&&(n, _)| self.atoms[n].is_hydrogen())
            .count();
        self.atoms[atom].implicit_h as usize + explicit_nodes
    }

    /// Total connections including implicit hydrogens.
    pub fn connectivity(&self, atom: usize) -> usize {
        self.degree(atom) + self.atoms[atom].implicit_h as usize
    }

    /// Sum of bond valence contributions (aromatic counted as one).
    pub fn bond_order_sum(&self, atom: usize) -> usize {
        self.adjacency[atom]
            .iter()
            .map(|&(_, bi)| self.bonds[bi].order.valence_contribution() as usize)
            .sum()
    }

    pub fn total_hydrogens(&self) -> usize {
        self.atoms.iter().map(|a| a.implicit_h as usize).sum::<usize>()
            + self.atoms.iter().filter(|a| a.is_hydrogen()).count()
    }

    pub fn rings(&self) -> &RingInfo {
        self.rings.get_or_init(|| perceive_rings(self))
    }

    /// Connected components as sorted atom-index lists, ordered by first atom.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.atoms.len()];
        let mut out = Vec::new();
        for start in 0..self.atoms.len() {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                for &(n, _) in &self.adjacency[comp[i]] {
                    if !seen[n] {
                        seen[n] = true;
                        comp.push(n);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Copy with every implicit hydrogen turned into a graph atom. Hydrogen
    /// atoms are appended after the heavy atoms, in heavy-atom order.
    pub fn with_explicit_hydrogens(&self) -> Molecule {
        let mut atoms = self.atoms.clone();
        let mut bonds = self.bonds.clone();
        for idx in 0..self.atoms.len() {
            let n = self.atoms[idx].implicit_h;
            atoms[idx].implicit_h = 0;
            atoms[idx].explicit_h = None;
            for _ in 0..n {
                let h = atoms.len();
                atoms.push(Atom::new(1));
                bonds.push(Bond {
                    a: idx,
                    b: h,
                    order: BondOrder::Single,
                });
            }
        }
        Molecule::new(atoms, bonds, self.source_text.clone())
            .expect("adding terminal hydrogens preserves graph validity")
    }

    /// Copy with plain hydrogen atoms (neutral, no isotope, one single bond
    /// to a heavy atom) folded into their neighbour's hydrogen count.
    pub fn with_implicit_hydrogens(&self) -> Molecule {
        let removable: Vec<bool> = (0..self.atoms.len())
            .map(|i| {
                let a = &self.atoms[i];
                a.is_hydrogen()
                    && a.formal_charge == 0
                    && a.isotope.is_none()
                    && a.implicit_h == 0
                    && self.adjacency[i].len() == 1
                    && {
                        let (n, b) = self.adjacency[i][0];
                        !self.atoms[n].is_hydrogen() && self.bonds[b].order == BondOrder::Single
                    }
            })
            .collect();
        if !removable.iter().any(|&r| r) {
            return self.clone();
        }
        let mut new_index = vec![usize::MAX; self.atoms.len()];
        let mut atoms = Vec::new();
        for (i, atom) in self.atoms.iter().enumerate() {
            if !removable[i] {
                new_index[i] = atoms.len();
                atoms.push(atom.clone());
            }
        }
        for (i, _) in self.atoms.iter().enumerate().filter(|&(i, _)| removable[i]) {
            let heavy = &mut atoms[new_index[self.adjacency[i][0].0]];
            heavy.implicit_h += 1;
            if let Some(h) = heavy.explicit_h.as_mut() {
                *h += 1;
            }
        }
        let bonds = self
            .bonds
            .iter()
            .filter(|b| !removable[b.a] && !removable[b.b])
            .map(|b| Bond {
                a: new_index[b.a],
                b: new_index[b.b],
                order: b.order,
            })
            .collect();
        Molecule::new(atoms, bonds, self.source_text.clone())
            .expect("removing terminal hydrogens preserves graph validity")
    }

    /// Rebuilds with replaced bond orders/atoms, keeping the source text.
    pub(crate) fn with_parts(&self, atoms: Vec<Atom>, bonds: Vec<Bond>) -> Result<Molecule, GraphError> {
        Molecule::new(atoms, bonds, self.source_text.clone())
    }
}
