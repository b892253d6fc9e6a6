//! Molecular kernel: SMILES in and out, ring perception, kekulization and a
//! SMARTS-subset matcher.

mod element;
mod graph;
mod kekule;
mod matcher;
mod rings;
mod smarts;
mod smiles;
mod writer;

pub(crate) use element::data_lines;
pub use element::{Element, PeriodicTable, TableError, AROMATIC_CAPABLE, ORGANIC_SUBSET};
pub use graph::{Atom, Bond, BondOrder, GraphError, Molecule};
pub use kekule::{kekulize, KekuleError};
pub use matcher::{atom_matches, bond_matches, has_match, match_pattern, matches_at, MatchSet};
pub use rings::{perceive_rings, RingInfo};
pub use smarts::{parse_smarts, AtomExpr, AtomPrimitive, BondExpr, Pattern, PatternEdge, SmartsError};
pub use smiles::{parse_smiles, SmilesError};
pub use writer::write_smiles;
