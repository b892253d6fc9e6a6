//! SMILES reader for the OpenSMILES organic/bracket core.
//!
//! Stereo markers (`/`, `\`, `@`, `@@`, `@TH1` ...) and atom classes are
//! accepted and dropped. Aromaticity is taken as written; an aromatic bond
//! that ends up outside every ring (e.g. the implicit link in `c1ccccc1c1ccccc1`)
//! is read as single.

use std::collections::BTreeMap;

use thiserror::Error;

use super::element::PeriodicTable;
use super::graph::{Atom, Bond, BondOrder, GraphError, Molecule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmilesError {
    #[error("empty SMILES")]
    Empty,
    #[error("unbalanced parenthesis at position {0}")]
    UnbalancedParenthesis(usize),
    #[error("unmatched ring-closure digit {label} at position {pos}")]
    UnmatchedRingClosure { label: u16, pos: usize },
    #[error("unknown atom symbol '{symbol}' at position {pos}")]
    UnknownAtom { symbol: String, pos: usize },
    #[error("bracket atom syntax error at position {pos}: {reason}")]
    BracketSyntax { pos: usize, reason: String },
    #[error("unexpected character '{ch}' at position {pos}")]
    UnexpectedChar { ch: char, pos: usize },
    #[error("bond symbol without a following atom at position {0}")]
    DanglingBond(usize),
    #[error("conflicting ring-closure bond orders for label {label} at position {pos}")]
    RingBondConflict { label: u16, pos: usize },
    #[error("ring closure {label} at position {pos} bonds an atom to itself or duplicates a bond")]
    InvalidRingClosure { label: u16, pos: usize },
    #[error("valence overflow on {symbol} atom {atom}: bond-order sum {sum} exceeds {max}")]
    ValenceOverflow {
        atom: usize,
        symbol: String,
        sum: usize,
        max: u8,
    },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
}

impl SmilesError {
    /// Byte offset of the error in the input, when it has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            SmilesError::UnbalancedParenthesis(p) | SmilesError::DanglingBond(p) => Some(*p),
            SmilesError::UnmatchedRingClosure { pos, .. }
            | SmilesError::UnknownAtom { pos, .. }
            | SmilesError::BracketSyntax { pos, .. }
            | SmilesError::UnexpectedChar { pos, .. }
            | SmilesError::RingBondConflict { pos, .. }
            | SmilesError::InvalidRingClosure { pos, .. } => Some(*pos),
            _ => None,
        }
    }
}

/// Parses a SMILES string into a molecule with implicit hydrogens assigned.
pub fn parse_smiles(text: &str) -> Result<Molecule, SmilesError> {
    if text.trim().is_empty() {
        return Err(SmilesError::Empty);
    }
    let mut parser = Parser::new(text);
    parser.run()?;
    parser.finish()
}

struct OpenRing {
    atom: usize,
    order: Option<BondOrder>,
    pos: usize,
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    atoms: Vec<Atom>,
    bracket: Vec<bool>,
    bonds: Vec<(usize, usize, Option<BondOrder>)>,
    branch_stack: Vec<(usize, usize)>,
    prev: Option<usize>,
    pending: Option<(Option<BondOrder>, usize)>,
    rings: BTreeMap<u16, OpenRing>,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            atoms: Vec::new(),
            bracket: Vec::new(),
            bonds: Vec::new(),
            branch_stack: Vec::new(),
            prev: None,
            pending: None,
            rings: BTreeMap::new(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn unexpected(&self, pos: usize) -> SmilesError {
        let ch = self.text[pos..].chars().next().unwrap_or('\0');
        SmilesError::UnexpectedChar { ch, pos }
    }

    fn run(&mut self) -> Result<(), SmilesError> {
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                b'(' => {
                    let prev = self.prev.ok_or_else(|| self.unexpected(start))?;
                    if self.pending.is_some() {
                        return Err(self.unexpected(start));
                    }
                    self.branch_stack.push((prev, start));
                    self.pos += 1;
                }
                b')' => {
                    if self.pending.is_some() {
                        return Err(SmilesError::DanglingBond(start));
                    }
                    let (atom, _) = self
                        .branch_stack
                        .pop()
                        .ok_or(SmilesError::UnbalancedParenthesis(start))?;
                    if start > 0 && self.bytes[start - 1] == b'(' {
                        return Err(self.unexpected(start));
                    }
                    self.prev = Some(atom);
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                    if self.prev.is_none() || self.pending.is_some() {
                        return Err(self.unexpected(start));
                    }
                    let order = match c {
                        b'=' => BondOrder::Double,
                        b'#' => BondOrder::Triple,
                        b':' => BondOrder::Aromatic,
                        _ => BondOrder::Single,
                    };
                    self.pending = Some((Some(order), start));
                    self.pos += 1;
                }
                b'.' => {
                    if self.prev.is_none() || self.pending.is_some() {
                        return Err(self.unexpected(start));
                    }
                    self.prev = None;
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    self.pos += 1;
                    self.ring_closure((c - b'0') as u16, start)?;
                }
                b'%' => {
                    let d1 = self.bytes.get(start + 1).copied();
                    let d2 = self.bytes.get(start + 2).copied();
                    match (d1, d2) {
                        (Some(a), Some(b)) if a.is_ascii_digit() && b.is_ascii_digit() => {
                            self.pos += 3;
                            self.ring_closure(((a - b'0') * 10 + (b - b'0')) as u16, start)?;
                        }
                        _ => return Err(self.unexpected(start)),
                    }
                }
                b'[' => {
                    let atom = self.bracket_atom()?;
                    self.add_atom(atom, true, start);
                }
                b'A'..=b'Z' | b'a'..=b'z' | b'*' => {
                    let atom = self.organic_atom()?;
                    self.add_atom(atom, false, start);
                }
                _ => return Err(self.unexpected(start)),
            }
        }
        if let Some((_, pos)) = self.pending {
            return Err(SmilesError::DanglingBond(pos));
        }
        if let Some(&(_, pos)) = self.branch_stack.last() {
            return Err(SmilesError::UnbalancedParenthesis(pos));
        }
        if let Some((&label, open)) = self.rings.iter().next() {
            return Err(SmilesError::UnmatchedRingClosure { label, pos: open.pos });
        }
        Ok(())
    }

    fn add_atom(&mut self, atom: Atom, bracket: bool, _pos: usize) {
        let idx = self.atoms.len();
        self.atoms.push(atom);
        self.bracket.push(bracket);
        if let Some(prev) = self.prev {
            let order = self.pending.take().and_then(|(o, _)| o);
            self.bonds.push((prev, idx, order));
        }
        self.pending = None;
        self.prev = Some(idx);
    }

    fn ring_closure(&mut self, label: u16, pos: usize) -> Result<(), SmilesError> {
        let atom = self.prev.ok_or(SmilesError::UnexpectedChar {
            ch: self.text[pos..].chars().next().unwrap_or('\0'),
            pos,
        })?;
        let order = self.pending.take().and_then(|(o, _)| o);
        match self.rings.remove(&label) {
            None => {
                self.rings.insert(label, OpenRing { atom, order, pos });
            }
            Some(open) => {
                let order = match (open.order, order) {
                    (Some(a), Some(b)) if a != b => return Err(SmilesError::RingBondConflict { label, pos }),
                    (a, b) => a.or(b),
                };
                let duplicate = self
                    .bonds
                    .iter()
                    .any(|&(x, y, _)| (x == open.atom && y == atom) || (x == atom && y == open.atom));
                if open.atom == atom || duplicate {
                    return Err(SmilesError::InvalidRingClosure { label, pos });
                }
                self.bonds.push((open.atom, atom, order));
            }
        }
        Ok(())
    }

    fn organic_atom(&mut self) -> Result<Atom, SmilesError> {
        let start = self.pos;
        let table = PeriodicTable::global();
        let c = self.bytes[start];
        let two = self.bytes.get(start..start + 2);
        let (symbol, aromatic, len) = match two {
            Some(b"Cl") => ("Cl", false, 2),
            Some(b"Br") => ("Br", false, 2),
            _ => match c {
                b'B' => ("B", false, 1),
                b'C' => ("C", false, 1),
                b'N' => ("N", false, 1),
                b'O' => ("O", false, 1),
                b'P' => ("P", false, 1),
                b'S' => ("S", false, 1),
                b'F' => ("F", false, 1),
                b'I' => ("I", false, 1),
                b'b' => ("B", true, 1),
                b'c' => ("C", true, 1),
                b'n' => ("N", true, 1),
                b'o' => ("O", true, 1),
                b'p' => ("P", true, 1),
                b's' => ("S", true, 1),
                _ => {
                    let sym: String = self.text[start..].chars().take(1).collect();
                    return Err(SmilesError::UnknownAtom {
                        symbol: sym,
                        pos: start,
                    });
                }
            },
        };
        self.pos += len;
        let element = table.by_symbol(symbol).expect("organic subset is in the table");
        let mut atom = Atom::new(element.atomic_number);
        atom.aromatic = aromatic;
        Ok(atom)
    }

    fn bracket_atom(&mut self) -> Result<Atom, SmilesError> {
        let open = self.pos;
        self.pos += 1;
        let syntax = |pos: usize, reason: &str| SmilesError::BracketSyntax {
            pos,
            reason: reason.to_string(),
        };

        let isotope = self.read_number();
        let isotope = match isotope {
            Some(v) if v == 0 || v > 999 => return Err(syntax(open + 1, "isotope out of range")),
            Some(v) => Some(v as u16),
            None => None,
        };

        let sym_pos = self.pos;
        let table = PeriodicTable::global();
        let (element, aromatic) = match self.peek() {
            Some(c) if c.is_ascii_uppercase() => {
                let second = self.bytes.get(self.pos + 1).copied().filter(|b| b.is_ascii_lowercase());
                let two = second.map(|s| format!("{}{}", c as char, s as char));
                match two.as_deref().and_then(|t| table.by_symbol(t)) {
                    Some(e) => {
                        self.pos += 2;
                        (e, false)
                    }
                    None => {
                        let one = (c as char).to_string();
                        let e = table.by_symbol(&one).ok_or(SmilesError::UnknownAtom {
                            symbol: one.clone(),
                            pos: sym_pos,
                        })?;
                        self.pos += 1;
                        (e, false)
                    }
                }
            }
            Some(c) if c.is_ascii_lowercase() => {
                let sym = (c as char).to_ascii_uppercase().to_string();
                let e = table
                    .by_symbol(&sym)
                    .filter(|e| e.aromatic_capable())
                    .ok_or(SmilesError::UnknownAtom {
                        symbol: (c as char).to_string(),
                        pos: sym_pos,
                    })?;
                self.pos += 1;
                // Two-letter aromatic symbols (se, as) fall outside the supported subset.
                if c == b's' && self.peek() == Some(b'e') {
                    let sym: String = self.text[sym_pos..self.pos + 1].to_string();
                    return Err(SmilesError::UnknownAtom {
                        symbol: sym,
                        pos: sym_pos,
                    });
                }
                (e, true)
            }
            _ => {
                let symbol = self.text[sym_pos..].chars().take(1).collect::<String>();
                return Err(SmilesError::UnknownAtom {
                    symbol: if symbol.is_empty() { "]".to_string() } else { symbol },
                    pos: sym_pos,
                });
            }
        };

        // Chirality: @, @@, @TH1, @AL2, @SP3, @TB12, @OH30.
        if self.peek() == Some(b'@') {
            self.pos += 1;
            if self.peek() == Some(b'@') {
                self.pos += 1;
            } else if let Some(tag) = self.bytes.get(self.pos..self.pos + 2) {
                if matches!(tag, b"TH" | b"AL" | b"SP" | b"TB" | b"OH") {
                    self.pos += 2;
                    if self.read_number().is_none() {
                        return Err(syntax(self.pos, "chirality class without a number"));
                    }
                }
            }
        }

        let mut h_count = 0u8;
        if self.peek() == Some(b'H') {
            self.pos += 1;
            h_count = match self.peek() {
                Some(d) if d.is_ascii_digit() => {
                    self.pos += 1;
                    d - b'0'
                }
                _ => 1,
            };
        }

        let mut charge: i32 = 0;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            let unit = if sign == b'+' { 1 } else { -1 };
            self.pos += 1;
            if let Some(n) = self.read_number() {
                if n > 15 {
                    return Err(syntax(self.pos, "charge out of range"));
                }
                charge = unit * n as i32;
            } else {
                charge = unit;
                while self.peek() == Some(sign) {
                    charge += unit;
                    self.pos += 1;
                }
                if charge.abs() > 15 {
                    return Err(syntax(self.pos, "charge out of range"));
                }
            }
        }

        if self.peek() == Some(b':') {
            self.pos += 1;
            if self.read_number().is_none() {
                return Err(syntax(self.pos, "atom class without a number"));
            }
        }

        match self.peek() {
            Some(b']') => self.pos += 1,
            Some(b'+') | Some(b'-') => return Err(syntax(self.pos, "malformed charge")),
            Some(_) => return Err(syntax(self.pos, "unexpected character in bracket atom")),
            None => return Err(syntax(open, "unterminated bracket atom")),
        }

        let mut atom = Atom::new(element.atomic_number);
        atom.aromatic = aromatic;
        atom.isotope = isotope;
        atom.formal_charge = charge as i8;
        atom.explicit_h = Some(h_count);
        atom.implicit_h = h_count;
        Ok(atom)
    }

    fn read_number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() && self.pos - start < 4 {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            self.text[start..self.pos].parse().ok()
        }
    }

    fn finish(self) -> Result<Molecule, SmilesError> {
        let atoms = self.atoms;
        let mut bonds: Vec<Bond> = self
            .bonds
            .iter()
            .map(|&(a, b, order)| {
                let order = order.unwrap_or(if atoms[a].aromatic && atoms[b].aromatic {
                    BondOrder::Aromatic
                } else {
                    BondOrder::Single
                });
                Bond { a, b, order }
            })
            .collect();

        let in_ring = ring_bonds(atoms.len(), &bonds);
        for (bond, ring) in bonds.iter_mut().zip(&in_ring) {
            if bond.order == BondOrder::Aromatic && !ring {
                bond.order = BondOrder::Single;
            }
        }

        let mut atoms = atoms;
        let mut sums = vec![0usize; atoms.len()];
        for bond in &bonds {
            let v = bond.order.valence_contribution() as usize;
            sums[bond.a] += v;
            sums[bond.b] += v;
        }
        for (idx, atom) in atoms.iter_mut().enumerate() {
            if self.bracket[idx] {
                continue;
            }
            let element = atom.element();
            let sum = sums[idx];
            let max = element.max_valence().unwrap_or(0);
            if sum > max as usize {
                return Err(SmilesError::ValenceOverflow {
                    atom: idx,
                    symbol: element.symbol.clone(),
                    sum,
                    max,
                });
            }
            atom.implicit_h = implicit_hydrogens(&element.default_valences, sum, atom.aromatic);
        }
        Ok(Molecule::new(atoms, bonds, self.text)?)
    }
}

/// Lowest default valence at or above the bond-order sum; an aromatic atom
/// spends one of its valences on the pi system.
pub(crate) fn implicit_hydrogens(valences: &[u8], bond_sum: usize, aromatic: bool) -> u8 {
    let target = valences.iter().map(|&v| v as usize).filter(|&v| v >= bond_sum).min();
    match target {
        Some(v) => {
            let used = bond_sum + usize::from(aromatic);
            v.saturating_sub(used) as u8
        }
        None => 0,
    }
}

/// Marks bonds that lie on a cycle (i.e. are not bridges).
pub(crate) fn ring_bonds(n_atoms: usize, bonds: &[Bond]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n_atoms];
    for (i, b) in bonds.iter().enumerate() {
        adj[b.a].push((b.b, i));
        adj[b.b].push((b.a, i));
    }
    let mut disc = vec![usize::MAX; n_atoms];
    let mut low = vec![0usize; n_atoms];
    let mut bridge = vec![false; bonds.len()];
    let mut timer = 0;
    for root in 0..n_atoms {
        if disc[root] != usize::MAX {
            continue;
        }
        // Iterative DFS: (atom, parent bond, next neighbour position).
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, parent_bond, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let (w, bi) = adj[v][*next];
                *next += 1;
                if bi == parent_bond {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, bi, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if low[v] > disc[u] {
                        bridge[parent_bond] = true;
                    }
                }
            }
        }
    }
    bridge.into_iter().map(|b| !b).collect()
}
