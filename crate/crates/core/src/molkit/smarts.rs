//! SMARTS subset: atom primitives `#n`, element symbols, `a`, `A`, `*`,
//! `D`, `H`, `X`, `R`, `r`, charge and isotope, joined by `!`, `&`, `,`
//! and `;`; bond primitives `-`, `=`, `#`, `:`, `~`, `@` with the same
//! operators. See `docs/smarts-subset.md`.
//!
//! Recursive SMARTS, stereo, disconnected or grouped components and
//! reaction SMARTS are rejected with [`SmartsError::Unsupported`].

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

use super::element::PeriodicTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomPrimitive {
    /// Element symbol; `aromatic` is `Some` when the case of the symbol
    /// constrains aromaticity.
    Element {
        atomic_number: u8,
        aromatic: Option<bool>,
    },
    AtomicNumber(u8),
    Aromatic,
    Aliphatic,
    Wildcard,
    /// `Dn`: explicit connections.
    Degree(u8),
    /// `Hn`: total hydrogen count equals n.
    TotalH(u8),
    /// `Xn`: connections including implicit hydrogens.
    Connectivity(u8),
    /// `R`: in any ring; `Rn`: member of exactly n SSSR rings.
    RingMembership(Option<u8>),
    /// `r`: in any ring; `rn`: smallest ring has size n (`r0` = acyclic).
    SmallestRing(Option<u8>),
    Charge(i8),
    Isotope(u16),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AtomExpr {
    Prim(AtomPrimitive),
    Not(Box<AtomExpr>),
    And(Vec<AtomExpr>),
    Or(Vec<AtomExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BondExpr {
    Single,
    Double,
    Triple,
    Aromatic,
    Any,
    Ring,
    /// No symbol written: single or aromatic.
    Implicit,
    Not(Box<BondExpr>),
    And(Vec<BondExpr>),
    Or(Vec<BondExpr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternEdge {
    pub a: usize,
    pub b: usize,
    pub expr: BondExpr,
}

/// A connected query graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    nodes: Vec<AtomExpr>,
    edges: Vec<PatternEdge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Breadth-first node order from node 0; every node after the first has
    /// an earlier neighbour.
    order: Vec<usize>,
    source_text: String,
}

impl Pattern {
    pub fn nodes(&self) -> &[AtomExpr] {
        &self.nodes
    }

    pub fn edges(&self) -> &[PatternEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub(crate) fn search_order(&self) -> &[usize] {
        &self.order
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source_text)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmartsError {
    #[error("empty SMARTS")]
    Empty,
    #[error("unsupported SMARTS feature at position {pos}: {feature}")]
    Unsupported { feature: &'static str, pos: usize },
    #[error("SMARTS syntax error at position {pos}: {reason}")]
    Syntax { pos: usize, reason: String },
}

impl SmartsError {
    pub fn position(&self) -> Option<usize> {
        match self {
            SmartsError::Empty => None,
            SmartsError::Unsupported { pos, .. } | SmartsError::Syntax { pos, .. } => Some(*pos),
        }
    }

    pub fn is_unsupported(&self) -> bool {
        matches!(self, SmartsError::Unsupported { .. })
    }
}

pub fn parse_smarts(text: &str) -> Result<Pattern, SmartsError> {
    if text.trim().is_empty() {
        return Err(SmartsError::Empty);
    }
    let mut p = Parser {
        text,
        bytes: text.as_bytes(),
        pos: 0,
        nodes: Vec::new(),
        edges: Vec::new(),
        stack: Vec::new(),
        prev: None,
        pending: None,
        rings: BTreeMap::new(),
    };
    p.run()?;
    let Parser { nodes, edges, .. } = p;
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for (i, e) in edges.iter().enumerate() {
        adjacency[e.a].push((e.b, i));
        adjacency[e.b].push((e.a, i));
    }
    let mut order = vec![0];
    let mut seen = vec![false; nodes.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    debug_assert_eq!(order.len(), nodes.len(), "parser only builds connected patterns");
    Ok(Pattern {
        nodes,
        edges,
        adjacency,
        order,
        source_text: text.to_string(),
    })
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    nodes: Vec<AtomExpr>,
    edges: Vec<PatternEdge>,
    stack: Vec<(usize, usize)>,
    prev: Option<usize>,
    pending: Option<(BondExpr, usize)>,
    rings: BTreeMap<u16, (usize, Option<BondExpr>, usize)>,
}

fn syntax(pos: usize, reason: &str) -> SmartsError {
    SmartsError::Syntax {
        pos,
        reason: reason.to_string(),
    }
}

fn unsupported(feature: &'static str, pos: usize) -> SmartsError {
    SmartsError::Unsupported { feature, pos }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<u8> {
        self.bytes.get(self.pos + off).copied()
    }

    fn run(&mut self) -> Result<(), SmartsError> {
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                b'(' => {
                    let Some(prev) = self.prev else {
                        return Err(unsupported("component grouping", start));
                    };
                    if self.pending.is_some() {
                        return Err(syntax(start, "bond before branch"));
                    }
                    self.stack.push((prev, start));
                    self.pos += 1;
                }
                b')' => {
                    if self.pending.is_some() {
                        return Err(syntax(start, "bond without a following atom"));
                    }
                    let (atom, _) = self
                        .stack
                        .pop()
                        .ok_or_else(|| syntax(start, "unbalanced parenthesis"))?;
                    if self.bytes[start - 1] == b'(' {
                        return Err(syntax(start, "empty branch"));
                    }
                    self.prev = Some(atom);
                    self.pos += 1;
                }
                b'.' => return Err(unsupported("disconnected components", start)),
                b'>' => return Err(unsupported("reaction SMARTS", start)),
                b'$' => return Err(unsupported("recursive SMARTS", start)),
                b'/' | b'\\' => return Err(unsupported("directional (stereo) bonds", start)),
                b'-' | b'=' | b'#' | b':' | b'~' | b'@' | b'!' | b'&' | b',' | b';' => {
                    if self.prev.is_none() {
                        return Err(syntax(start, "bond without a preceding atom"));
                    }
                    if self.pending.is_some() {
                        return Err(syntax(start, "two bond expressions in a row"));
                    }
                    let expr = self.bond_expr()?;
                    self.pending = Some((expr, start));
                }
                b'0'..=b'9' => {
                    self.pos += 1;
                    self.ring_closure((c - b'0') as u16, start)?;
                }
                b'%' => match (self.peek_at(1), self.peek_at(2)) {
                    (Some(a), Some(b)) if a.is_ascii_digit() && b.is_ascii_digit() => {
                        self.pos += 3;
                        self.ring_closure(((a - b'0') as u16) * 10 + (b - b'0') as u16, start)?;
                    }
                    _ => return Err(syntax(start, "% must be followed by two digits")),
                },
                b'[' => {
                    self.pos += 1;
                    let expr = self.atom_expr_lowand()?;
                    if self.peek() != Some(b']') {
                        return Err(self.bracket_error());
                    }
                    self.pos += 1;
                    self.add_node(expr);
                }
                _ => {
                    let expr = self.bare_atom()?;
                    self.add_node(expr);
                }
            }
        }
        if let Some((_, pos)) = self.pending {
            return Err(syntax(pos, "bond without a following atom"));
        }
        if let Some(&(_, pos)) = self.stack.last() {
            return Err(syntax(pos, "unbalanced parenthesis"));
        }
        if let Some((_, &(_, _, pos))) = self.rings.iter().next() {
            return Err(syntax(pos, "unmatched ring-closure digit"));
        }
        if self.nodes.is_empty() {
            return Err(SmartsError::Empty);
        }
        Ok(())
    }

    fn bracket_error(&self) -> SmartsError {
        match self.peek() {
            None => syntax(self.pos, "unterminated bracket atom"),
            Some(b'$') => unsupported("recursive SMARTS", self.pos),
            Some(b'@') => unsupported("stereo", self.pos),
            Some(c) => syntax(self.pos, &format!("unexpected '{}' in bracket atom", c as char)),
        }
    }

    fn add_node(&mut self, expr: AtomExpr) {
        let idx = self.nodes.len();
        self.nodes.push(expr);
        if let Some(prev) = self.prev {
            let bond = self.pending.take().map(|(b, _)| b).unwrap_or(BondExpr::Implicit);
            self.edges.push(PatternEdge {
                a: prev,
                b: idx,
                expr: bond,
            });
        }
        self.pending = None;
        self.prev = Some(idx);
    }

    fn ring_closure(&mut self, label: u16, pos: usize) -> Result<(), SmartsError> {
        let atom = self.prev.ok_or_else(|| syntax(pos, "ring closure before any atom"))?;
        let bond = self.pending.take().map(|(b, _)| b);
        match self.rings.remove(&label) {
            None => {
                self.rings.insert(label, (atom, bond, pos));
            }
            Some((other, first, _)) => {
                if other == atom
                    || self
                        .edges
                        .iter()
                        .any(|e| (e.a == other && e.b == atom) || (e.a == atom && e.b == other))
                {
                    return Err(syntax(pos, "ring closure duplicates a bond"));
                }
                let expr = match (first, bond) {
                    (Some(a), Some(b)) if a != b => return Err(syntax(pos, "conflicting ring-closure bonds")),
                    (a, b) => a.or(b).unwrap_or(BondExpr::Implicit),
                };
                self.edges.push(PatternEdge {
                    a: other,
                    b: atom,
                    expr,
                });
            }
        }
        Ok(())
    }

    fn bare_atom(&mut self) -> Result<AtomExpr, SmartsError> {
        let start = self.pos;
        let two = self.bytes.get(start..start + 2);
        let table = PeriodicTable::global();
        let elem = |sym: &str, aromatic: bool| {
            let z = table.by_symbol(sym).expect("organic subset").atomic_number;
            AtomExpr::Prim(AtomPrimitive::Element {
                atomic_number: z,
                aromatic: Some(aromatic),
            })
        };
        let (expr, len) = match two {
            Some(b"Cl") => (elem("Cl", false), 2),
            Some(b"Br") => (elem("Br", false), 2),
            _ => match self.bytes[start] {
                b'*' => (AtomExpr::Prim(AtomPrimitive::Wildcard), 1),
                b'a' => (AtomExpr::Prim(AtomPrimitive::Aromatic), 1),
                b'A' => (AtomExpr::Prim(AtomPrimitive::Aliphatic), 1),
                b'B' => (elem("B", false), 1),
                b'C' => (elem("C", false), 1),
                b'N' => (elem("N", false), 1),
                b'O' => (elem("O", false), 1),
                b'P' => (elem("P", false), 1),
                b'S' => (elem("S", false), 1),
                b'F' => (elem("F", false), 1),
                b'I' => (elem("I", false), 1),
                b'b' => (elem("B", true), 1),
                b'c' => (elem("C", true), 1),
                b'n' => (elem("N", true), 1),
                b'o' => (elem("O", true), 1),
                b'p' => (elem("P", true), 1),
                b's' => (elem("S", true), 1),
                _ => {
                    let ch = self.text[start..].chars().next().unwrap_or('?');
                    return Err(syntax(start, &format!("unexpected character '{ch}'")));
                }
            },
        };
        self.pos += len;
        Ok(expr)
    }

    // ---- bracket atom expressions -------------------------------------

    fn atom_expr_lowand(&mut self) -> Result<AtomExpr, SmartsError> {
        let mut terms = vec![self.atom_expr_or()?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            terms.push(self.atom_expr_or()?);
        }
        Ok(collapse(terms, AtomExpr::And))
    }

    fn atom_expr_or(&mut self) -> Result<AtomExpr, SmartsError> {
        let mut terms = vec![self.atom_expr_and()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            terms.push(self.atom_expr_and()?);
        }
        Ok(collapse(terms, AtomExpr::Or))
    }

    fn atom_expr_and(&mut self) -> Result<AtomExpr, SmartsError> {
        let mut terms = vec![self.atom_expr_unary()?];
        loop {
            match self.peek() {
                Some(b'&') => {
                    self.pos += 1;
                    terms.push(self.atom_expr_unary()?);
                }
                Some(b']') | Some(b',') | Some(b';') | None => break,
                Some(_) => terms.push(self.atom_expr_unary()?),
            }
        }
        Ok(collapse(terms, AtomExpr::And))
    }

    fn atom_expr_unary(&mut self) -> Result<AtomExpr, SmartsError> {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            return Ok(AtomExpr::Not(Box::new(self.atom_expr_unary()?)));
        }
        self.atom_primitive().map(AtomExpr::Prim)
    }

    fn read_number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) && self.pos - start < 4 {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.text[start..self.pos].parse().unwrap())
    }

    fn small_number(&mut self, default: u8) -> Result<u8, SmartsError> {
        let pos = self.pos;
        match self.read_number() {
            None => Ok(default),
            Some(n) if n <= u8::MAX as u32 => Ok(n as u8),
            Some(_) => Err(syntax(pos, "count out of range")),
        }
    }

    fn atom_primitive(&mut self) -> Result<AtomPrimitive, SmartsError> {
        let start = self.pos;
        let table = PeriodicTable::global();
        let Some(c) = self.peek() else {
            return Err(syntax(start, "unterminated bracket atom"));
        };
        let bracket_start = self.bytes.get(start.wrapping_sub(1)) == Some(&b'[');
        match c {
            b'0'..=b'9' => {
                let n = self.read_number().unwrap();
                if n == 0 || n > 999 {
                    return Err(syntax(start, "isotope out of range"));
                }
                Ok(AtomPrimitive::Isotope(n as u16))
            }
            b'#' => {
                self.pos += 1;
                let n = self
                    .read_number()
                    .ok_or_else(|| syntax(self.pos, "# must be followed by an atomic number"))?;
                if n == 0 || table.by_number(n.min(255) as u8).is_none() {
                    return Err(syntax(start, "unknown atomic number"));
                }
                Ok(AtomPrimitive::AtomicNumber(n as u8))
            }
            b'*' => {
                self.pos += 1;
                Ok(AtomPrimitive::Wildcard)
            }
            b'+' | b'-' => {
                self.pos += 1;
                let unit: i32 = if c == b'+' { 1 } else { -1 };
                let charge = if let Some(n) = self.read_number() {
                    unit * n as i32
                } else {
                    let mut total = unit;
                    while self.peek() == Some(c) {
                        self.pos += 1;
                        total += unit;
                    }
                    total
                };
                if charge.abs() > 15 {
                    return Err(syntax(start, "charge out of range"));
                }
                Ok(AtomPrimitive::Charge(charge as i8))
            }
            b'$' => Err(unsupported("recursive SMARTS", start)),
            b'@' => Err(unsupported("stereo", start)),
            b'a' if self.peek_at(1) == Some(b's') => Err(unsupported("aromatic arsenic", start)),
            b'a' => {
                self.pos += 1;
                Ok(AtomPrimitive::Aromatic)
            }
            b'b' | b'c' | b'n' | b'o' | b'p' | b's' => {
                if c == b's' && self.peek_at(1) == Some(b'e') {
                    self.pos += 2;
                    return Ok(AtomPrimitive::Element {
                        atomic_number: 34,
                        aromatic: Some(true),
                    });
                }
                self.pos += 1;
                let z = table
                    .by_symbol(&(c as char).to_ascii_uppercase().to_string())
                    .unwrap()
                    .atomic_number;
                Ok(AtomPrimitive::Element {
                    atomic_number: z,
                    aromatic: Some(true),
                })
            }
            b'h' => Err(unsupported("implicit-hydrogen primitive h", start)),
            b'v' => Err(unsupported("valence primitive v", start)),
            b'x' => Err(unsupported("ring-connectivity primitive x", start)),
            b'^' => Err(unsupported("hybridization primitive ^", start)),
            b'z' => Err(unsupported("z primitives", start)),
            b'Z' if !matches!(self.peek_at(1), Some(b'n' | b'r')) => Err(unsupported("z primitives", start)),
            b'A'..=b'Z' => {
                // Two-letter element symbols take precedence over primitives.
                if let Some(l) = self.peek_at(1).filter(|l| l.is_ascii_lowercase()) {
                    let sym = format!("{}{}", c as char, l as char);
                    if let Some(e) = table.by_symbol(&sym) {
                        self.pos += 2;
                        return Ok(AtomPrimitive::Element {
                            atomic_number: e.atomic_number,
                            aromatic: Some(false),
                        });
                    }
                }
                match c {
                    b'H' => {
                        self.pos += 1;
                        // [H], [H+], [2H]: the hydrogen atom itself.
                        let isotope_prefix = start > 0 && self.bytes[start - 1].is_ascii_digit() && {
                            let mut k = start;
                            while k > 0 && self.bytes[k - 1].is_ascii_digit() {
                                k -= 1;
                            }
                            k > 0 && self.bytes[k - 1] == b'['
                        };
                        let at_atom_start = bracket_start || isotope_prefix;
                        if at_atom_start && matches!(self.peek(), Some(b']') | Some(b'+') | Some(b'-')) {
                            return Ok(AtomPrimitive::Element {
                                atomic_number: 1,
                                aromatic: Some(false),
                            });
                        }
                        Ok(AtomPrimitive::TotalH(self.small_number(1)?))
                    }
                    b'D' => {
                        self.pos += 1;
                        Ok(AtomPrimitive::Degree(self.small_number(1)?))
                    }
                    b'X' => {
                        self.pos += 1;
                        Ok(AtomPrimitive::Connectivity(self.small_number(1)?))
                    }
                    b'R' => {
                        self.pos += 1;
                        let n = self.read_number();
                        Ok(AtomPrimitive::RingMembership(n.map(|n| n.min(255) as u8)))
                    }
                    b'A' => {
                        self.pos += 1;
                        Ok(AtomPrimitive::Aliphatic)
                    }
                    _ => {
                        let sym = (c as char).to_string();
                        let e = table
                            .by_symbol(&sym)
                            .ok_or_else(|| syntax(start, &format!("unknown element '{sym}'")))?;
                        self.pos += 1;
                        Ok(AtomPrimitive::Element {
                            atomic_number: e.atomic_number,
                            aromatic: Some(false),
                        })
                    }
                }
            }
            b'r' => {
                self.pos += 1;
                let n = self.read_number();
                Ok(AtomPrimitive::SmallestRing(n.map(|n| n.min(255) as u8)))
            }
            _ => {
                let ch = self.text[start..].chars().next().unwrap_or('?');
                Err(syntax(start, &format!("unexpected '{ch}' in bracket atom")))
            }
        }
    }

    // ---- bond expressions ---------------------------------------------

    fn bond_expr(&mut self) -> Result<BondExpr, SmartsError> {
        let mut terms = vec![self.bond_or()?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            terms.push(self.bond_or()?);
        }
        Ok(collapse(terms, BondExpr::And))
    }

    fn bond_or(&mut self) -> Result<BondExpr, SmartsError> {
        let mut terms = vec![self.bond_and()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            terms.push(self.bond_and()?);
        }
        Ok(collapse(terms, BondExpr::Or))
    }

    fn bond_and(&mut self) -> Result<BondExpr, SmartsError> {
        let mut terms = vec![self.bond_unary()?];
        loop {
            match self.peek() {
                Some(b'&') => {
                    self.pos += 1;
                    terms.push(self.bond_unary()?);
                }
                Some(b'-' | b'=' | b'#' | b':' | b'~' | b'@' | b'!') => terms.push(self.bond_unary()?),
                _ => break,
            }
        }
        Ok(collapse(terms, BondExpr::And))
    }

    fn bond_unary(&mut self) -> Result<BondExpr, SmartsError> {
        let start = self.pos;
        let expr = match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                return Ok(BondExpr::Not(Box::new(self.bond_unary()?)));
            }
            Some(b'-') => BondExpr::Single,
            Some(b'=') => BondExpr::Double,
            Some(b'#') => BondExpr::Triple,
            Some(b':') => BondExpr::Aromatic,
            Some(b'~') => BondExpr::Any,
            Some(b'@') => BondExpr::Ring,
            Some(b'/') | Some(b'\\') => return Err(unsupported("directional (stereo) bonds", start)),
            _ => return Err(syntax(start, "expected a bond primitive")),
        };
        self.pos += 1;
        Ok(expr)
    }
}

fn collapse<T>(mut terms: Vec<T>, wrap: fn(Vec<T>) -> T) -> T {
    if terms.len() == 1 {
        terms.pop().unwrap()
    } else {
        wrap(terms)
    }
}
