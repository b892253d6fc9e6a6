//! Periodic-table asset: symbols, standard weights, default valences and
//! isotope masses.

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

const ELEMENTS_TSV: &str = include_str!("../../data/elements.tsv");
const ISOTOPES_TSV: &str = include_str!("../../data/isotopes.tsv");

/// Symbols the SMILES grammar allows outside brackets.
pub const ORGANIC_SUBSET: [&str; 10] = ["B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"];

/// Elements that may be written lowercase (aromatic).
pub const AROMATIC_CAPABLE: [&str; 6] = ["B", "C", "N", "O", "P", "S"];

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub symbol: String,
    pub atomic_number: u8,
    pub standard_weight: f64,
    pub default_valences: Vec<u8>,
    pub organic_subset: bool,
}

impl Element {
    pub fn aromatic_capable(&self) -> bool {
        AROMATIC_CAPABLE.contains(&self.symbol.as_str())
    }

    /// Largest default valence, if the element has any.
    pub fn max_valence(&self) -> Option<u8> {
        self.default_valences.iter().copied().max()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TableError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("duplicate symbol {0}")]
    DuplicateSymbol(String),
}

#[derive(Debug, Clone)]
pub struct PeriodicTable {
    by_number: Vec<Option<Element>>,
    by_symbol: HashMap<String, u8>,
    isotopes: HashMap<(u8, u16), f64>,
}

impl PeriodicTable {
    /// Parses `symbol<TAB>atomic_number<TAB>standard_weight<TAB>valences`
    /// rows and an optional `symbol<TAB>mass_number<TAB>mass` isotope table.
    pub fn parse(elements: &str, isotopes: Option<&str>) -> Result<Self, TableError> {
        let mut by_number: Vec<Option<Element>> = vec![None; 256];
        let mut by_symbol = HashMap::new();
        for (lineno, line) in data_lines(elements) {
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() < 3 {
                return Err(malformed(lineno, "expected at least 3 columns"));
            }
            let symbol = cols[0].trim().to_string();
            let atomic_number: u8 = cols[1]
                .trim()
                .parse()
                .map_err(|_| malformed(lineno, "bad atomic number"))?;
            let standard_weight: f64 = cols[2].trim().parse().map_err(|_| malformed(lineno, "bad weight"))?;
            if standard_weight <= 0.0 {
                return Err(malformed(lineno, "weight must be positive"));
            }
            let default_valences = match cols.get(3).map(|s| s.trim()) {
                None | Some("") => Vec::new(),
                Some(list) => list
                    .split(',')
                    .map(|v| v.trim().parse::<u8>())
                    .filter(|v| !matches!(v, Ok(0)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| malformed(lineno, "bad valence list"))?,
            };
            let organic_subset = ORGANIC_SUBSET.contains(&symbol.as_str());
            if organic_subset && default_valences.is_empty() {
                return Err(malformed(lineno, "organic-subset element without valences"));
            }
            if by_symbol.insert(symbol.clone(), atomic_number).is_some() {
                return Err(TableError::DuplicateSymbol(symbol));
            }
            by_number[atomic_number as usize] = Some(Element {
                symbol,
                atomic_number,
                standard_weight,
                default_valences,
                organic_subset,
            });
        }
        let mut table = PeriodicTable {
            by_number,
            by_symbol,
            isotopes: HashMap::new(),
        };
        if let Some(iso) = isotopes {
            for (lineno, line) in data_lines(iso) {
                let cols: Vec<&str> = line.split('\t').collect();
                if cols.len() != 3 {
                    return Err(malformed(lineno, "expected 3 columns"));
                }
                let z = table
                    .by_symbol
                    .get(cols[0].trim())
                    .copied()
                    .ok_or_else(|| malformed(lineno, "unknown element"))?;
                let a: u16 = cols[1]
                    .trim()
                    .parse()
                    .map_err(|_| malformed(lineno, "bad mass number"))?;
                let mass: f64 = cols[2]
                    .trim()
                    .parse()
                    .map_err(|_| malformed(lineno, "bad isotope mass"))?;
                table.isotopes.insert((z, a), mass);
            }
        }
        Ok(table)
    }

    /// The shipped table.
    pub fn global() -> &'static PeriodicTable {
        static TABLE: OnceLock<PeriodicTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            PeriodicTable::parse(ELEMENTS_TSV, Some(ISOTOPES_TSV)).expect("shipped periodic table is well-formed")
        })
    }

    pub fn by_number(&self, z: u8) -> Option<&Element> {
        self.by_number.get(z as usize).and_then(|e| e.as_ref())
    }

    pub fn by_symbol(&self, symbol: &str) -> Option<&Element> {
        self.by_symbol.get(symbol).and_then(|&z| self.by_number(z))
    }

    pub fn isotope_mass(&self, z: u8, mass_number: u16) -> Option<f64> {
        self.isotopes.get(&(z, mass_number)).copied()
    }
}

fn malformed(line: usize, reason: &str) -> TableError {
    TableError::Malformed {
        line,
        reason: reason.to_string(),
    }
}

/// Non-empty, non-comment lines with 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}
