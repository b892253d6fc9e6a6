//! Synthetic accessibility score (Ertl & Schuffenhauer 2009): the mean
//! contribution of the molecule's circular fragments, minus size,
//! stereo, ring-topology and macrocycle penalties, rescaled to [1, 10].
//!
//! Fragments are radius-0..2 circular atom environments identified by the
//! same 32-bit hashes as the published fragment-score table, so the table
//! can be used as distributed.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, BufReader};
use std::sync::OnceLock;

use flate2::read::GzDecoder;
use serde::Serialize;

use crate::molkit::{BondOrder, Molecule, PeriodicTable};

use super::assets::{parse_f64, records, AssetError};

const ASSET: &str = "sa_params.tsv";
const FRAGMENT_RADIUS: u32 = 2;

pub struct SaParams {
    pub unknown_fragment_score: f64,
    pub size_exponent: f64,
    pub macrocycle_min_size: usize,
    pub symmetry_weight: f64,
    pub raw_min: f64,
    pub raw_max: f64,
    pub smooth_above: f64,
    pub clamp_min: f64,
    pub clamp_max: f64,
    fragments_gz: Vec<u8>,
    fragments: OnceLock<HashMap<u32, f64>>,
}

impl fmt::Debug for SaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SaParams")
            .field("unknown_fragment_score", &self.unknown_fragment_score)
            .field("size_exponent", &self.size_exponent)
            .field("macrocycle_min_size", &self.macrocycle_min_size)
            .field("symmetry_weight", &self.symmetry_weight)
            .field("raw_min", &self.raw_min)
            .field("raw_max", &self.raw_max)
            .field("fragment_table_bytes", &self.fragments_gz.len())
            .finish()
    }
}

/// The score with every term that went into it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaBreakdown {
    pub score: f64,
    pub fragment_score: f64,
    pub size_penalty: f64,
    pub stereo_penalty: f64,
    pub spiro_penalty: f64,
    pub bridge_penalty: f64,
    pub macrocycle_penalty: f64,
    pub symmetry_term: f64,
    /// The fragment table was empty, so the fragment term is 0 and the
    /// score reflects complexity alone.
    pub fragment_table_empty: bool,
}

impl SaParams {
    /// Parse the scalar parameters; `fragments_gz` is the gzip-compressed
    /// fragment table (`score<TAB>id,id,...` lines), decoded on first use.
    /// An empty byte string means no fragment table.
    pub fn parse(text: &str, fragments_gz: Vec<u8>) -> Result<Self, AssetError> {
        let mut values = HashMap::new();
        for record in records(ASSET, text, 2) {
            let (line, f) = record?;
            values.insert(f[0].to_string(), parse_f64(ASSET, line, f[1])?);
        }
        let get = |key: &str| {
            values
                .get(key)
                .copied()
                .ok_or_else(|| AssetError::invalid(ASSET, format!("missing {key}")))
        };
        let params = SaParams {
            unknown_fragment_score: get("unknown_fragment_score")?,
            size_exponent: get("size_exponent")?,
            macrocycle_min_size: get("macrocycle_min_size")? as usize,
            symmetry_weight: get("symmetry_weight")?,
            raw_min: get("raw_min")?,
            raw_max: get("raw_max")?,
            smooth_above: get("smooth_above")?,
            clamp_min: get("clamp_min")?,
            clamp_max: get("clamp_max")?,
            fragments_gz,
            fragments: OnceLock::new(),
        };
        if params.raw_max <= params.raw_min || params.clamp_max < params.clamp_min {
            return Err(AssetError::invalid(ASSET, "empty raw or output range"));
        }
        Ok(params)
    }

    /// Fragment id → score, decoded on first use. A corrupt table is
    /// reported once and treated as empty.
    pub fn fragment_scores(&self) -> &HashMap<u32, f64> {
        self.fragments.get_or_init(|| {
            if self.fragments_gz.is_empty() {
                return HashMap::new();
            }
            decode_fragments(&self.fragments_gz).unwrap_or_else(|e| {
                tracing::error!("SA fragment table unusable ({e}); using complexity terms only");
                HashMap::new()
            })
        })
    }

    pub fn breakdown(&self, m: &Molecule) -> SaBreakdown {
        let m = m.with_implicit_hydrogens();
        let table = self.fragment_scores();
        let fragments = fragment_counts(&m);
        let total: u32 = fragments.values().sum();
        let fragment_score = if table.is_empty() || total == 0 {
            0.0
        } else {
            fragments
                .iter()
                .map(|(id, &count)| table.get(id).copied().unwrap_or(self.unknown_fragment_score) * count as f64)
                .sum::<f64>()
                / total as f64
        };

        let n_atoms = m.atom_count() as f64;
        let size_penalty = n_atoms.powf(self.size_exponent) - n_atoms;
        let stereo_penalty = ((potential_stereocenters(&m) + 1) as f64).log10();
        let (spiro, bridgeheads) = spiro_and_bridgeheads(&m);
        let spiro_penalty = ((spiro + 1) as f64).log10();
        let bridge_penalty = ((bridgeheads + 1) as f64).log10();
        let macrocycle_penalty = if m.rings().rings().iter().any(|r| r.len() >= self.macrocycle_min_size) {
            2f64.log10()
        } else {
            0.0
        };
        let distinct = fragments.len() as f64;
        let symmetry_term = if n_atoms > distinct && distinct > 0.0 {
            self.symmetry_weight * (n_atoms / distinct).ln()
        } else {
            0.0
        };
        let raw = fragment_score - size_penalty - stereo_penalty - spiro_penalty - bridge_penalty - macrocycle_penalty
            + symmetry_term;
        let mut score = 11.0 - (raw - self.raw_min + 1.0) / (self.raw_max - self.raw_min) * 9.0;
        if score > self.smooth_above {
            score = self.smooth_above + (score - self.smooth_above).ln();
        }
        SaBreakdown {
            score: score.clamp(self.clamp_min, self.clamp_max),
            fragment_score,
            size_penalty,
            stereo_penalty,
            spiro_penalty,
            bridge_penalty,
            macrocycle_penalty,
            symmetry_term,
            fragment_table_empty: table.is_empty(),
        }
    }
}

fn decode_fragments(gz: &[u8]) -> Result<HashMap<u32, f64>, String> {
    let reader = BufReader::new(GzDecoder::new(gz));
    let mut table = HashMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| e.to_string())?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let (score, ids) = line
            .split_once('\t')
            .ok_or_else(|| format!("line {}: expected score<TAB>ids", i + 1))?;
        let score: f64 = score.trim().parse().map_err(|_| format!("line {}: bad score", i + 1))?;
        for id in ids.split(',') {
            let id: u32 = id
                .trim()
                .parse()
                .map_err(|_| format!("line {}: bad id {id:?}", i + 1))?;
            table.insert(id, score);
        }
    }
    Ok(table)
}

fn hash_combine(seed: u32, v: u32) -> u32 {
    seed ^ v
        .wrapping_add(0x9e37_79b9)
        .wrapping_add(seed << 6)
        .wrapping_add(seed >> 2)
}

fn hash_range(values: &[u32]) -> u32 {
    values.iter().fold(0, |s, &v| hash_combine(s, v))
}

fn bond_code(order: BondOrder) -> u32 {
    match order {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 12,
    }
}

/// Initial atom invariant: element, total degree, hydrogen count, charge,
/// integer mass shift of a specified isotope, and ring membership.
fn atom_invariant(m: &Molecule, a: usize) -> u32 {
    let atom = m.atom(a);
    let delta_mass = atom
        .isotope
        .and_then(|iso| PeriodicTable::global().isotope_mass(atom.atomic_number, iso))
        .map(|mass| (mass - atom.element().standard_weight).trunc() as i32)
        .unwrap_or(0);
    let mut v = vec![
        atom.atomic_number as u32,
        m.connectivity(a) as u32,
        m.total_h(a) as u32,
        atom.formal_charge as i32 as u32,
        delta_mass as u32,
    ];
    if m.rings().atom_in_ring(a) {
        v.push(1);
    }
    hash_range(&v)
}

/// Counts of circular environments of radius 0..=2. An environment is kept
/// only the first time its bond set is seen; atoms whose environment
/// duplicates an earlier one stop growing.
pub(crate) fn fragment_counts(m: &Molecule) -> BTreeMap<u32, u32> {
    let n = m.atom_count();
    let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
    let mut current: Vec<u32> = (0..n).map(|a| atom_invariant(m, a)).collect();
    for &id in &current {
        *counts.entry(id).or_default() += 1;
    }
    let mut neighborhoods: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut dead = vec![false; n];
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
    for layer in 0..FRAGMENT_RADIUS {
        let mut next = vec![0u32; n];
        let mut grown = neighborhoods.clone();
        let mut round = Vec::new();
        for a in 0..n {
            if dead[a] {
                continue;
            }
            if m.degree(a) == 0 {
                dead[a] = true;
                continue;
            }
            let mut pairs = Vec::with_capacity(m.degree(a));
            for &(nbr, b) in m.neighbors(a) {
                grown[a].insert(b);
                grown[a].extend(neighborhoods[nbr].iter().copied());
                pairs.push((bond_code(m.bond(b).order), current[nbr]));
            }
            pairs.sort_unstable();
            let id = pairs.iter().fold(hash_combine(layer, current[a]), |v, &(bt, inv)| {
                hash_combine(v, hash_combine(hash_combine(0, bt), inv))
            });
            next[a] = id;
            round.push((id, a));
        }
        round.sort_unstable();
        for (id, a) in round {
            if seen.insert(grown[a].clone()) {
                *counts.entry(id).or_default() += 1;
            } else {
                dead[a] = true;
            }
        }
        current = next;
        neighborhoods = grown;
    }
    counts
}

/// An atom's invariant labels and its sorted (bond code, neighbour rank) list.
type SymmetryKey = (Vec<i64>, Vec<(u32, usize)>);

/// Graph-symmetry classes by iterative refinement of atom labels.
fn symmetry_classes(m: &Molecule) -> Vec<usize> {
    let n = m.atom_count();
    let rank_of = |keys: &[SymmetryKey]| -> Vec<usize> {
        let mut sorted: Vec<&SymmetryKey> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        keys.iter()
            .map(|k| sorted.binary_search(&k).expect("key present"))
            .collect()
    };
    let initial: Vec<SymmetryKey> = (0..n)
        .map(|a| {
            let atom = m.atom(a);
            (
                vec![
                    atom.atomic_number as i64,
                    atom.isotope.map_or(0, |i| i as i64),
                    atom.formal_charge as i64,
                    atom.aromatic as i64,
                    m.degree(a) as i64,
                    m.total_h(a) as i64,
                ],
                Vec::new(),
            )
        })
        .collect();
    let mut ranks = rank_of(&initial);
    loop {
        let keys: Vec<SymmetryKey> = (0..n)
            .map(|a| {
                let mut env: Vec<(u32, usize)> = m
                    .neighbors(a)
                    .iter()
                    .map(|&(nbr, b)| (bond_code(m.bond(b).order), ranks[nbr]))
                    .collect();
                env.sort_unstable();
                (vec![ranks[a] as i64], env)
            })
            .collect();
        let refined = rank_of(&keys);
        let classes = |r: &[usize]| r.iter().collect::<HashSet<_>>().len();
        if classes(&refined) == classes(&ranks) {
            return refined;
        }
        ranks = refined;
    }
}

/// Potential stereocentres: four-connected atoms with at most one hydrogen
/// whose neighbours all fall in different symmetry classes.
fn potential_stereocenters(m: &Molecule) -> usize {
    let classes = symmetry_classes(m);
    (0..m.atom_count())
        .filter(|&a| {
            if m.connectivity(a) != 4 || m.total_h(a) > 1 || m.atom(a).is_hydrogen() {
                return false;
            }
            let mut seen = HashSet::new();
            m.neighbors(a).iter().all(|&(nbr, _)| seen.insert(classes[nbr]))
        })
        .count()
}

/// Spiro atoms (the single atom shared by two rings) and bridgehead atoms
/// (atoms ending the shared path of two rings that share more than one bond).
fn spiro_and_bridgeheads(m: &Molecule) -> (usize, usize) {
    let rings = m.rings();
    let atom_sets: Vec<HashSet<usize>> = rings.rings().iter().map(|r| r.iter().copied().collect()).collect();
    let bond_sets: Vec<HashSet<usize>> = rings.ring_bonds().iter().map(|r| r.iter().copied().collect()).collect();
    let mut spiro = HashSet::new();
    let mut bridgeheads = HashSet::new();
    for i in 0..atom_sets.len() {
        for j in i + 1..atom_sets.len() {
            let shared: Vec<usize> = atom_sets[i].intersection(&atom_sets[j]).copied().collect();
            if shared.len() == 1 {
                spiro.insert(shared[0]);
            }
            let shared_bonds: Vec<usize> = bond_sets[i].intersection(&bond_sets[j]).copied().collect();
            if shared_bonds.len() > 1 {
                let mut touches: HashMap<usize, usize> = HashMap::new();
                for &b in &shared_bonds {
                    let bond = m.bond(b);
                    *touches.entry(bond.a).or_default() += 1;
                    *touches.entry(bond.b).or_default() += 1;
                }
                bridgeheads.extend(touches.into_iter().filter(|&(_, c)| c == 1).map(|(a, _)| a));
            }
        }
    }
    (spiro.len(), bridgeheads.len())
}

#[cfg(test)]
mod tests {
    use super::super::assets::{SA_FRAGMENTS_GZ, SA_PARAMS};
    use super::*;
    use crate::molkit::parse_smiles;

    fn params() -> SaParams {
        SaParams::parse(SA_PARAMS, SA_FRAGMENTS_GZ.to_vec()).unwrap()
    }

    #[test]
    fn hash_combine_reference_values() {
        // Boost-style combine in 32-bit arithmetic.
        assert_eq!(hash_combine(0, 0), 0x9e37_79b9);
        assert_eq!(hash_combine(1, 2), 1 ^ (2u32 + 0x9e37_79b9 + 64));
    }

    #[test]
    fn fragment_ids_found_in_table() {
        let p = params();
        let table = p.fragment_scores();
        assert!(table.len() > 100_000);
        // Common environments of ethanol are all known fragments.
        let frags = fragment_counts(&parse_smiles("CCO").unwrap());
        assert!(frags.keys().all(|id| table.contains_key(id)), "{frags:?}");
    }

    #[test]
    fn ring_topology_counts() {
        let count = |s: &str| spiro_and_bridgeheads(&parse_smiles(s).unwrap());
        assert_eq!(count("C1CCC2(CC1)CCCC2"), (1, 0));
        assert_eq!(count("C1CC2CCC1C2"), (0, 2));
        assert_eq!(count("c1ccc2ccccc2c1"), (0, 0));
    }

    #[test]
    fn stereocentres() {
        let count = |s: &str| potential_stereocenters(&parse_smiles(s).unwrap());
        assert_eq!(count("CC(O)CC"), 1);
        assert_eq!(count("CC(C)C"), 0);
        assert_eq!(count("CC1CCCCC1"), 0);
        assert_eq!(count("CC1CCCCC1C"), 2);
    }

    #[test]
    fn empty_table_is_flagged() {
        let p = SaParams::parse(SA_PARAMS, Vec::new()).unwrap();
        let b = p.breakdown(&parse_smiles("CCO").unwrap());
        assert!(b.fragment_table_empty);
        assert_eq!(b.fragment_score, 0.0);
        assert!((1.0..=10.0).contains(&b.score));
    }
}
