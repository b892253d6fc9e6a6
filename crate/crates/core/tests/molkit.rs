//! SMILES round trips over the shipped corpus, the SMARTS matcher against a
//! brute-force oracle, ring-perception consistency and parser fuzzing.

mod support;

use std::collections::{BTreeMap, BTreeSet};

use chemagent_core::molkit::{kekulize, match_pattern, parse_smarts, parse_smiles, write_smiles, BondOrder, Molecule};
use rand::{Rng, SeedableRng};
use support::{corpus, isomorphic, oracle_mappings, reachable_without, small_shipped_patterns};

#[test]
fn corpus_is_large_enough() {
    assert!(corpus().len() >= 200);
}

#[test]
fn smiles_round_trip_over_corpus() {
    let mols = corpus();
    for m in &mols {
        let written = write_smiles(m);
        let back = parse_smiles(&written).unwrap_or_else(|e| panic!("{} -> {written}: {e}", m.source_text()));
        assert!(
            isomorphic(m, &back),
            "{} -> {written} is not the same graph",
            m.source_text()
        );
        assert_eq!(m.total_hydrogens(), back.total_hydrogens(), "{}", m.source_text());
        // Writing the re-read molecule again gives a graph isomorphic to both.
        let again = parse_smiles(&write_smiles(&back)).unwrap();
        assert!(isomorphic(&back, &again));
    }
}

#[test]
fn isomorphism_check_rejects_different_graphs() {
    let pairs = [
        ("CCO", "COC"),
        ("c1ccccc1", "C1CCCCC1"),
        ("CC(C)C", "CCCC"),
        ("C[NH3+]", "CN"),
    ];
    for (x, y) in pairs {
        assert!(
            !isomorphic(&parse_smiles(x).unwrap(), &parse_smiles(y).unwrap()),
            "{x} {y}"
        );
    }
    assert!(isomorphic(
        &parse_smiles("OCC").unwrap(),
        &parse_smiles("C(O)C").unwrap()
    ));
}

#[test]
fn kekulization_conserves_hydrogens_and_removes_aromatic_bonds() {
    for m in corpus() {
        let k = kekulize(&m).unwrap_or_else(|e| panic!("{}: {e}", m.source_text()));
        assert_eq!(k.total_hydrogens(), m.total_hydrogens(), "{}", m.source_text());
        assert!(k.bonds().iter().all(|b| b.order != BondOrder::Aromatic));
        // Each formerly aromatic atom carries at most one double bond.
        for i in 0..k.atom_count() {
            let doubles = k
                .neighbors(i)
                .iter()
                .filter(|&&(_, b)| k.bond(b).order == BondOrder::Double)
                .count();
            if m.atom(i).aromatic {
                assert!(doubles <= 1, "{} atom {i}", m.source_text());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Ring perception.

#[test]
fn ring_set_is_consistent_with_graph() {
    for m in corpus() {
        let rings = m.rings();
        // The smallest set of smallest rings has cycle-rank many members.
        let rank = m.bonds().len() + m.components().len() - m.atom_count();
        assert_eq!(rings.len(), rank, "{}", m.source_text());
        for (ring, bonds) in rings.rings().iter().zip(rings.ring_bonds()) {
            assert_eq!(ring.len(), bonds.len());
            for k in 0..ring.len() {
                let (x, y) = (ring[k], ring[(k + 1) % ring.len()]);
                assert!(
                    m.bond_between(x, y).is_some(),
                    "{}: ring {ring:?} not a cycle",
                    m.source_text()
                );
            }
            assert_eq!(ring.iter().collect::<BTreeSet<_>>().len(), ring.len());
        }
        for i in 0..m.atom_count() {
            let member = rings.rings().iter().filter(|r| r.contains(&i)).count();
            assert_eq!(rings.num_atom_rings(i), member);
            assert_eq!(rings.atom_in_ring(i), member > 0);
            let smallest = rings.rings().iter().filter(|r| r.contains(&i)).map(Vec::len).min();
            assert_eq!(rings.smallest_ring_of(i), smallest);
        }
        // A bond lies on a cycle exactly when removing it keeps its ends connected.
        for (bi, bond) in m.bonds().iter().enumerate() {
            let connected = reachable_without(&m, bond.a, bond.b, bi);
            assert_eq!(rings.bond_in_ring(bi), connected, "{} bond {bi}", m.source_text());
        }
    }
}

// ---------------------------------------------------------------------------
// The matcher against the brute-force oracle.

#[test]
fn matcher_equals_brute_force_oracle_on_shipped_patterns() {
    let patterns = small_shipped_patterns();
    assert!(patterns.len() >= 100, "only {} small patterns", patterns.len());
    let mut mols: Vec<Molecule> = corpus().into_iter().filter(|m| m.atom_count() <= 8).collect();
    // Hydrogen-explicit forms exercise the [#1] typing rows.
    mols.extend(
        mols.clone()
            .iter()
            .map(Molecule::with_explicit_hydrogens)
            .filter(|m| m.atom_count() <= 8),
    );
    assert!(mols.len() >= 20, "only {} small molecules", mols.len());
    let mut nonempty = 0;
    for p in &patterns {
        for m in &mols {
            let want = oracle_mappings(p, m);
            let got: BTreeSet<Vec<usize>> = match_pattern(p, m).mappings.into_iter().collect();
            assert_eq!(got, want, "pattern {} on {}", p.source_text(), m.source_text());
            nonempty += usize::from(!want.is_empty());
        }
    }
    assert!(nonempty > 100, "oracle comparison is too sparse ({nonempty} hits)");
}

#[test]
fn matcher_equals_brute_force_oracle_on_random_patterns() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let atoms = [
        "C", "c", "N", "n", "O", "[#6]", "*", "[C;R]", "[N,O]", "[!#6]", "[CH2]", "[D3]", "[r6]", "[X4]", "a", "A",
    ];
    let bonds = ["", "-", "=", ":", "~", "@", "!@", "-,="];
    let mols: Vec<Molecule> = corpus().into_iter().filter(|m| m.atom_count() <= 8).collect();
    for _ in 0..300 {
        let len = rng.gen_range(1..=4);
        let mut text = atoms[rng.gen_range(0..atoms.len())].to_string();
        for _ in 1..len {
            text.push_str(bonds[rng.gen_range(0..bonds.len())]);
            text.push_str(atoms[rng.gen_range(0..atoms.len())]);
        }
        let p = parse_smarts(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
        for m in &mols {
            let got: BTreeSet<Vec<usize>> = match_pattern(&p, m).mappings.into_iter().collect();
            assert_eq!(got, oracle_mappings(&p, m), "pattern {text} on {}", m.source_text());
        }
    }
}

// ---------------------------------------------------------------------------
// Fuzzing: arbitrary input never panics; errors carry a position.

#[test]
fn parsers_never_panic_on_random_strings() {
    let alphabet: Vec<char> = "CNOSPFIBrcnosp()[]=#:~-+@.%0123456789Hh*!&,;$aAXDRrxv/\\ "
        .chars()
        .collect();
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let mut outcomes: BTreeMap<&str, usize> = BTreeMap::new();
    for _ in 0..100_000 {
        let len = rng.gen_range(0..16);
        let s: String = (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect();
        let smiles = std::panic::catch_unwind(|| parse_smiles(&s).map(|m| write_smiles(&m)));
        let smarts = std::panic::catch_unwind(|| parse_smarts(&s).map(|p| p.len()));
        match (smiles, smarts) {
            (Ok(a), Ok(b)) => {
                *outcomes
                    .entry(if a.is_ok() { "smiles ok" } else { "smiles err" })
                    .or_default() += 1;
                *outcomes
                    .entry(if b.is_ok() { "smarts ok" } else { "smarts err" })
                    .or_default() += 1;
            }
            _ => panic!("parser panicked on {s:?}"),
        }
    }
    assert!(outcomes.get("smiles ok").copied().unwrap_or(0) > 0, "{outcomes:?}");
    assert!(outcomes.get("smarts ok").copied().unwrap_or(0) > 0, "{outcomes:?}");
}

#[test]
fn valid_smiles_round_trips_under_random_generation() {
    // Random chains with branches and rings, written by a tiny generator.
    let mut rng = rand::rngs::StdRng::seed_from_u64(99);
    let atoms = ["C", "N", "O", "S", "Cl", "[NH4+]", "[O-]", "c1ccccc1", "C1CC1"];
    for _ in 0..2000 {
        let mut s = String::new();
        for k in 0..rng.gen_range(1..6) {
            if k > 0 {
                s.push_str(["", "=", "(C)", "(O)"][rng.gen_range(0..4)]);
            }
            s.push_str(atoms[rng.gen_range(0..atoms.len())]);
        }
        let Ok(m) = parse_smiles(&s) else { continue };
        let back = parse_smiles(&write_smiles(&m)).unwrap();
        assert!(isomorphic(&m, &back), "{s}");
    }
}
