//! Descriptor agreement with `tests/data/reference_values.csv`, generated
//! once by an established cheminformatics toolkit and committed as data.

use chemagent_core::descriptors::DescriptorEngine;
use chemagent_core::molkit::parse_smiles;

const REFERENCE: &str = include_str!("data/reference_values.csv");

const TOL_MW: f64 = 0.01;
const TOL_LOGP: f64 = 0.01;
const TOL_TPSA: f64 = 0.01;
const TOL_QED: f64 = 0.02;

#[derive(Debug, serde::Deserialize)]
struct Row {
    smiles: String,
    alt_smiles: String,
    mol_weight: f64,
    logp: f64,
    tpsa: f64,
    qed: f64,
    sa_score: f64,
}

fn rows() -> Vec<Row> {
    csv::Reader::from_reader(REFERENCE.as_bytes())
        .deserialize()
        .collect::<Result<Vec<Row>, _>>()
        .expect("reference file parses")
}

#[test]
fn reference_file_is_large_enough() {
    assert!(rows().len() >= 200);
}

#[test]
fn descriptors_match_reference_values() {
    let engine = DescriptorEngine::embedded();
    let mut failures = Vec::new();
    for row in rows() {
        let m = parse_smiles(&row.smiles).unwrap_or_else(|e| panic!("{}: {e}", row.smiles));
        let checks = [
            ("mol_weight", engine.mol_weight(&m).unwrap(), row.mol_weight, TOL_MW),
            ("logp", engine.crippen_logp(&m).unwrap(), row.logp, TOL_LOGP),
            ("tpsa", engine.tpsa(&m).value, row.tpsa, TOL_TPSA),
            ("qed", engine.qed(&m).unwrap(), row.qed, TOL_QED),
        ];
        for (name, got, want, tol) in checks {
            if (got - want).abs() > tol {
                failures.push(format!("{} {name}: got {got:.4}, reference {want:.4}", row.smiles));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "{} disagreements:\n{}",
        failures.len(),
        failures.join("\n")
    );
}

#[test]
fn sa_score_in_range_and_spelling_invariant() {
    let engine = DescriptorEngine::embedded();
    for row in rows() {
        let a = engine.sa_score(&parse_smiles(&row.smiles).unwrap());
        let b = engine.sa_score(&parse_smiles(&row.alt_smiles).unwrap());
        assert!((1.0..=10.0).contains(&a), "{}: {a}", row.smiles);
        assert!((a - b).abs() < 1e-9, "{} vs {}: {a} != {b}", row.smiles, row.alt_smiles);
    }
}

#[test]
fn every_descriptor_is_spelling_invariant() {
    let engine = DescriptorEngine::embedded();
    for row in rows() {
        let a = engine.describe(&parse_smiles(&row.smiles).unwrap()).unwrap();
        let b = engine.describe(&parse_smiles(&row.alt_smiles).unwrap()).unwrap();
        let pairs = [
            (a.mol_weight, b.mol_weight),
            (a.logp, b.logp),
            (a.tpsa, b.tpsa),
            (a.qed, b.qed),
            (a.sa_score, b.sa_score),
        ];
        for (x, y) in pairs {
            assert!((x - y).abs() < 1e-9, "{} vs {}", row.smiles, row.alt_smiles);
        }
        assert_eq!(a.egg, b.egg);
        assert_eq!(a.lipinski.passes, b.lipinski.passes);
        assert_eq!(a.brenk, b.brenk);
        assert_eq!(a.pains, b.pains);
    }
}

/// The fragment table and penalty terms reproduce the published score
/// closely; the only approximation is the stereocentre count.
#[test]
fn sa_score_tracks_reference() {
    let engine = DescriptorEngine::embedded();
    let rows = rows();
    let close = rows
        .iter()
        .filter(|row| (engine.sa_score(&parse_smiles(&row.smiles).unwrap()) - row.sa_score).abs() < 0.1)
        .count();
    assert!(close * 100 >= rows.len() * 95, "only {close}/{} within 0.1", rows.len());
}
