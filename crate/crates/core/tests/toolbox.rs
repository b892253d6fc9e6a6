//! Tool registry contract: worked examples, format closure, determinism,
//! error totality and agreement with `docs/tools.md`.

use chemagent_core::toolbox::{default_registry, format_2dp, OutputKind, RawValue};
use rand::{Rng, SeedableRng};

const CORPUS: &str = include_str!("../data/molecules.txt");
const TOOLS_DOC: &str = include_str!("../../../docs/tools.md");

fn corpus() -> Vec<&'static str> {
    CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

#[test]
fn reference_answers() {
    let r = default_registry();
    assert_eq!(r.invoke("calculate_tpsa", "C(CS)O").text, "20.23");
    assert_eq!(r.invoke("calculate_qed", "CCCC=O").text, "0.44");
    assert_eq!(r.invoke("check_bbb_permeant", "CCON=O").text, "Yes");
    assert_eq!(r.invoke("check_gi_absorption", "C#C").text, "Low");
}

#[test]
fn registry_matches_the_tool_document() {
    let r = default_registry();
    let rows: Vec<Vec<&str>> = TOOLS_DOC
        .lines()
        .filter(|l| l.starts_with("| ") && !l.starts_with("| name"))
        .map(|l| l.trim_matches('|').split(" | ").map(str::trim).collect())
        .collect();
    assert_eq!(rows.len(), r.len());
    for (row, spec) in rows.iter().zip(r.tools()) {
        assert_eq!(row[0], spec.name);
        assert_eq!(row[1], spec.output_kind.name());
        assert_eq!(row[2], spec.description);
    }
}

#[test]
fn question_templates_match_the_tool_document() {
    let r = default_registry();
    let listed: Vec<(&str, &str)> = TOOLS_DOC
        .lines()
        .filter_map(|l| l.strip_prefix("- `"))
        .filter_map(|l| l.split_once("`: "))
        .collect();
    assert_eq!(listed.len(), r.len());
    for ((name, template), spec) in listed.iter().zip(r.tools()) {
        assert_eq!((*name, *template), (spec.name, spec.question_template));
    }
}

#[test]
fn every_kind_is_used_and_partition_is_five_five() {
    let r = default_registry();
    for kind in OutputKind::ALL {
        assert!(r.tools().iter().any(|t| t.output_kind == kind), "{kind}");
    }
    assert_eq!(r.tools().iter().filter(|t| t.output_kind.is_quantitative()).count(), 5);
}

/// Every successful answer reads back to the value it was formatted from.
#[test]
fn format_closure_over_corpus() {
    let r = default_registry();
    for smiles in corpus() {
        for res in r.invoke_all(smiles) {
            assert!(res.is_ok(), "{} {smiles}: {}", res.tool, res.text);
            let kind = r.lookup(&res.tool).unwrap().output_kind;
            let back = kind
                .parse(&res.text)
                .unwrap_or_else(|| panic!("{} {smiles}: {:?}", res.tool, res.text));
            match (back, res.raw.unwrap()) {
                (RawValue::Real(b), RawValue::Real(raw)) => {
                    assert!((b - raw).abs() <= 0.005 + 1e-9);
                    assert_eq!(format_2dp(b), res.text);
                }
                (RawValue::Flag(b), RawValue::Flag(raw)) => assert_eq!(b, raw),
                other => panic!("kind mismatch {other:?}"),
            }
        }
    }
}

#[test]
fn invoke_is_deterministic() {
    let r = default_registry();
    let again = default_registry();
    for smiles in corpus().into_iter().take(50) {
        assert_eq!(r.invoke_all(smiles), again.invoke_all(smiles));
    }
}

/// Half-up rounding against integer arithmetic on values with three
/// decimals, where the third decimal decides.
#[test]
fn two_decimal_rounding_matches_integer_oracle() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..20_000 {
        let thousandths: i64 = rng.gen_range(-2_000_000..2_000_000);
        let x = thousandths as f64 / 1000.0;
        let mag = thousandths.unsigned_abs();
        let cents = mag / 10 + u64::from(mag % 10 >= 5);
        let sign = if thousandths < 0 && cents > 0 { "-" } else { "" };
        assert_eq!(
            format_2dp(x),
            format!("{sign}{}.{:02}", cents / 100, cents % 100),
            "{x}"
        );
    }
}

/// No input, however malformed, makes a tool fail other than by
/// observation text.
#[test]
fn invoke_is_total_over_arbitrary_input() {
    let r = default_registry();
    let names: Vec<&str> = r.names().into_iter().chain(["", "calc", "CALCULATE_TPSA"]).collect();
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    for _ in 0..10_000 {
        let len = rng.gen_range(0..24);
        let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
        let input = String::from_utf8_lossy(&bytes);
        let name = names[rng.gen_range(0..names.len())];
        let res = std::panic::catch_unwind(|| r.invoke(name, &input)).unwrap_or_else(|_| panic!("{name} {input:?}"));
        assert!(!res.text.is_empty());
        assert_eq!(res.is_ok(), res.raw.is_some());
        if !res.is_ok() {
            assert!(
                res.text.starts_with("unknown tool ")
                    || res.text.starts_with("invalid SMILES: ")
                    || res.text.starts_with("descriptor error: "),
                "{}",
                res.text
            );
        }
    }
}
