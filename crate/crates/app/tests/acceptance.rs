//! Acceptance run: one PASS/FAIL line per criterion, each checked against
//! an independent oracle and a wall-clock budget. Exits nonzero when any
//! criterion fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use chemagent_agent::{AgentConfig, RuleOracleBackend};
use chemagent_bench::{
    generate, read_summary, run_benchmark, score_answer, write_reports, AnswerKind, BackendSource, BenchmarkRun,
    BenchmarkSet, Labels, QuestionRecord, SetName,
};
use chemagent_core::corpus::{parse_molecule_list, DEFAULT_MOLECULES};
use chemagent_core::descriptors::DescriptorEngine;
use chemagent_core::molkit::{match_pattern, parse_smiles, write_smiles, Molecule};
use chemagent_core::toolbox::{default_registry, ToolRegistry};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const REFERENCE: &str = include_str!("../../core/tests/data/reference_values.csv");

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn registry() -> Arc<ToolRegistry> {
    Arc::new(default_registry())
}

fn molecules() -> Vec<String> {
    parse_molecule_list(DEFAULT_MOLECULES)
}

fn labels() -> Labels {
    Labels {
        model: "rule_oracle".into(),
        node: "acceptance".into(),
    }
}

fn oracle_run(r: &Arc<ToolRegistry>, set: &BenchmarkSet, flip: f64) -> BenchmarkRun {
    let backend = BackendSource::Shared(Arc::new(RuleOracleBackend::noisy(r.clone(), flip, 1)));
    let rt = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .unwrap();
    rt.block_on(run_benchmark(
        set,
        &AgentConfig::default(),
        r.clone(),
        &backend,
        1,
        &labels(),
    ))
}

// ---------------------------------------------------------------------------
// Criteria.

fn table_values() -> Result<String, String> {
    let r = default_registry();
    let cases = [
        ("calculate_tpsa", "C(CS)O", "20.23", 0.01),
        ("calculate_qed", "CCCC=O", "0.44", 0.02),
    ];
    for (tool, smiles, want, tol) in cases {
        let got = r.invoke(tool, smiles).text;
        let (g, w): (f64, f64) = (
            got.parse().map_err(|_| format!("{tool}({smiles}) = {got}"))?,
            want.parse().unwrap(),
        );
        ensure((g - w).abs() <= tol + 1e-9, || {
            format!("{tool}({smiles}) = {got}, want {want} ± {tol}")
        })?;
    }
    for (tool, smiles, want) in [
        ("check_bbb_permeant", "CCON=O", "Yes"),
        ("check_gi_absorption", "C#C", "Low"),
    ] {
        let got = r.invoke(tool, smiles).text;
        ensure(got == want, || format!("{tool}({smiles}) = {got}, want {want}"))?;
    }
    Ok("TPSA 20.23, QED 0.44, BBB Yes, GI Low".into())
}

fn set_sizes_and_partition() -> Result<String, String> {
    let r = default_registry();
    let mols = molecules();
    let key = |q: &QuestionRecord| {
        (
            q.id.clone(),
            q.tool.clone(),
            q.smiles.clone(),
            q.question.clone(),
            q.gold.clone(),
        )
    };
    for seed in [1, 42] {
        let make = |s| generate(&r, s, &mols, seed).map_err(|e| e.to_string());
        let (ql, qn, full) = (
            make(SetName::Qualitative)?,
            make(SetName::Quantitative)?,
            make(SetName::Full)?,
        );
        for (set, size) in [(&ql, 500), (&qn, 500), (&full, 1000)] {
            ensure(set.questions.len() == size, || {
                format!("{}: {} questions", set.name, set.questions.len())
            })?;
            let tools: BTreeSet<&str> = set.questions.iter().map(|q| q.tool.as_str()).collect();
            for t in tools {
                let n = set.questions.iter().filter(|q| q.tool == t).count();
                ensure(n == 100, || format!("{}: {t} asked {n} times", set.name))?;
            }
        }
        let union: BTreeSet<_> = ql.questions.iter().chain(&qn.questions).map(key).collect();
        let whole: BTreeSet<_> = full.questions.iter().map(key).collect();
        ensure(union.len() == 1000 && union == whole, || {
            format!("seed {seed}: union differs from full set")
        })?;
    }
    Ok("500/500/1000, 100 per tool, union equals full for seeds 1 and 42".into())
}

fn oracle_closure() -> Result<String, String> {
    let r = registry();
    let set = generate(&r, SetName::Full, &molecules(), 1).map_err(|e| e.to_string())?;
    let run = oracle_run(&r, &set, 0.0);
    ensure(run.results.len() == 1000, || format!("{} results", run.results.len()))?;
    ensure(run.summary.accuracy == 100.0, || {
        format!("accuracy {}", run.summary.accuracy)
    })?;
    let dir = std::env::temp_dir().join(format!("chemagent-acceptance-{}", std::process::id()));
    write_reports(&run, &dir).map_err(|e| e.to_string())?;
    let file = std::fs::File::open(dir.join("summary.csv")).map_err(|e| e.to_string())?;
    let rows = read_summary(file).map_err(|e| e.to_string())?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(rows.len() == 1 && rows[0].accuracy == 100.0, || {
        format!("summary rows {rows:?}")
    })?;
    Ok(format!(
        "accuracy {:.1} on {} questions, reports written",
        run.summary.accuracy,
        run.results.len()
    ))
}

/// Randomized scoring cases whose verdict is fixed by how they are built.
fn scoring_properties() -> Result<String, String> {
    const PAIRS: [(&str, &str); 3] = [("Yes", "No"), ("High", "Low"), ("True", "False")];
    const FILLER: [&str; 8] = ["the", "molecule", "is", "predicted", "value", "so", "about", "result"];
    let mut rng = StdRng::seed_from_u64(20240601);
    let filler = |rng: &mut StdRng| -> String {
        (0..rng.gen_range(0..5))
            .map(|_| FILLER[rng.gen_range(0..FILLER.len())])
            .collect::<Vec<_>>()
            .join(" ")
    };
    let money = |v: i64, places: u32| {
        let scale = 10i64.pow(places);
        let sign = if v < 0 { "-" } else { "" };
        format!(
            "{sign}{}.{:0width$}",
            v.abs() / scale,
            v.abs() % scale,
            width = places as usize
        )
    };
    for case in 0..1000 {
        let (gold, answer, kind, want): (String, Option<String>, AnswerKind, bool) = match case % 7 {
            0 => {
                let (g, _) = PAIRS[rng.gen_range(0..3)];
                (g.into(), None, AnswerKind::Qualitative, false)
            }
            1 => {
                let (g, _) = PAIRS[rng.gen_range(0..3)];
                let word = if rng.gen() { g.to_uppercase() } else { g.to_lowercase() };
                (
                    g.into(),
                    Some(format!("{word}, {}", filler(&mut rng))),
                    AnswerKind::Qualitative,
                    true,
                )
            }
            2 => {
                let (g, c) = PAIRS[rng.gen_range(0..3)];
                let a = format!("{} {c} {}, not {g}", filler(&mut rng), filler(&mut rng));
                (g.into(), Some(a), AnswerKind::Qualitative, false)
            }
            3 => {
                let (g, _) = PAIRS[rng.gen_range(0..3)];
                let a = format!("{} {}ish", filler(&mut rng), g.to_lowercase());
                (g.into(), Some(a), AnswerKind::Qualitative, false)
            }
            4 => {
                let cents = rng.gen_range(-99_999i64..99_999);
                let near = money(cents * 10 + rng.gen_range(-4..=4), 3);
                let a = format!("{near} {}", filler(&mut rng));
                (money(cents, 2), Some(a), AnswerKind::Quantitative, true)
            }
            5 => {
                let cents = rng.gen_range(-99_999i64..99_999);
                let off = rng.gen_range(6i64..1000) * if rng.gen() { 1 } else { -1 };
                let far = money(cents * 10 + off, 3);
                let a = format!("{} {far} then {}", filler(&mut rng), money(cents, 2));
                (money(cents, 2), Some(a), AnswerKind::Quantitative, false)
            }
            _ => {
                let cents = rng.gen_range(-99_999i64..99_999);
                (money(cents, 2), Some(filler(&mut rng)), AnswerKind::Quantitative, false)
            }
        };
        let got = score_answer(answer.as_deref(), &gold, kind);
        ensure(got == want, || {
            format!("case {case}: {answer:?} against {gold} scored {got}, want {want}")
        })?;
    }
    Ok("1000 cases agree with their constructed verdicts".into())
}

/// Accuracy is binomial with mean 100(1-p) and standard deviation
/// 100·sqrt(p(1-p)/n); for p = 0.1 and n = 500 the ±4 band is three
/// standard deviations.
fn noisy_oracle() -> Result<String, String> {
    let r = registry();
    let set = generate(&r, SetName::Qualitative, &molecules(), 1).map_err(|e| e.to_string())?;
    let run = oracle_run(&r, &set, 0.1);
    let acc = run.summary.accuracy;
    ensure((acc - 90.0).abs() <= 4.0, || format!("accuracy {acc:.1}"))?;
    Ok(format!("accuracy {acc:.1} with flip probability 0.1"))
}

fn molkit_oracles() -> Result<String, String> {
    let mols = support::corpus();
    ensure(mols.len() >= 200, || format!("corpus has {} molecules", mols.len()))?;
    for m in &mols {
        let written = write_smiles(m);
        let back = parse_smiles(&written).map_err(|e| format!("{} -> {written}: {e}", m.source_text()))?;
        ensure(support::isomorphic(m, &back), || {
            format!("{} -> {written} changed the graph", m.source_text())
        })?;
    }
    let patterns = support::small_shipped_patterns();
    let small: Vec<Molecule> = mols.iter().filter(|m| m.atom_count() <= 8).cloned().collect();
    let mut compared = 0;
    for p in &patterns {
        for m in &small {
            let got: BTreeSet<Vec<usize>> = match_pattern(p, m).mappings.into_iter().collect();
            ensure(got == support::oracle_mappings(p, m), || {
                format!("pattern {} on {}", p.source_text(), m.source_text())
            })?;
            compared += 1;
        }
    }
    Ok(format!(
        "{} round trips; {} patterns x {} molecules match the brute-force oracle ({compared} pairs)",
        mols.len(),
        patterns.len(),
        small.len()
    ))
}

#[derive(serde::Deserialize)]
struct Row {
    smiles: String,
    alt_smiles: String,
    mol_weight: f64,
    logp: f64,
    tpsa: f64,
    qed: f64,
}

fn reference_values() -> Result<String, String> {
    let engine = DescriptorEngine::embedded();
    let rows: Vec<Row> = csv::Reader::from_reader(REFERENCE.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for row in &rows {
        let m = parse_smiles(&row.smiles).map_err(|e| format!("{}: {e}", row.smiles))?;
        let checks = [
            (
                "MW",
                engine.mol_weight(&m).map_err(|e| e.to_string())?,
                row.mol_weight,
                0.01,
            ),
            (
                "LogP",
                engine.crippen_logp(&m).map_err(|e| e.to_string())?,
                row.logp,
                0.01,
            ),
            ("TPSA", engine.tpsa(&m).value, row.tpsa, 0.01),
            ("QED", engine.qed(&m).map_err(|e| e.to_string())?, row.qed, 0.02),
        ];
        for (name, got, want, tol) in checks {
            ensure((got - want).abs() <= tol, || {
                format!("{} {name}: {got:.4} vs {want:.4}", row.smiles)
            })?;
        }
        let alt = parse_smiles(&row.alt_smiles).map_err(|e| format!("{}: {e}", row.alt_smiles))?;
        let (a, b) = (engine.sa_score(&m), engine.sa_score(&alt));
        ensure((1.0..=10.0).contains(&a), || format!("{} SA {a}", row.smiles))?;
        ensure((a - b).abs() < 1e-9, || {
            format!("{} vs {}: SA {a} != {b}", row.smiles, row.alt_smiles)
        })?;
    }
    Ok(format!(
        "{} molecules within tolerance; SA in range and spelling-invariant",
        rows.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 7] = [
        ("reference-table-values", table_values, Duration::from_secs(1)),
        ("question-set-sizes", set_sizes_and_partition, Duration::from_secs(5)),
        ("oracle-closure", oracle_closure, Duration::from_secs(120)),
        ("scoring-properties", scoring_properties, Duration::from_secs(5)),
        ("noisy-oracle", noisy_oracle, Duration::from_secs(60)),
        ("smiles-and-smarts-oracles", molkit_oracles, Duration::from_secs(120)),
        ("descriptor-reference-values", reference_values, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = started.elapsed();
        let result = result.and_then(|detail| {
            ensure(elapsed <= budget, || format!("took {elapsed:.2?}, budget {budget:?}")).map(|_| detail)
        });
        match result {
            Ok(detail) => println!("PASS {name} ({:.2} s): {detail}", elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({:.2} s): {why}", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
