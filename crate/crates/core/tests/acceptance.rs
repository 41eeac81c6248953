//! Acceptance run: one line per criterion. A criterion that fails prints
//! FAIL with the offending values. Failures listed in `KNOWN_DEVIATIONS`
//! are reported but do not fail the run; anything else does.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use holcensus::actions::{bracoid_from_subgroup, brace_from_regular, cocycle_decompose, ybe_solution};
use holcensus::counts::{analyze_degree, build_report_row, CountOptions, DegreeReportRow};
use holcensus::degree2pq::{self, build_family};
use holcensus::report::{compute_or_load, result_path};
use holcensus::transitive::{enumerate_transitive_classes, SearchBudget};
use holcensus::{groups_of_order, Error, HolomorphContext};

/// Published rows: degree, then the eight columns.
const TABLE: &[[u64; 9]] = &[
    [2, 1, 1, 1, 1, 1, 1, 1, 1],
    [3, 1, 2, 2, 1, 1, 2, 2, 2],
    [4, 2, 10, 8, 6, 4, 6, 6, 7],
    [5, 1, 3, 3, 1, 1, 3, 3, 3],
    [6, 2, 15, 12, 8, 6, 7, 6, 9],
    [7, 1, 4, 4, 1, 1, 4, 4, 4],
    [8, 5, 348, 148, 190, 47, 74, 47, 147],
    [9, 2, 38, 23, 12, 4, 26, 20, 28],
    [10, 2, 27, 20, 10, 6, 11, 9, 17],
    [11, 1, 4, 4, 1, 1, 4, 4, 4],
    [12, 5, 249, 134, 102, 38, 56, 38, 81],
    [13, 1, 6, 6, 1, 1, 6, 6, 6],
    [14, 2, 32, 24, 12, 6, 14, 12, 19],
    [15, 1, 8, 8, 1, 1, 8, 8, 8],
    [30, 4, 479, 304, 80, 36, 99, 72, 197],
];

/// Criterion number and the exact failure message it is allowed to produce.
const KNOWN_DEVIATIONS: &[(u32, &str)] = &[(
    1,
    "degree 12 ac_sbracoids: published 38, computed 46 (independent count of Aut(N)-classes of subgroups of Aut(N): 46)",
)];

type Outcome = Result<String, String>;

fn expected(degree: u64) -> DegreeReportRow {
    let r = TABLE.iter().find(|r| r[0] == degree).unwrap();
    DegreeReportRow::from_cells(degree as usize, std::array::from_fn(|i| Some(r[i + 1])))
}

fn compare_rows(degrees: &[u64]) -> Vec<String> {
    let mut problems = Vec::new();
    for &d in degrees {
        let got = build_report_row(d as usize).expect("row computes");
        let want = expected(d);
        for (i, (g, w)) in got.cells().iter().zip(want.cells()).enumerate() {
            if *g != w {
                problems.push(format!(
                    "degree {d} {}: published {}, computed {}",
                    holcensus::counts::COLUMN_NAMES[i],
                    w.unwrap(),
                    g.map_or("?".into(), |v| v.to_string())
                ));
            }
        }
    }
    problems
}

fn ac_record_oracle(degree: usize) -> u64 {
    groups_of_order(degree)
        .unwrap()
        .iter()
        .map(|g| common::aut_subgroup_classes(g) as u64)
        .sum()
}

fn criterion_1() -> Outcome {
    let problems = compare_rows(&(2..=13).collect::<Vec<_>>());
    // every almost-classical cell is also checked against a count that does
    // not use the transitive-subgroup search at all
    for d in 2..=13 {
        let row = build_report_row(d).unwrap();
        let oracle = ac_record_oracle(d);
        if row.ac_sbracoids != Some(oracle) {
            return Err(format!("degree {d}: ac_sbracoids {:?} but oracle {oracle}", row.ac_sbracoids));
        }
    }
    if problems.is_empty() {
        Ok("rows 2-13 equal the published table".into())
    } else {
        let oracle = ac_record_oracle(12);
        Err(problems
            .into_iter()
            .map(|p| {
                if p.starts_with("degree 12 ac_sbracoids") {
                    format!("{p} (independent count of Aut(N)-classes of subgroups of Aut(N): {oracle})")
                } else {
                    p
                }
            })
            .collect::<Vec<_>>()
            .join("; "))
    }
}

fn criterion_2() -> Outcome {
    let problems = compare_rows(&[14, 15]);
    if problems.is_empty() {
        Ok("rows 14 and 15 equal the published table".into())
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_3() -> Outcome {
    let want = [(4, 4), (6, 6), (8, 47), (10, 6), (12, 38)];
    let mut seen = Vec::new();
    for (n, count) in want {
        let row = build_report_row(n).unwrap();
        let oracle: usize = groups_of_order(n)
            .unwrap()
            .iter()
            .map(|g| common::regular_class_count(&HolomorphContext::build(g).unwrap()))
            .sum();
        if row.sbraces != Some(count) || oracle as u64 != count {
            return Err(format!("order {n}: engine {:?}, oracle {oracle}, published {count}", row.sbraces));
        }
        seen.push(count.to_string());
    }
    Ok(format!("brace counts {} (engine and brute-force regular subgroups agree)", seen.join(", ")))
}

fn criterion_4() -> Outcome {
    let a = analyze_degree(16, &CountOptions::default()).map_err(|e| e.to_string())?;
    if a.row.types != Some(14) || a.row.cells()[1..].iter().any(Option::is_some) {
        return Err(format!("degree 16 row {}", a.row));
    }
    if !a.notes.iter().any(|n| n.contains("budget")) {
        return Err(format!("no budget note: {:?}", a.notes));
    }
    let c2_4 = groups_of_order(16).unwrap().pop().unwrap();
    let ctx = HolomorphContext::build_with_budget(&c2_4, 400_000).map_err(|e| e.to_string())?;
    match enumerate_transitive_classes(&ctx, &SearchBudget::default()) {
        Err(Error::Budget { reached: 322_560, .. }) => {}
        other => return Err(format!("Hol(C2^4): expected a budget error, got {:?}", other.map(|r| r.len()))),
    }
    let tight = CountOptions {
        budget: SearchBudget {
            nodes: 50,
            ..SearchBudget::default()
        },
        ..CountOptions::default()
    };
    let r = analyze_degree(8, &tight).map_err(|e| e.to_string())?;
    if r.row.hgs_total.is_some() {
        return Err("a 50-node budget still produced degree 8 counts".into());
    }
    Ok(format!("degree 16 -> {} with note {:?}; tight node budget degrades to unknowns", a.row, a.notes[0]))
}

fn records(degree: usize) -> Vec<(HolomorphContext, Vec<holcensus::transitive::TransitiveClassRecord>)> {
    groups_of_order(degree)
        .unwrap()
        .iter()
        .map(|g| {
            let ctx = HolomorphContext::build(g).unwrap();
            let recs = enumerate_transitive_classes(&ctx, &SearchBudget::default()).unwrap();
            (ctx, recs)
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let mut checked = [0usize; 6];
    for d in 2..=8 {
        for (ctx, recs) in records(d) {
            for r in &recs {
                let b = bracoid_from_subgroup(&ctx, &r.rep, None).map_err(|e| e.to_string())?;
                b.verify().map_err(|e| format!("{}: {e}", ctx.group().name()))?;
                let c = cocycle_decompose(&ctx, &r.rep).map_err(|e| e.to_string())?;
                c.verify(&ctx, &r.rep, &b).map_err(|e| format!("{}: {e}", ctx.group().name()))?;
                checked[0] += 1;
                if r.regular {
                    let brace = brace_from_regular(&ctx, &r.rep).map_err(|e| e.to_string())?;
                    ybe_solution(&brace).map_err(|e| e.to_string())?;
                    checked[1] += 1;
                }
            }
            // full-Hol conjugacy of transitive subgroups is Aut(N) conjugacy:
            // every Hol-conjugate of a representative is an Aut-conjugate
            let t = common::Table::new(ctx.hol());
            let aut = ctx.aut().elements();
            for r in &recs {
                let set = r.rep.elements().iter().map(|e| t.index(e)).collect();
                let mut conjugates = std::collections::BTreeSet::new();
                for a in 0..t.len() {
                    conjugates.insert(t.conjugate(&set, a));
                }
                if conjugates.len() != r.class_size {
                    return Err(format!("{}: class size {} vs {}", ctx.group().name(), r.class_size, conjugates.len()));
                }
                for c in &conjugates {
                    let k = t.to_group(c);
                    if ctx.hol().are_conjugate(&r.rep, &k, Some(aut)).is_none() {
                        return Err(format!("{}: Hol-conjugate that is not Aut-conjugate", ctx.group().name()));
                    }
                }
                checked[2] += 1;
            }
            for (i, a) in recs.iter().enumerate() {
                for b in &recs[i + 1..] {
                    if ctx.hol().are_conjugate(&a.rep, &b.rep, Some(aut)).is_some() {
                        return Err(format!("{}: two records are Aut-conjugate", ctx.group().name()));
                    }
                }
            }
        }
    }
    if checked[1] != 1 + 1 + 4 + 1 + 6 + 1 + 47 {
        return Err(format!("expected 61 braces of order <= 8, checked {}", checked[1]));
    }
    for d in 2..=10 {
        let a = analyze_degree(d, &CountOptions::default()).map_err(|e| e.to_string())?;
        for c in &a.details {
            for m in &c.members {
                if m.almost_classical == Some(true) && !m.correspondence.unwrap().is_bijective() {
                    return Err(format!("degree {d}, class {}: AC without BC", c.label));
                }
                checked[3] += 1;
            }
        }
    }
    for d in 2..=15 {
        let a = analyze_degree(d, &CountOptions::default()).map_err(|e| e.to_string())?;
        for t in &a.analyses {
            let hol = t.ctx.hol().order();
            for r in &t.records {
                if r.class_size * r.normalizer_order != hol || r.order != d * r.stabilizer.order() {
                    return Err(format!("degree {d}: orbit-stabilizer fails for a {} record", t.ctx.group().name()));
                }
                checked[4] += 1;
            }
        }
        // analyze_degree refuses fractional Byott terms; recheck the sum
        let total: u64 = a.details.iter().map(|c| c.hgs).sum();
        if Some(total) != a.row.hgs_total {
            return Err(format!("degree {d}: class terms do not add up"));
        }
    }
    for d in 2..=15 {
        for g in groups_of_order(d).unwrap() {
            let ctx = HolomorphContext::build(&g).unwrap();
            if ctx.hol().order() > 400 {
                continue;
            }
            let mut engine: Vec<(usize, usize)> = enumerate_transitive_classes(&ctx, &SearchBudget::default())
                .unwrap()
                .iter()
                .map(|r| (r.order, r.class_size))
                .collect();
            engine.sort_unstable();
            if engine != common::transitive_class_profile(&ctx) {
                return Err(format!("lattice oracle disagrees for Hol({})", g.name()));
            }
            checked[5] += 1;
        }
    }
    Ok(format!(
        "{} bracoids+cocycles, {} braces/YBE, {} trans_conj reps, {} AC=>BC records, {} integrality records, {} holomorphs vs lattice oracle",
        checked[0], checked[1], checked[2], checked[3], checked[4], checked[5]
    ))
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    for (p, q) in [(5usize, 3usize), (7, 3), (13, 3)] {
        let start = Instant::now();
        let family = build_family(p, q).map_err(|e| e.to_string())?;
        let formulas = [
            (p - 1) * (q - 1),
            (p - 1) * q * (q - 1),
            (q - 1) * p * (p - 1),
            p * q * (p - 1) * (q - 1),
            p * (p - 1),
            p * (p - 1),
        ];
        for m in &family.members {
            let got = m.group.automorphism_group().order();
            if got != formulas[m.index - 1] {
                return Err(format!("({p},{q}) N{}: |Aut| = {got}, formula {}", m.index, formulas[m.index - 1]));
            }
        }
        let report = degree2pq::verify(p, q).map_err(|e| format!("({p},{q}): {e}"))?;
        let base = 2 * p * q * (p - 1) * (q - 1);
        for w in &report.four_types {
            let want = match w.name.as_str() {
                "J2" => base * q,
                "J3" => base * p,
                _ => base,
            };
            if w.normalizer_order != Some(want) || w.order != 2 * p * q || w.stabilizer_order != 1 {
                return Err(format!("({p},{q}) {}: {:?}", w.name, w));
            }
        }
        let want_series = if family.k.is_some() { 6 } else { 4 };
        if report.m_series.len() != want_series
            || report.m_series.iter().any(|w| w.order != 2 * p * q * (p - 1) || !w.transitive)
        {
            return Err(format!("({p},{q}): M series {:?}", report.m_series));
        }
        let secs = start.elapsed().as_secs_f64();
        if secs > 120.0 {
            return Err(format!("({p},{q}) took {secs:.1}s"));
        }
        lines.push(format!("({p},{q}) {} members in {secs:.1}s", family.members.len()));
    }
    Ok(lines.join(", "))
}

fn criterion_7() -> Outcome {
    let opts = CountOptions::default();
    let a = analyze_degree(30, &opts).map_err(|e| e.to_string())?;
    if a.row != expected(30) {
        return Err(format!("degree 30 computed {} (notes {:?})", a.row, a.notes));
    }
    Ok(format!("{} with hol budget {}", a.row, opts.budget.hol_order))
}

fn criterion_8() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let opts = CountOptions::default();
    for dir in &dirs {
        for d in 2..=12 {
            compute_or_load(dir.path(), d, &opts).map_err(|e| e.to_string())?;
        }
    }
    for d in 2..=12 {
        let a = std::fs::read(result_path(dirs[0].path(), d)).unwrap();
        let b = std::fs::read(result_path(dirs[1].path(), d)).unwrap();
        if a != b {
            return Err(format!("degree {d} JSON differs between runs"));
        }
    }
    // a warm cache returns the stored file untouched
    let before = std::fs::read(result_path(dirs[0].path(), 8)).unwrap();
    let (_, cached) = compute_or_load(dirs[0].path(), 8, &opts).unwrap();
    let after = std::fs::read(result_path(dirs[0].path(), 8)).unwrap();
    if !cached || before != after {
        return Err("warm cache recomputed or rewrote degree 8".into());
    }
    Ok("two runs over degrees 2-12 wrote byte-identical JSON".into())
}

fn main() {
    // `cargo test -- --list` and filters from other harnesses are ignored
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [(u32, &str, fn() -> Outcome); 8] = [
        (1, "table rows 2-13", criterion_1),
        (2, "table rows 14-15", criterion_2),
        (3, "skew brace counts 4, 6, 8, 10, 12", criterion_3),
        (4, "degree 16 fails on budget", criterion_4),
        (5, "property suites", criterion_5),
        (6, "2pq witnesses", criterion_6),
        (7, "degree 30 row", criterion_7),
        (8, "deterministic artifacts", criterion_8),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id} ({name}): PASS [{secs:.1}s] {detail}"),
            Err(detail) => {
                let known = KNOWN_DEVIATIONS.iter().any(|&(k, msg)| k == id && msg == detail);
                println!(
                    "criterion {id} ({name}): FAIL{} [{secs:.1}s] {detail}",
                    if known { " (known deviation)" } else { "" }
                );
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
