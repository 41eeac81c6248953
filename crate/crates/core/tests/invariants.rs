//! Randomised invariance checks on small degrees.

mod common;

use std::sync::OnceLock;

use holcensus::actions::{bracoid_from_subgroup, brace_from_regular, ybe_solution};
use holcensus::classify::{aut_stab_order, classify_degree, stab_respecting_iso};
use holcensus::counts::{build_report_row, COLUMN_NAMES};
use holcensus::transitive::{enumerate_transitive_classes, SearchBudget, TransitiveClassRecord};
use holcensus::{groups_of_order, HolomorphContext, Permutation};
use proptest::prelude::*;

struct Fixture {
    ctx: HolomorphContext,
    records: Vec<TransitiveClassRecord>,
}

fn fixtures() -> &'static Vec<Fixture> {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        [4, 6, 8]
            .into_iter()
            .flat_map(|n| groups_of_order(n).unwrap())
            .map(|g| {
                let ctx = HolomorphContext::build(&g).unwrap();
                let records = enumerate_transitive_classes(&ctx, &SearchBudget::default()).unwrap();
                Fixture { ctx, records }
            })
            .collect()
    })
}

fn pick(seed: (usize, usize, usize)) -> (&'static Fixture, &'static TransitiveClassRecord, &'static Permutation) {
    let f = &fixtures()[seed.0 % fixtures().len()];
    let r = &f.records[seed.1 % f.records.len()];
    let a = &f.ctx.hol().elements()[seed.2 % f.ctx.hol().order()];
    (f, r, a)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugating_a_record_keeps_its_class(seed in any::<(usize, usize, usize)>()) {
        let (f, r, a) = pick(seed);
        let moved = r.rep.conjugate(a);
        prop_assert!(moved.is_transitive());
        prop_assert!(stab_respecting_iso(&r.rep, &moved).is_some());
        prop_assert_eq!(aut_stab_order(&moved), aut_stab_order(&r.rep));
        // conjugates by Aut(N) are the same record, found among the others
        // exactly once
        let hits = f
            .records
            .iter()
            .filter(|s| f.ctx.hol().are_conjugate(&s.rep, &moved, Some(f.ctx.aut().elements())).is_some())
            .count();
        prop_assert_eq!(hits, 1);
    }

    #[test]
    fn aut_conjugate_bracoids_are_isomorphic(seed in any::<(usize, usize, usize)>()) {
        let (f, r, _) = pick(seed);
        let aut = f.ctx.aut();
        let alpha = &aut.elements()[seed.2 % aut.order()];
        let moved = r.rep.conjugate(alpha);
        let b1 = bracoid_from_subgroup(&f.ctx, &r.rep, None).unwrap();
        let b2 = bracoid_from_subgroup(&f.ctx, &moved, None).unwrap();
        // α(g ⊙ η) = (α g α^-1) ⊙ α(η)
        for (i, g) in r.rep.elements().iter().enumerate() {
            let j = moved.index_of(&g.conjugate_by(alpha)).unwrap();
            for eta in 0..f.ctx.degree() {
                prop_assert_eq!(alpha.apply(b1.act(i, eta)), b2.act(j, alpha.apply(eta)));
            }
        }
    }

    #[test]
    fn braces_give_ybe_solutions(seed in any::<(usize, usize, usize)>()) {
        let (f, _, _) = pick(seed);
        let regular: Vec<_> = f.records.iter().filter(|r| r.regular).collect();
        let r = regular[seed.1 % regular.len()];
        let b = brace_from_regular(&f.ctx, &r.rep).unwrap();
        let s = ybe_solution(&b).unwrap();
        // non-degenerate solutions are bijections of X × X
        let mut seen = std::collections::HashSet::new();
        for row in &s.r {
            for &pair in row {
                seen.insert(pair);
            }
        }
        prop_assert_eq!(seen.len(), f.ctx.degree() * f.ctx.degree());
    }

    #[test]
    fn relabelling_n_keeps_the_record_profile(n in prop::sample::select(vec![4usize, 6]), idx in 0usize..2, shuffle in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let g = &groups_of_order(n).unwrap()[idx];
        let mut perm: Vec<usize> = (1..n).collect();
        perm.shuffle(&mut rand::rngs::StdRng::seed_from_u64(shuffle));
        perm.insert(0, 0);
        let h = g.relabeled(&perm).unwrap();
        let profile = |g: &holcensus::CayleyGroup| {
            let ctx = HolomorphContext::build(g).unwrap();
            let mut v: Vec<(usize, usize)> = enumerate_transitive_classes(&ctx, &SearchBudget::default())
                .unwrap()
                .iter()
                .map(|r| (r.order, r.class_size))
                .collect();
            v.sort_unstable();
            v
        };
        prop_assert_eq!(profile(g), profile(&h));
    }
}

#[test]
fn classes_do_not_merge_across_stabilizer_orders() {
    let types: Vec<(String, Vec<TransitiveClassRecord>)> = fixtures()
        .iter()
        .filter(|f| f.ctx.degree() == 8)
        .map(|f| (f.ctx.group().name().to_string(), f.records.clone()))
        .collect();
    for class in classify_degree(&types) {
        for m in &class.members {
            let r = &types[m.type_index].1[m.record_index];
            assert_eq!(r.stabilizer.order(), class.stabilizer_order);
            assert_eq!(r.order, class.order);
        }
    }
}

#[test]
fn row_invariants_hold_through_degree_15() {
    for d in 2..=15 {
        let row = build_report_row(d).unwrap();
        row.check_invariants().unwrap();
        assert!(row.is_complete(), "degree {d}: {row}");
        assert_eq!(COLUMN_NAMES.len(), row.cells().len());
    }
}

#[test]
fn prime_degrees_follow_divisor_count() {
    // Hol(C_p) = AGL(1, p); its transitive subgroups are C_p ⋊ H for H ≤ C_{p-1}
    for p in [5usize, 7, 11, 13] {
        let row = build_report_row(p).unwrap();
        let divisors = (1..p).filter(|d| (p - 1) % d == 0).count() as u64;
        assert_eq!(row.sbracoids_total, Some(divisors));
        assert_eq!(row.gal_hgs, Some(1));
        assert_eq!(row.ac_hgs, row.hgs_total);
    }
}

#[test]
fn regular_oracle_matches_engine_for_small_types() {
    for name in ["4.1_C4", "4.2_C2xC2", "6.1_S3", "6.2_C6", "8.3_D4", "8.4_Q8"] {
        let ctx = HolomorphContext::build(&common::group(name)).unwrap();
        let engine = enumerate_transitive_classes(&ctx, &SearchBudget::default())
            .unwrap()
            .iter()
            .filter(|r| r.regular)
            .count();
        assert_eq!(engine, common::regular_class_count(&ctx), "{name}");
    }
}
