//! From transitive subgroups to the census columns.
//!
//! For a class of permutation-isomorphic groups `G` (stabilizer `G'`), each
//! `Hol(N)`-conjugacy class of size `c` inside it accounts for
//! `|Aut(G, G')| · c / |Aut(N)|` Hopf-Galois structures of type `N`. Each
//! such term is an integer, and a fractional one aborts the row.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::catalog::groups_of_order;
use crate::classify::{aut_stab_order, classify_degree, EquivalenceClass};
use crate::error::{Error, Result};
use crate::holomorph::HolomorphContext;
use crate::perm::{PermGroup, Permutation, DEFAULT_ELEMENT_BUDGET};
use crate::transitive::{enumerate_transitive_classes, SearchBudget, TransitiveClassRecord};

/// One census row. `None` means the value could not be computed within budget.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReportRow {
    pub degree: usize,
    pub types: Option<u64>,
    pub hgs_total: Option<u64>,
    pub sbracoids_total: Option<u64>,
    pub gal_hgs: Option<u64>,
    pub sbraces: Option<u64>,
    pub ac_hgs: Option<u64>,
    pub ac_sbracoids: Option<u64>,
    pub bc_hgs: Option<u64>,
}

pub const COLUMN_NAMES: [&str; 8] = [
    "types",
    "hgs_total",
    "sbracoids_total",
    "gal_hgs",
    "sbraces",
    "ac_hgs",
    "ac_sbracoids",
    "bc_hgs",
];

impl DegreeReportRow {
    pub fn unknown(degree: usize) -> Self {
        DegreeReportRow {
            degree,
            ..Default::default()
        }
    }

    pub fn cells(&self) -> [Option<u64>; 8] {
        [
            self.types,
            self.hgs_total,
            self.sbracoids_total,
            self.gal_hgs,
            self.sbraces,
            self.ac_hgs,
            self.ac_sbracoids,
            self.bc_hgs,
        ]
    }

    pub fn from_cells(degree: usize, c: [Option<u64>; 8]) -> Self {
        DegreeReportRow {
            degree,
            types: c[0],
            hgs_total: c[1],
            sbracoids_total: c[2],
            gal_hgs: c[3],
            sbraces: c[4],
            ac_hgs: c[5],
            ac_sbracoids: c[6],
            bc_hgs: c[7],
        }
    }

    pub fn is_complete(&self) -> bool {
        self.cells().iter().all(Option::is_some)
    }

    /// The inequalities every row satisfies; unknown cells are skipped.
    pub fn check_invariants(&self) -> Result<()> {
        let pairs = [
            ("ac_hgs <= bc_hgs", self.ac_hgs, self.bc_hgs),
            ("ac_sbracoids <= sbracoids_total", self.ac_sbracoids, self.sbracoids_total),
            ("sbraces <= sbracoids_total", self.sbraces, self.sbracoids_total),
            ("gal_hgs <= hgs_total", self.gal_hgs, self.hgs_total),
            ("sbracoids_total <= hgs_total", self.sbracoids_total, self.hgs_total),
        ];
        for (what, a, b) in pairs {
            if let (Some(a), Some(b)) = (a, b) {
                if a > b {
                    return Err(Error::Consistency(format!(
                        "degree {}: {what} fails ({a} > {b})",
                        self.degree
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for DegreeReportRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degree)?;
        for c in self.cells() {
            match c {
                Some(v) => write!(f, ",{v}")?,
                None => f.write_str(",?")?,
            }
        }
        Ok(())
    }
}

/// Whether `rep` contains `ρ(N)`, the centralizer of `λ(N)` in `Sym(N)`.
///
/// Cross-check: conjugating by the inversion map `ι(x) = x^-1` swaps `λ(N)`
/// and `ρ(N)` and commutes with `Aut(N)`, so `ρ(N) ≤ rep` exactly when
/// `ι rep ι^-1 = λ(N) ⋊ Stab_rep(0)`.
pub fn is_almost_classical(rep: &PermGroup, ctx: &HolomorphContext) -> Result<bool> {
    let direct = ctx.rho().generators().iter().all(|r| rep.contains(r));
    let g = ctx.group();
    let iota = Permutation::from_images((0..g.order()).map(|x| g.inv(x)).collect())?;
    let flipped = rep.conjugate(&iota);
    let mut gens = ctx.lambda().generators().to_vec();
    gens.extend(rep.point_stabilizer(0).generators().iter().cloned());
    let split = PermGroup::generate_with_budget(ctx.degree(), gens, DEFAULT_ELEMENT_BUDGET)?;
    let via_complement = flipped == split;
    if direct != via_complement {
        return Err(Error::Consistency(format!(
            "almost-classical tests disagree for {rep:?} in Hol({})",
            g.name()
        )));
    }
    Ok(direct)
}

/// The two counts compared by the bijective-correspondence test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    /// Subgroups of `rep` containing the point stabilizer.
    pub intermediate_fields: usize,
    /// Subgroups `H ≤ N` with `λ(H)` normalized by `rep`.
    pub hopf_subalgebras: usize,
}

impl Correspondence {
    pub fn is_bijective(&self) -> bool {
        self.intermediate_fields == self.hopf_subalgebras
    }
}

/// Smallest block of imprimitivity of the transitive group generated by
/// `gens` containing `seed`.
pub fn minimal_block(degree: usize, gens: &[Permutation], seed: &[usize]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..degree).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for &s in seed.iter().skip(1) {
        let (a, b) = (find(&mut parent, seed[0]), find(&mut parent, s));
        if a != b {
            parent[b] = a;
            pending.push((seed[0], s));
        }
    }
    while let Some((a, b)) = pending.pop() {
        for g in gens {
            let (ga, gb) = (g.apply(a), g.apply(b));
            let (ra, rb) = (find(&mut parent, ga), find(&mut parent, gb));
            if ra != rb {
                parent[rb] = ra;
                pending.push((ga, gb));
            }
        }
    }
    let root = find(&mut parent, seed[0]);
    (0..degree).filter(|&x| find(&mut parent, x) == root).collect()
}

/// Blocks of the transitive group `g` containing point 0, sorted. They are in
/// bijection with the subgroups between `Stab_g(0)` and `g`.
pub fn blocks_containing_zero(g: &PermGroup) -> Vec<Vec<usize>> {
    let n = g.degree();
    let mut found = vec![vec![0]];
    let mut i = 0;
    while i < found.len() {
        let b = found[i].clone();
        i += 1;
        for x in 0..n {
            if b.binary_search(&x).is_ok() {
                continue;
            }
            let mut seed = b.clone();
            seed.push(x);
            let nb = minimal_block(n, g.generators(), &seed);
            if !found.contains(&nb) {
                found.push(nb);
            }
        }
    }
    found.sort();
    found
}

pub fn bijective_correspondence(
    rep: &PermGroup,
    ctx: &HolomorphContext,
    subgroups_of_n: &[Vec<usize>],
) -> Correspondence {
    let g = ctx.group();
    let intermediate_fields = blocks_containing_zero(rep).len();
    let hopf_subalgebras = subgroups_of_n
        .iter()
        .filter(|h| {
            let mut member = vec![false; g.order()];
            for &x in h.iter() {
                member[x] = true;
            }
            rep.generators().iter().all(|x| {
                let back = x.inverse().apply(0);
                // (x λ(h) x^-1)(0) = x(h · x^-1(0))
                h.iter().all(|&e| member[x.apply(g.mul(e, back))])
            })
        })
        .count();
    Correspondence {
        intermediate_fields,
        hopf_subalgebras,
    }
}

/// Which columns to compute.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOptions {
    pub budget: SearchBudget,
    pub skip_ac: bool,
    pub skip_bc: bool,
}

/// One type's holomorph and transitive subgroups.
pub struct TypeAnalysis {
    pub ctx: HolomorphContext,
    pub records: Vec<TransitiveClassRecord>,
    pub aut_order: usize,
}

/// Per-record results.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordDetail {
    pub type_name: String,
    pub record_index: usize,
    pub order: usize,
    pub stabilizer_order: usize,
    pub class_size: usize,
    pub regular: bool,
    pub generators: Vec<String>,
    pub hgs: u64,
    pub almost_classical: Option<bool>,
    pub correspondence: Option<Correspondence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDetail {
    pub label: String,
    pub order: usize,
    pub stabilizer_order: usize,
    pub aut_stab_order: u64,
    pub hgs: u64,
    pub members: Vec<RecordDetail>,
}

/// Summary of one type for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeSummary {
    pub name: String,
    pub structure: String,
    pub aut_order: usize,
    pub hol_order: usize,
    pub transitive_classes: Option<usize>,
}

/// Everything computed for one degree.
pub struct DegreeAnalysis {
    pub row: DegreeReportRow,
    pub types: Vec<TypeSummary>,
    pub analyses: Vec<TypeAnalysis>,
    pub classes: Vec<EquivalenceClass>,
    pub details: Vec<ClassDetail>,
    /// Budget messages explaining unknown cells.
    pub notes: Vec<String>,
}

/// Runs the whole pipeline for one degree. Budget exhaustion produces
/// unknown cells and a note; only consistency failures are errors.
pub fn analyze_degree(degree: usize, opts: &CountOptions) -> Result<DegreeAnalysis> {
    let mut row = DegreeReportRow::unknown(degree);
    let mut notes = Vec::new();
    let unknown = |row: DegreeReportRow, notes: Vec<String>, types: Vec<TypeSummary>| DegreeAnalysis {
        row,
        types,
        analyses: Vec::new(),
        classes: Vec::new(),
        details: Vec::new(),
        notes,
    };
    let groups = match groups_of_order(degree) {
        Ok(g) => g,
        Err(e @ Error::UnsupportedOrder(_)) => {
            notes.push(e.to_string());
            return Ok(unknown(row, notes, Vec::new()));
        }
        Err(e) => return Err(e),
    };
    row.types = Some(groups.len() as u64);

    // Holomorph orders are known from |Aut(N)| alone; refuse the whole row
    // before building anything if one of them is over budget.
    let auts: Vec<usize> = groups.iter().map(|g| g.automorphism_group().order()).collect();
    let mut types: Vec<TypeSummary> = groups
        .iter()
        .zip(&auts)
        .map(|(g, &a)| TypeSummary {
            name: g.name().to_string(),
            structure: g.structure().to_string(),
            aut_order: a,
            hol_order: degree * a,
            transitive_classes: None,
        })
        .collect();
    if let Some(t) = types.iter().find(|t| t.hol_order > opts.budget.hol_order) {
        let e = Error::Budget {
            what: "holomorph order",
            limit: opts.budget.hol_order as u64,
            reached: t.hol_order as u64,
        };
        notes.push(format!("Hol({}): {e}", t.name));
        return Ok(unknown(row, notes, types));
    }

    let mut analyses = Vec::new();
    for (g, t) in groups.iter().zip(types.iter_mut()) {
        let ctx = HolomorphContext::build(g)?;
        match enumerate_transitive_classes(&ctx, &opts.budget) {
            Ok(records) => {
                t.transitive_classes = Some(records.len());
                analyses.push(TypeAnalysis {
                    aut_order: ctx.aut().order(),
                    ctx,
                    records,
                });
            }
            Err(e) if e.is_resource() => {
                notes.push(format!("Hol({}): {e}", g.name()));
                return Ok(unknown(row, notes, types));
            }
            Err(e) => return Err(e),
        }
    }

    let typed: Vec<(String, Vec<TransitiveClassRecord>)> = analyses
        .iter()
        .map(|a| (a.ctx.group().name().to_string(), a.records.clone()))
        .collect();
    let classes = classify_degree(&typed);
    let subgroups: Vec<Vec<Vec<usize>>> = if opts.skip_bc {
        Vec::new()
    } else {
        analyses.iter().map(|a| a.ctx.group().subgroups()).collect()
    };

    let mut totals = [0u64; 8];
    let mut details = Vec::new();
    for class in &classes {
        let first = &class.members[0];
        let aso = aut_stab_order(&analyses[first.type_index].records[first.record_index].rep) as u64;
        let mut members = Vec::new();
        let mut class_hgs = 0;
        for m in &class.members {
            let a = &analyses[m.type_index];
            let r = &a.records[m.record_index];
            let numerator = aso * r.class_size as u64;
            if numerator % a.aut_order as u64 != 0 {
                return Err(Error::Consistency(format!(
                    "degree {degree}, class {}: Byott term {numerator}/{} is not an integer",
                    class.label, a.aut_order
                )));
            }
            let hgs = numerator / a.aut_order as u64;
            let ac = if opts.skip_ac {
                None
            } else {
                Some(is_almost_classical(&r.rep, &a.ctx)?)
            };
            let bc = if opts.skip_bc {
                None
            } else {
                Some(bijective_correspondence(&r.rep, &a.ctx, &subgroups[m.type_index]))
            };
            totals[1] += hgs;
            totals[2] += 1;
            if r.regular {
                totals[3] += hgs;
                totals[4] += 1;
            }
            if ac == Some(true) {
                totals[5] += hgs;
                totals[6] += 1;
            }
            if bc.is_some_and(|c| c.is_bijective()) {
                totals[7] += hgs;
            }
            class_hgs += hgs;
            members.push(RecordDetail {
                type_name: m.type_name.clone(),
                record_index: m.record_index,
                order: r.order,
                stabilizer_order: r.stabilizer.order(),
                class_size: r.class_size,
                regular: r.regular,
                generators: r.rep.generators().iter().map(|g| g.to_string()).collect(),
                hgs,
                almost_classical: ac,
                correspondence: bc,
            });
        }
        details.push(ClassDetail {
            label: class.label.clone(),
            order: class.order,
            stabilizer_order: class.stabilizer_order,
            aut_stab_order: aso,
            hgs: class_hgs,
            members,
        });
    }
    row.hgs_total = Some(totals[1]);
    row.sbracoids_total = Some(totals[2]);
    row.gal_hgs = Some(totals[3]);
    row.sbraces = Some(totals[4]);
    if !opts.skip_ac {
        row.ac_hgs = Some(totals[5]);
        row.ac_sbracoids = Some(totals[6]);
    }
    if !opts.skip_bc {
        row.bc_hgs = Some(totals[7]);
    }
    row.check_invariants()?;
    Ok(DegreeAnalysis {
        row,
        types,
        analyses,
        classes,
        details,
        notes,
    })
}

/// The census row for `degree` with default options.
pub fn build_report_row(degree: usize) -> Result<DegreeReportRow> {
    Ok(analyze_degree(degree, &CountOptions::default())?.row)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::groups_of_order;

    fn named(name: &str) -> HolomorphContext {
        let n: usize = name.split('.').next().unwrap().parse().unwrap();
        let g = groups_of_order(n).unwrap().into_iter().find(|g| g.name() == name).unwrap();
        HolomorphContext::build(&g).unwrap()
    }

    fn row(c: [u64; 8]) -> [Option<u64>; 8] {
        c.map(Some)
    }

    #[test]
    fn small_rows() {
        assert_eq!(build_report_row(2).unwrap().cells(), row([1; 8]));
        assert_eq!(build_report_row(4).unwrap().cells(), row([2, 10, 8, 6, 4, 6, 6, 7]));
        assert_eq!(build_report_row(6).unwrap().cells(), row([2, 15, 12, 8, 6, 7, 6, 9]));
    }

    #[test]
    fn almost_classical_examples() {
        let s3 = named("6.1_S3");
        assert!(is_almost_classical(s3.hol(), &s3).unwrap());
        assert!(!is_almost_classical(s3.lambda(), &s3).unwrap());
        let c5 = named("5.1_C5");
        assert!(is_almost_classical(c5.lambda(), &c5).unwrap());
    }

    #[test]
    fn correspondence_for_prime_cyclic() {
        let c7 = named("7.1_C7");
        let subs = c7.group().subgroups();
        let c = bijective_correspondence(c7.lambda(), &c7, &subs);
        assert_eq!(c, Correspondence { intermediate_fields: 2, hopf_subalgebras: 2 });
        assert!(c.is_bijective());
    }

    #[test]
    fn blocks_match_intermediate_subgroups() {
        // brute force: subgroups between the stabilizer and the group
        let ctx = named("8.3_D4");
        for g in [ctx.hol().clone(), ctx.lambda().clone()] {
            let stab = g.point_stabilizer(0);
            let mut found: Vec<Vec<Permutation>> = vec![stab.elements().to_vec()];
            let mut i = 0;
            while i < found.len() {
                let cur = found[i].clone();
                i += 1;
                for x in g.elements() {
                    if cur.contains(x) {
                        continue;
                    }
                    let mut gens = cur.clone();
                    gens.push(x.clone());
                    let k = crate::perm::closure(8, &gens, 100_000).unwrap();
                    if !found.contains(&k) {
                        found.push(k);
                    }
                }
            }
            assert_eq!(blocks_containing_zero(&g).len(), found.len());
        }
    }

    #[test]
    fn row_invariants_reject_bad_rows() {
        let mut r = DegreeReportRow::from_cells(4, row([2, 10, 8, 6, 4, 6, 6, 7]));
        assert!(r.check_invariants().is_ok());
        r.ac_hgs = Some(9);
        assert!(r.check_invariants().unwrap_err().is_hard());
    }

    #[test]
    fn over_budget_rows_are_unknown() {
        let r = build_report_row(16).unwrap();
        assert_eq!(r.types, Some(14));
        assert!(r.cells()[1..].iter().all(Option::is_none));
        let r = build_report_row(32).unwrap();
        assert!(r.cells().iter().all(Option::is_none));
    }

    #[test]
    fn display_uses_question_marks() {
        let mut r = DegreeReportRow::from_cells(15, row([1, 8, 8, 1, 1, 8, 8, 8]));
        assert_eq!(r.to_string(), "15,1,8,8,1,1,8,8,8");
        r.bc_hgs = None;
        assert_eq!(r.to_string(), "15,1,8,8,1,1,8,8,?");
    }
}
