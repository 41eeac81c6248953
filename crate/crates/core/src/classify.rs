//! Grouping transitive subgroups of different holomorphs into classes of
//! permutation-isomorphic groups.
//!
//! For transitive groups, an abstract isomorphism `φ: G1 -> G2` with
//! `φ(Stab_G1(0)) = Stab_G2(0)` is the same thing as a bijection `σ` of the
//! points with `σ(0) = 0` and `σ G1 σ^-1 = G2`. The search below looks for
//! `σ` directly: it assigns images to the generators of `G1` one at a time,
//! and the partial point map forced by the assignments so far is checked for
//! consistency before going deeper.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::catalog::GroupInvariants;
use crate::perm::{closure, lcm, PermGroup, Permutation, DEFAULT_ELEMENT_BUDGET};
use crate::transitive::TransitiveClassRecord;

/// Invariants of the abstract group underlying a permutation group.
pub fn perm_group_invariants(g: &PermGroup) -> GroupInvariants {
    let mut orders: BTreeMap<usize, usize> = BTreeMap::new();
    for e in g.elements() {
        *orders.entry(e.order()).or_default() += 1;
    }
    let center = g
        .elements()
        .iter()
        .filter(|z| g.generators().iter().all(|x| *z * x == x * *z))
        .count();
    GroupInvariants {
        order: g.order(),
        exponent: orders.keys().copied().fold(1, lcm),
        element_orders: orders.into_iter().collect(),
        center_order: center,
        derived_order: derived_subgroup_order(g),
        abelian: g.is_abelian(),
    }
}

fn derived_subgroup_order(g: &PermGroup) -> usize {
    let n = g.degree();
    let gens = g.generators();
    let mut dgens: Vec<Permutation> = Vec::new();
    for a in gens {
        for b in gens {
            let c = &(&a.inverse() * &b.inverse()) * &(a * b);
            if !c.is_identity() {
                dgens.push(c);
            }
        }
    }
    // normal closure of the generator commutators
    let mut d: std::collections::HashSet<Permutation> =
        closure(n, &dgens, DEFAULT_ELEMENT_BUDGET).expect("subgroup of a materialized group").into_iter().collect();
    'grow: loop {
        for x in gens {
            for y in &dgens {
                let c = y.conjugate_by(x);
                if !d.contains(&c) {
                    dgens.push(c);
                    d = closure(n, &dgens, DEFAULT_ELEMENT_BUDGET)
                        .expect("subgroup of a materialized group")
                        .into_iter()
                        .collect();
                    continue 'grow;
                }
            }
        }
        return d.len();
    }
}

/// A point bijection `σ` with `σ(0) = 0` and `σ G1 σ^-1 = G2`; the induced
/// group isomorphism is `g ↦ σ g σ^-1`.
pub fn stab_respecting_iso(g1: &PermGroup, g2: &PermGroup) -> Option<Permutation> {
    if !compatible(g1, g2) {
        return None;
    }
    let mut found = None;
    IsoSearch::new(g1, g2).run(&mut |sigma| {
        found = Some(sigma);
        false
    });
    found
}

/// `|{θ ∈ Aut(G) : θ(G') = G'}|` for `G' = Stab_G(0)`, counted as the point
/// bijections fixing 0 that normalize `G`.
pub fn aut_stab_order(g: &PermGroup) -> usize {
    let mut count = 0;
    IsoSearch::new(g, g).run(&mut |_| {
        count += 1;
        true
    });
    count
}

fn compatible(g1: &PermGroup, g2: &PermGroup) -> bool {
    g1.degree() == g2.degree()
        && g1.order() == g2.order()
        && g1.is_transitive()
        && g2.is_transitive()
        && g1.point_stabilizer(0).order() == g2.point_stabilizer(0).order()
        && g1.cycle_type_profile() == g2.cycle_type_profile()
}

struct IsoSearch<'a> {
    gens: Vec<Permutation>,
    candidates: Vec<Vec<&'a Permutation>>,
    images: Vec<&'a Permutation>,
    sigma: Vec<usize>,
    used: Vec<bool>,
}

const UNSET: usize = usize::MAX;

impl<'a> IsoSearch<'a> {
    fn new(g1: &PermGroup, g2: &'a PermGroup) -> Self {
        let n = g1.degree();
        let gens: Vec<Permutation> = g1.generators().to_vec();
        let candidates = gens
            .iter()
            .map(|x| {
                let ct = x.cycle_type();
                g2.elements().iter().filter(|y| y.cycle_type() == ct).collect()
            })
            .collect();
        let mut sigma = vec![UNSET; n];
        let mut used = vec![false; n];
        if n > 0 {
            sigma[0] = 0;
            used[0] = true;
        }
        IsoSearch {
            gens,
            candidates,
            images: Vec::new(),
            sigma,
            used,
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(Permutation) -> bool) {
        if self.sigma.is_empty() {
            return;
        }
        if self.gens.is_empty() {
            // trivial group on one point
            if self.sigma.len() == 1 {
                visit(Permutation::identity(1));
            }
            return;
        }
        self.descend(visit);
    }

    fn descend(&mut self, visit: &mut dyn FnMut(Permutation) -> bool) -> bool {
        let level = self.images.len();
        if level == self.gens.len() {
            if self.sigma.iter().any(|&s| s == UNSET) {
                return true;
            }
            let sigma = Permutation::from_images(self.sigma.clone()).expect("injective by construction");
            return visit(sigma);
        }
        for ci in 0..self.candidates[level].len() {
            let c = self.candidates[level][ci];
            self.images.push(c);
            let mut trail = Vec::new();
            let ok = self.propagate(&mut trail);
            let keep_going = !ok || self.descend(visit);
            for &x in &trail {
                self.used[self.sigma[x]] = false;
                self.sigma[x] = UNSET;
            }
            self.images.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    /// Enforces `σ(g(x)) = φ(g)(σ(x))` for all assigned generators `g`.
    fn propagate(&mut self, trail: &mut Vec<usize>) -> bool {
        let mut queue: VecDeque<usize> = (0..self.sigma.len()).filter(|&x| self.sigma[x] != UNSET).collect();
        while let Some(x) = queue.pop_front() {
            let sx = self.sigma[x];
            for (g, img) in self.gens.iter().zip(&self.images) {
                let y = g.apply(x);
                let want = img.apply(sx);
                if self.sigma[y] == UNSET {
                    if self.used[want] {
                        return false;
                    }
                    self.sigma[y] = want;
                    self.used[want] = true;
                    trail.push(y);
                    queue.push_back(y);
                } else if self.sigma[y] != want {
                    return false;
                }
            }
        }
        true
    }
}

/// Where a record lives: which type, and its position in that type's list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MemberRef {
    pub type_index: usize,
    pub type_name: String,
    pub record_index: usize,
}

/// Records from one or more holomorphs whose subgroups are permutation isomorphic.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceClass {
    pub degree: usize,
    pub label: String,
    pub order: usize,
    pub stabilizer_order: usize,
    pub members: Vec<MemberRef>,
    pub abstract_invariants: GroupInvariants,
}

/// Partitions the records of one degree. `types[i]` holds the type name and
/// the records of the `i`-th group of that order.
pub fn classify_degree(types: &[(String, Vec<TransitiveClassRecord>)]) -> Vec<EquivalenceClass> {
    type Key = (usize, usize, Vec<(Vec<usize>, usize)>, Vec<(Vec<usize>, usize)>);
    let degree = types
        .iter()
        .flat_map(|(_, r)| r.first())
        .map(|r| r.rep.degree())
        .next()
        .unwrap_or(0);
    let mut buckets: BTreeMap<Key, Vec<(MemberRef, &TransitiveClassRecord)>> = BTreeMap::new();
    for (ti, (name, recs)) in types.iter().enumerate() {
        for (ri, r) in recs.iter().enumerate() {
            let key = (
                r.order,
                r.stabilizer.order(),
                r.rep.cycle_type_profile(),
                r.stabilizer.cycle_type_profile(),
            );
            buckets.entry(key).or_default().push((
                MemberRef {
                    type_index: ti,
                    type_name: name.clone(),
                    record_index: ri,
                },
                r,
            ));
        }
    }

    let mut classes: Vec<(Vec<MemberRef>, &TransitiveClassRecord)> = Vec::new();
    for (_, members) in buckets {
        let mut local: Vec<(Vec<MemberRef>, &TransitiveClassRecord)> = Vec::new();
        for (m, r) in members {
            match local
                .iter_mut()
                .find(|(_, first)| stab_respecting_iso(&first.rep, &r.rep).is_some())
            {
                Some((list, _)) => list.push(m),
                None => local.push((vec![m], r)),
            }
        }
        classes.extend(local);
    }

    classes.sort_by(|a, b| {
        (a.1.order, a.1.stabilizer.order(), &a.0[0]).cmp(&(b.1.order, b.1.stabilizer.order(), &b.0[0]))
    });
    let mut seq: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    classes
        .into_iter()
        .map(|(members, first)| {
            let stab = first.stabilizer.order();
            let s = seq.entry((first.order, stab)).or_default();
            *s += 1;
            EquivalenceClass {
                degree,
                label: format!("{}.{}.{}", first.order, stab, s),
                order: first.order,
                stabilizer_order: stab,
                members,
                abstract_invariants: perm_group_invariants(&first.rep),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::groups_of_order;
    use crate::holomorph::HolomorphContext;
    use crate::transitive::{enumerate_transitive_classes, SearchBudget};

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::from_cycles(n, s).unwrap()
    }

    fn typed_records(n: usize) -> Vec<(String, Vec<TransitiveClassRecord>)> {
        groups_of_order(n)
            .unwrap()
            .iter()
            .map(|g| {
                let ctx = HolomorphContext::build(g).unwrap();
                let recs = enumerate_transitive_classes(&ctx, &SearchBudget::default()).unwrap();
                (g.name().to_string(), recs)
            })
            .collect()
    }

    #[test]
    fn identity_iso() {
        let g = PermGroup::generate(4, vec![p(4, "(0 1 2 3)"), p(4, "(1 3)")]).unwrap();
        assert!(stab_respecting_iso(&g, &g).is_some());
    }

    #[test]
    fn c4_and_v4_are_not_isomorphic() {
        let c4 = PermGroup::generate(4, vec![p(4, "(0 1 2 3)")]).unwrap();
        let v4 = PermGroup::generate(4, vec![p(4, "(0 1)(2 3)"), p(4, "(0 2)(1 3)")]).unwrap();
        assert!(stab_respecting_iso(&c4, &v4).is_none());
    }

    #[test]
    fn stabilizer_order_separates_abstractly_isomorphic_groups() {
        // Hol(C4) is D4 acting on 4 points; λ(D4) is D4 acting regularly
        let c4 = HolomorphContext::build(&groups_of_order(4).unwrap().remove(0)).unwrap();
        let d4 = groups_of_order(8).unwrap().into_iter().find(|g| g.name() == "8.3_D4").unwrap();
        let d4 = HolomorphContext::build(&d4).unwrap();
        assert_eq!(perm_group_invariants(c4.hol()), perm_group_invariants(d4.lambda()));
        assert_eq!(c4.hol().point_stabilizer(0).order(), 2);
        assert_eq!(d4.lambda().point_stabilizer(0).order(), 1);
        assert!(stab_respecting_iso(c4.hol(), d4.lambda()).is_none());
    }

    #[test]
    fn conjugate_groups_are_found_isomorphic() {
        let g = PermGroup::generate(5, vec![p(5, "(0 1 2 3 4)"), p(5, "(1 2 4 3)")]).unwrap();
        let a = p(5, "(1 4)(2 3)");
        let h = g.conjugate(&a);
        let sigma = stab_respecting_iso(&g, &h).unwrap();
        assert_eq!(sigma.apply(0), 0);
        assert_eq!(g.conjugate(&sigma), h);
    }

    #[test]
    fn aut_stab_order_of_s3_on_three_points() {
        let s3 = PermGroup::symmetric(3).unwrap();
        assert_eq!(aut_stab_order(&s3), 2);
        // regular: the constraint is empty, so this is |Aut(C3)|
        let c3 = PermGroup::generate(3, vec![p(3, "(0 1 2)")]).unwrap();
        assert_eq!(aut_stab_order(&c3), 2);
        let v4 = PermGroup::generate(4, vec![p(4, "(0 1)(2 3)"), p(4, "(0 2)(1 3)")]).unwrap();
        assert_eq!(aut_stab_order(&v4), 6);
    }

    #[test]
    fn invariants_of_permutation_groups() {
        let s4 = PermGroup::symmetric(4).unwrap();
        let inv = perm_group_invariants(&s4);
        assert_eq!(inv.derived_order, 12);
        assert_eq!(inv.center_order, 1);
        assert_eq!(inv.exponent, 12);
        let c4 = PermGroup::generate(4, vec![p(4, "(0 1 2 3)")]).unwrap();
        let inv = perm_group_invariants(&c4);
        assert!(inv.abelian);
        assert_eq!(inv.derived_order, 1);
    }

    #[test]
    fn degree_four_classes() {
        let types = typed_records(4);
        let classes = classify_degree(&types);
        let total: usize = classes.iter().map(|c| c.members.len()).sum();
        assert_eq!(total, 8);
        // the cyclic regular subgroup shows up in both holomorphs
        let cyclic = classes
            .iter()
            .find(|c| c.order == 4 && c.abstract_invariants.element_orders.contains(&(4, 2)))
            .unwrap();
        let names: Vec<&str> = cyclic.members.iter().map(|m| m.type_name.as_str()).collect();
        assert_eq!(names, vec!["4.1_C4", "4.2_C2xC2"]);
    }

    #[test]
    fn prime_degree_classes_are_singletons() {
        for p in [5, 7] {
            let classes = classify_degree(&typed_records(p));
            assert_eq!(classes.len(), (1..p).filter(|d| (p - 1) % d == 0).count());
            assert!(classes.iter().all(|c| c.members.len() == 1));
        }
    }

    #[test]
    fn class_members_share_shape_and_labels_are_unique() {
        let types = typed_records(8);
        let classes = classify_degree(&types);
        let mut labels: Vec<&str> = classes.iter().map(|c| c.label.as_str()).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), classes.len());
        for c in &classes {
            for m in &c.members {
                let r = &types[m.type_index].1[m.record_index];
                assert_eq!(r.order, c.order);
                assert_eq!(r.stabilizer.order(), c.stabilizer_order);
            }
        }
    }
}
