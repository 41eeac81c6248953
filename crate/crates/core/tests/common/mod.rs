//! Brute-force oracles shared by the integration tests. They work on
//! explicit element lists only and share no search code with the library.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use holcensus::{CayleyGroup, HolomorphContext, PermGroup, Permutation};

/// Multiplication and conjugation tables of a permutation group.
pub struct Table {
    pub elements: Vec<Permutation>,
    pub mul: Vec<usize>,
    pub inv: Vec<usize>,
    index: HashMap<Permutation, usize>,
}

impl Table {
    pub fn new(g: &PermGroup) -> Self {
        let elements = g.elements().to_vec();
        let index: HashMap<Permutation, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        let mut mul = vec![0; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                mul[i * n + j] = index[&(a * b)];
            }
        }
        let inv = elements.iter().map(|e| index[&e.inverse()]).collect();
        Table { elements, mul, inv, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn m(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.len() + b]
    }

    pub fn index(&self, p: &Permutation) -> usize {
        self.index[p]
    }

    /// Smallest subgroup containing `set`.
    pub fn close(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = set.clone();
        out.insert(self.index(&Permutation::identity(self.elements[0].degree())));
        let gens: Vec<usize> = set.iter().copied().collect();
        let mut frontier: Vec<usize> = out.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.m(x, g);
                if out.insert(y) {
                    frontier.push(y);
                }
            }
        }
        out
    }

    /// Every subgroup, grown one generator at a time from the trivial group.
    /// `covered` tracks elements already known to give a seen extension.
    pub fn all_subgroups(&self) -> Vec<BTreeSet<usize>> {
        let trivial = self.close(&BTreeSet::new());
        let mut seen: HashSet<BTreeSet<usize>> = HashSet::from([trivial.clone()]);
        let mut stack = vec![trivial];
        while let Some(h) = stack.pop() {
            let mut covered = h.clone();
            for g in 0..self.len() {
                if covered.contains(&g) {
                    continue;
                }
                let mut s = h.clone();
                s.insert(g);
                let k = self.close(&s);
                // <H, g> = <H, hg> for h in H, so the whole coset is done
                for &x in &h {
                    covered.insert(self.m(x, g));
                }
                if seen.insert(k.clone()) {
                    stack.push(k);
                }
            }
        }
        let mut all: Vec<BTreeSet<usize>> = seen.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    pub fn conjugate(&self, h: &BTreeSet<usize>, a: usize) -> BTreeSet<usize> {
        let ai = self.inv[a];
        h.iter().map(|&x| self.m(self.m(a, x), ai)).collect()
    }

    /// Orbits of `subgroups` under conjugation by `by` (element indices).
    pub fn conjugacy_classes(&self, subgroups: &[BTreeSet<usize>], by: &[usize]) -> Vec<Vec<usize>> {
        let pos: HashMap<&BTreeSet<usize>, usize> = subgroups.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut done = vec![false; subgroups.len()];
        let mut classes = Vec::new();
        for i in 0..subgroups.len() {
            if done[i] {
                continue;
            }
            let mut class: BTreeSet<usize> = BTreeSet::new();
            for &a in by {
                let c = self.conjugate(&subgroups[i], a);
                let j = pos[&c];
                done[j] = true;
                class.insert(j);
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    pub fn to_group(&self, set: &BTreeSet<usize>) -> PermGroup {
        let degree = self.elements[0].degree();
        PermGroup::from_element_set(degree, set.iter().map(|&i| self.elements[i].clone()).collect()).unwrap()
    }
}

pub fn is_transitive_set(t: &Table, set: &BTreeSet<usize>) -> bool {
    let n = t.elements[0].degree();
    let pts: HashSet<usize> = set.iter().map(|&i| t.elements[i].apply(0)).collect();
    pts.len() == n
}

/// `(order, class size)` of every conjugacy class of transitive subgroups
/// of `Hol(N)`, sorted.
pub fn transitive_class_profile(ctx: &HolomorphContext) -> Vec<(usize, usize)> {
    let t = Table::new(ctx.hol());
    let subs: Vec<BTreeSet<usize>> = t.all_subgroups().into_iter().filter(|s| is_transitive_set(&t, s)).collect();
    let all: Vec<usize> = (0..t.len()).collect();
    let mut out: Vec<(usize, usize)> = t
        .conjugacy_classes(&subs, &all)
        .into_iter()
        .map(|c| (subs[c[0]].len(), c.len()))
        .collect();
    out.sort_unstable();
    out
}

/// Number of `Aut(N)`-conjugacy classes of subgroups of `Aut(N)`.
pub fn aut_subgroup_classes(g: &CayleyGroup) -> usize {
    let aut = g.automorphism_group();
    let t = Table::new(&aut);
    let subs = t.all_subgroups();
    let all: Vec<usize> = (0..t.len()).collect();
    t.conjugacy_classes(&subs, &all).len()
}

/// Regular subgroups of `Hol(N)`, found by adding one element `λ(a)α`
/// at a time and discarding any closure with a nontrivial stabilizer.
pub fn regular_subgroups(ctx: &HolomorphContext) -> Vec<BTreeSet<usize>> {
    let t = Table::new(ctx.hol());
    let n = ctx.degree();
    let semiregular = |s: &BTreeSet<usize>| {
        let pts: HashSet<usize> = s.iter().map(|&i| t.elements[i].apply(0)).collect();
        pts.len() == s.len()
    };
    let start = t.close(&BTreeSet::new());
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    let mut found = Vec::new();
    while let Some(h) = stack.pop() {
        if h.len() == n {
            found.push(h);
            continue;
        }
        let covered: HashSet<usize> = h.iter().map(|&i| t.elements[i].apply(0)).collect();
        // the smallest uncovered point must be reached by some new element
        let target = (0..n).find(|p| !covered.contains(p)).unwrap();
        for g in 0..t.len() {
            if t.elements[g].apply(0) != target {
                continue;
            }
            let mut s = h.clone();
            s.insert(g);
            let k = t.close(&s);
            if semiregular(&k) && seen.insert(k.clone()) {
                stack.push(k);
            }
        }
    }
    found.sort();
    found
}

/// Number of `Hol(N)`-conjugacy classes of regular subgroups.
pub fn regular_class_count(ctx: &HolomorphContext) -> usize {
    let t = Table::new(ctx.hol());
    let regs = regular_subgroups(ctx);
    let all: Vec<usize> = (0..t.len()).collect();
    t.conjugacy_classes(&regs, &all).len()
}

pub fn group(name: &str) -> CayleyGroup {
    let n: usize = name.split('.').next().unwrap().parse().unwrap();
    holcensus::groups_of_order(n)
        .unwrap()
        .into_iter()
        .find(|g| g.name() == name)
        .unwrap_or_else(|| panic!("no group {name}"))
}
