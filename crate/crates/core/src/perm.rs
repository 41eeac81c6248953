//! Permutations of `{0, .., n-1}` and permutation groups with materialized
//! element sets.
//!
//! Composition is right-to-left throughout the crate: `(p * q)(x) = p(q(x))`,
//! and conjugation of `h` by `a` is `a * h * a^-1`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 128;

/// Default cap on the number of elements a group may materialize.
pub const DEFAULT_ELEMENT_BUDGET: usize = 500_000;

/// A permutation stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Box<[u8]>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} exceeds {MAX_DEGREE}");
        Permutation {
            images: (0..degree as u8).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(Error::InvalidPermutation(format!(
                "degree {n} exceeds {MAX_DEGREE}"
            )));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u8).collect(),
        })
    }

    /// Parses cycle notation on 0-indexed points, e.g. `(0 1 2)(3 4)`.
    /// Commas between points are accepted; `()` is the identity.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        let bad = |msg: String| Error::InvalidPermutation(format!("{text:?}: {msg}"));
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| bad("expected '('".into()))?;
            let close = open.find(')').ok_or_else(|| bad("missing ')'".into()))?;
            let body = &open[..close];
            rest = open[close + 1..].trim_start();
            let points = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|e| bad(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            for (i, &x) in points.iter().enumerate() {
                if x >= degree {
                    return Err(bad(format!("point {x} out of range for degree {degree}")));
                }
                if seen[x] {
                    return Err(bad(format!("point {x} repeated")));
                }
                seen[x] = true;
                images[x] = points[(i + 1) % points.len()];
            }
        }
        Permutation::from_images(images)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.compose_unchecked(other))
    }

    #[inline]
    fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation {
            images: inv.into_boxed_slice(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `a * self * a^-1`.
    pub fn conjugate_by(&self, a: &Permutation) -> Permutation {
        // (a h a^-1)(a(x)) = a(h(x))
        let mut out = vec![0u8; self.degree()];
        for x in 0..self.degree() {
            out[a.apply(x)] = a.images[self.apply(x)];
        }
        Permutation {
            images: out.into_boxed_slice(),
        }
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            e >>= 1;
        }
        acc
    }

    /// Cycle lengths including fixed points, sorted in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            lens.push(len);
        }
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn order(&self) -> usize {
        self.cycle_type().into_iter().fold(1, lcm)
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Panics on a degree mismatch; use [`Permutation::compose`] for a checked product.
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        self.compose_unchecked(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::from_images(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images()
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Breadth-first product saturation of `generators` inside `Sym(degree)`.
///
/// Returns the elements in lexicographic order of their image arrays, so the
/// identity always comes first.
pub fn closure(degree: usize, generators: &[Permutation], budget: usize) -> Result<Vec<Permutation>> {
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    let gens: Vec<&Permutation> = generators.iter().filter(|g| !g.is_identity()).collect();
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = &x * *g;
            if !seen.contains(&y) {
                if seen.len() >= budget {
                    return Err(Error::Budget {
                        what: "element",
                        limit: budget as u64,
                        reached: seen.len() as u64 + 1,
                    });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// A finitely generated permutation group whose elements are all held in memory.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
}

impl PermGroup {
    pub fn generate(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::generate_with_budget(degree, generators, DEFAULT_ELEMENT_BUDGET)
    }

    pub fn generate_with_budget(
        degree: usize,
        generators: Vec<Permutation>,
        budget: usize,
    ) -> Result<Self> {
        let elements = closure(degree, &generators, budget)?;
        Ok(Self::assemble(degree, generators, elements))
    }

    pub fn trivial(degree: usize) -> Self {
        Self::assemble(degree, Vec::new(), vec![Permutation::identity(degree)])
    }

    /// The full symmetric group; only sensible for small degrees.
    pub fn symmetric(degree: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_images((1..degree).chain([0]).collect())?);
            let mut t: Vec<usize> = (0..degree).collect();
            t.swap(0, 1);
            gens.push(Permutation::from_images(t)?);
        }
        Self::generate(degree, gens)
    }

    /// Builds a group from a set that is claimed to be closed under products.
    /// A small generating set is chosen greedily, and the claim is checked by
    /// regenerating the set from it.
    pub fn from_element_set(degree: usize, elements: Vec<Permutation>) -> Result<Self> {
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        if elements.iter().any(|e| e.degree() != degree) {
            return Err(Error::Structural("element of wrong degree".into()));
        }
        let gens = greedy_generators(degree, &elements);
        let regenerated = closure(degree, &gens, elements.len() + 1).map_err(|_| {
            Error::Structural("element set is not closed under composition".into())
        })?;
        if regenerated != elements {
            return Err(Error::Structural(
                "element set is not closed under composition".into(),
            ));
        }
        Ok(Self::assemble(degree, gens, elements))
    }

    /// Like [`from_element_set`](Self::from_element_set) without the closure check.
    /// The caller guarantees `elements` is a group.
    pub(crate) fn from_closed_unchecked(degree: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        let gens = greedy_generators(degree, &elements);
        Self::assemble(degree, gens, elements)
    }

    fn assemble(degree: usize, generators: Vec<Permutation>, elements: Vec<Permutation>) -> Self {
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        PermGroup {
            degree,
            generators,
            elements,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Elements in lexicographic order of image arrays.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// Same element set.
    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.elements == other.elements
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a * b == b * a))
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut stack = vec![x];
        seen[x] = true;
        while let Some(y) = stack.pop() {
            for g in &self.generators {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    stack.push(z);
                }
            }
        }
        (0..self.degree).filter(|&i| seen[i]).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    pub fn point_stabilizer(&self, x: usize) -> PermGroup {
        let stab: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|e| e.apply(x) == x)
            .cloned()
            .collect();
        debug_assert_eq!(stab.len() * self.orbit(x).len(), self.order());
        PermGroup::from_closed_unchecked(self.degree, stab)
    }

    fn require_subgroup(&self, h: &PermGroup) -> Result<()> {
        if h.degree != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: h.degree,
            });
        }
        if !h.is_subgroup_of(self) {
            return Err(Error::Structural("subgroup not contained in ambient group".into()));
        }
        Ok(())
    }

    /// `{a in self : a h a^-1 = h}`.
    pub fn normalizer(&self, h: &PermGroup) -> Result<PermGroup> {
        self.require_subgroup(h)?;
        let elems: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|a| h.generators.iter().all(|x| h.contains(&x.conjugate_by(a))))
            .cloned()
            .collect();
        Ok(PermGroup::from_closed_unchecked(self.degree, elems))
    }

    /// `{a in self : a x = x a for every generator x of h}`.
    pub fn centralizer(&self, h: &PermGroup) -> Result<PermGroup> {
        self.require_subgroup(h)?;
        let elems: Vec<Permutation> = self
            .elements
            .iter()
            .filter(|a| h.generators.iter().all(|x| &**a * x == x * *a))
            .cloned()
            .collect();
        Ok(PermGroup::from_closed_unchecked(self.degree, elems))
    }

    /// Some `a` with `a h a^-1 = k`, searching `candidates` if given and the
    /// whole of `self` otherwise.
    pub fn are_conjugate(
        &self,
        h: &PermGroup,
        k: &PermGroup,
        candidates: Option<&[Permutation]>,
    ) -> Option<Permutation> {
        if h.order() != k.order() || h.degree != k.degree {
            return None;
        }
        let pool = candidates.unwrap_or(&self.elements);
        pool.iter()
            .find(|a| h.generators.iter().all(|x| k.contains(&x.conjugate_by(a))))
            .cloned()
    }

    /// `a * self * a^-1`.
    pub fn conjugate(&self, a: &Permutation) -> PermGroup {
        let gens = self.generators.iter().map(|g| g.conjugate_by(a)).collect();
        let mut elems: Vec<Permutation> = self.elements.iter().map(|e| e.conjugate_by(a)).collect();
        elems.sort_unstable();
        Self::assemble(self.degree, gens, elems)
    }

    /// Multiset of cycle types, sorted. Invariant under conjugation in `Sym(n)`.
    pub fn cycle_type_profile(&self) -> Vec<(Vec<usize>, usize)> {
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for e in &self.elements {
            *counts.entry(e.cycle_type()).or_default() += 1;
        }
        let mut out: Vec<_> = counts.into_iter().collect();
        out.sort();
        out
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(degree {}, order {}, gens [", self.degree, self.order())?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("])")
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for PermGroup {}

/// Picks generators from a closed, sorted element list: highest element order
/// first, ties broken lexicographically, skipping anything already generated.
pub(crate) fn greedy_generators(degree: usize, elements: &[Permutation]) -> Vec<Permutation> {
    let mut candidates: Vec<(usize, &Permutation)> =
        elements.iter().map(|e| (e.order(), e)).collect();
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    let mut gens = Vec::new();
    let mut current: Vec<Permutation> = vec![Permutation::identity(degree)];
    let mut members: HashSet<Permutation> = current.iter().cloned().collect();
    for (_, c) in candidates {
        if current.len() == elements.len() {
            break;
        }
        if members.contains(c) {
            continue;
        }
        gens.push(c.clone());
        dimino_extend(&mut current, &mut members, &gens);
    }
    gens
}

/// Extends the group `current` (closed under `gens[..len-1]`) by the last
/// generator, adding whole right cosets of the old group at a time.
fn dimino_extend(
    current: &mut Vec<Permutation>,
    members: &mut HashSet<Permutation>,
    gens: &[Permutation],
) {
    let base: Vec<Permutation> = current.clone();
    let mut reps = vec![Permutation::identity(base[0].degree())];
    let mut i = 0;
    while i < reps.len() {
        let r = reps[i].clone();
        i += 1;
        for s in gens {
            let t = &r * s;
            if !members.contains(&t) {
                for h in &base {
                    let x = h * &t;
                    members.insert(x.clone());
                    current.push(x);
                }
                reps.push(t);
            }
        }
    }
}
