//! Abstract finite groups as Cayley tables, and the catalog of groups of a
//! given order.
//!
//! Orders up to 16 come from `data/groups.txt`. Larger orders are supported
//! where the classification is a short list of explicit families: primes,
//! `2p`, `pq` and `2pq`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::degree2pq;
use crate::error::{Error, Result};
use crate::perm::{closure, gcd, lcm, PermGroup, Permutation, DEFAULT_ELEMENT_BUDGET};

const CATALOG_TEXT: &str = include_str!("../data/groups.txt");

/// Largest order served from the data file.
pub const FILE_CATALOG_MAX_ORDER: usize = 16;

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGroup {
    name: String,
    structure: String,
    order: usize,
    table: Vec<u32>,
    inverses: Vec<usize>,
    generators: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Isomorphism invariants used to prefilter isomorphism tests.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub order: usize,
    /// `(element order, count)` pairs, sorted by element order.
    pub element_orders: Vec<(usize, usize)>,
    pub center_order: usize,
    pub derived_order: usize,
    pub abelian: bool,
    pub exponent: usize,
}

impl CayleyGroup {
    /// Builds the group generated by `generators` in `Sym(degree)`. Elements are
    /// indexed in lexicographic order of their image arrays, so the identity is 0.
    pub fn from_permutations(
        name: &str,
        structure: &str,
        degree: usize,
        generators: &[Permutation],
    ) -> Result<Self> {
        let elements = closure(degree, generators, DEFAULT_ELEMENT_BUDGET)?;
        let index: HashMap<&Permutation, usize> =
            elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                table[i * n + j] = index[&(a * b)] as u32;
            }
        }
        let mut gens: Vec<usize> = generators
            .iter()
            .map(|g| index[g])
            .filter(|&g| g != 0)
            .collect();
        gens.dedup();
        Self::from_table_unchecked(name, structure, n, table, gens)
    }

    /// Builds a group from a multiplication rule on `0..order`, checking the
    /// group axioms.
    pub fn from_rule(
        name: &str,
        structure: &str,
        order: usize,
        mul: impl Fn(usize, usize) -> usize,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                let c = mul(a, b);
                if c >= order {
                    return Err(Error::Structural(format!("{name}: product out of range")));
                }
                table[a * order + b] = c as u32;
            }
        }
        Self::from_table(name, structure, order, table, generators)
    }

    /// Validates identity, associativity, inverses and generation.
    pub fn from_table(
        name: &str,
        structure: &str,
        order: usize,
        table: Vec<u32>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        if table.len() != order * order || order == 0 {
            return Err(Error::Structural(format!("{name}: table has wrong shape")));
        }
        let at = |a: usize, b: usize| table[a * order + b] as usize;
        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::Structural(format!("{name}: element 0 is not the identity")));
            }
            let mut seen = vec![false; order];
            for b in 0..order {
                let c = at(a, b);
                if c >= order || seen[c] {
                    return Err(Error::Structural(format!("{name}: row {a} is not a permutation")));
                }
                seen[c] = true;
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::Structural(format!(
                            "{name}: not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let g = Self::from_table_unchecked(name, structure, order, table, generators)?;
        if g.generated_subgroup(&g.generators).len() != order {
            return Err(Error::Structural(format!("{name}: generators do not generate")));
        }
        Ok(g)
    }

    fn from_table_unchecked(
        name: &str,
        structure: &str,
        order: usize,
        table: Vec<u32>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverses[a] = b;
                    break;
                }
            }
            if inverses[a] == usize::MAX {
                return Err(Error::Structural(format!("{name}: element {a} has no inverse")));
            }
        }
        Ok(CayleyGroup {
            name: name.to_string(),
            structure: structure.to_string(),
            order,
            table,
            inverses,
            generators,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structure(&self) -> &str {
        &self.structure
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        (0..self.order).filter(|&i| seen[i]).collect()
    }

    /// Every subgroup, as sorted element lists, ordered by (size, elements).
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut found: HashSet<Vec<usize>> = HashSet::new();
        let trivial = vec![0];
        found.insert(trivial.clone());
        let mut queue = VecDeque::from([trivial]);
        while let Some(h) = queue.pop_front() {
            let mut member = vec![false; self.order];
            for &x in &h {
                member[x] = true;
            }
            for g in 0..self.order {
                if member[g] {
                    continue;
                }
                let mut gens = h.clone();
                gens.push(g);
                let k = self.generated_subgroup(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut out: Vec<Vec<usize>> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|a| self.mul(z, a) == self.mul(a, z)))
            .collect()
    }

    pub fn derived_subgroup(&self) -> Vec<usize> {
        let mut comms = Vec::new();
        for a in 0..self.order {
            for b in 0..self.order {
                let c = self.mul(
                    self.mul(self.inv(a), self.inv(b)),
                    self.mul(a, b),
                );
                comms.push(c);
            }
        }
        comms.sort_unstable();
        comms.dedup();
        self.generated_subgroup(&comms)
    }

    pub fn invariants(&self) -> GroupInvariants {
        let mut orders: BTreeMap<usize, usize> = BTreeMap::new();
        for a in 0..self.order {
            *orders.entry(self.element_order(a)).or_default() += 1;
        }
        let exponent = orders.keys().copied().fold(1, lcm);
        GroupInvariants {
            order: self.order,
            element_orders: orders.into_iter().collect(),
            center_order: self.center().len(),
            derived_order: self.derived_subgroup().len(),
            abelian: self.is_abelian(),
            exponent,
        }
    }

    /// Left translation `x -> g x` as a permutation of the elements.
    pub fn left_translation(&self, g: usize) -> Permutation {
        Permutation::from_images((0..self.order).map(|x| self.mul(g, x)).collect())
            .expect("rows of a group table are permutations")
    }

    /// Right translation `x -> x g`. As a map of groups this is a homomorphism
    /// from the opposite group.
    pub fn right_translation(&self, g: usize) -> Permutation {
        Permutation::from_images((0..self.order).map(|x| self.mul(x, g)).collect())
            .expect("columns of a group table are permutations")
    }

    pub fn regular_representation(&self, side: Side) -> PermGroup {
        let gens: Vec<Permutation> = self
            .generators
            .iter()
            .map(|&g| match side {
                Side::Left => self.left_translation(g),
                Side::Right => self.right_translation(g),
            })
            .collect();
        let elems: Vec<Permutation> = (0..self.order)
            .map(|g| match side {
                Side::Left => self.left_translation(g),
                Side::Right => self.right_translation(g),
            })
            .collect();
        let g = PermGroup::from_closed_unchecked(self.order, elems);
        debug_assert!(gens.iter().all(|x| g.contains(x)));
        g
    }

    /// Same carrier, product `a *' b = b * a`.
    pub fn opposite(&self) -> CayleyGroup {
        let n = self.order;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = self.table[b * n + a];
            }
        }
        CayleyGroup {
            name: format!("{}^opp", self.name),
            structure: format!("({})^opp", self.structure),
            order: n,
            table,
            inverses: self.inverses.clone(),
            generators: self.generators.clone(),
        }
    }

    /// The same group with element `i` renamed to `relabel[i]`; `relabel[0]` must be 0.
    pub fn relabeled(&self, relabel: &[usize]) -> Result<CayleyGroup> {
        let n = self.order;
        if relabel.len() != n || relabel[0] != 0 {
            return Err(Error::Invalid("relabeling must fix the identity".into()));
        }
        Permutation::from_images(relabel.to_vec())?;
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel[a] * n + relabel[b]] = relabel[self.mul(a, b)] as u32;
            }
        }
        let gens = self.generators.iter().map(|&g| relabel[g]).collect();
        Self::from_table(&self.name, &self.structure, n, table, gens)
    }

    /// Extends `images` (one per distinguished generator) to a map on all
    /// elements, or `None` if the assignment is not a homomorphism.
    pub fn extend_homomorphism(&self, target: &CayleyGroup, images: &[usize]) -> Option<Vec<usize>> {
        assert_eq!(images.len(), self.generators.len());
        let mut map = vec![usize::MAX; self.order];
        map[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in self.generators.iter().zip(images) {
                let y = self.mul(x, g);
                let want = target.mul(map[x], img);
                if map[y] == usize::MAX {
                    map[y] = want;
                    queue.push_back(y);
                } else if map[y] != want {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// Every automorphism as an image array, in lexicographic order.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        HomSearch::new(self, self).run(&mut |m| {
            out.push(m.to_vec());
            true
        });
        out.sort();
        out
    }

    /// The automorphism group acting on the element indices; fixes point 0.
    pub fn automorphism_group(&self) -> PermGroup {
        let elems = self
            .automorphisms()
            .into_iter()
            .map(|a| Permutation::from_images(a).expect("automorphisms are bijections"))
            .collect();
        PermGroup::from_closed_unchecked(self.order, elems)
    }

    /// Some isomorphism `self -> other` as an image array.
    pub fn isomorphism_to(&self, other: &CayleyGroup) -> Option<Vec<usize>> {
        if self.order != other.order || self.invariants() != other.invariants() {
            return None;
        }
        let mut found = None;
        HomSearch::new(self, other).run(&mut |m| {
            found = Some(m.to_vec());
            false
        });
        found
    }

    pub fn is_isomorphic_to(&self, other: &CayleyGroup) -> bool {
        self.isomorphism_to(other).is_some()
    }

    /// Direct product; the pair `(a, b)` gets index `a * |other| + b`.
    pub fn direct_product(&self, other: &CayleyGroup, name: &str, structure: &str) -> Result<CayleyGroup> {
        let m = other.order;
        let n = self.order * m;
        let mut gens: Vec<usize> = self.generators.iter().map(|&a| a * m).collect();
        gens.extend(other.generators.iter().copied());
        CayleyGroup::from_rule(
            name,
            structure,
            n,
            |x, y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m),
            gens,
        )
    }

    /// The cyclic group `Z/n`, generated by 1.
    pub fn cyclic(n: usize, name: &str) -> CayleyGroup {
        let gens = if n > 1 { vec![1] } else { Vec::new() };
        CayleyGroup::from_rule(name, &format!("C{n}"), n, |a, b| (a + b) % n, gens)
            .expect("cyclic groups are groups")
    }

    /// Dihedral group of order `2m`: `r^i s^j` has index `i + m j`.
    pub fn dihedral(m: usize, name: &str) -> CayleyGroup {
        CayleyGroup::from_rule(
            name,
            &format!("D{m}"),
            2 * m,
            |x, y| {
                let (i, j) = (x % m, x / m);
                let (k, l) = (y % m, y / m);
                let r = if j == 0 { (i + k) % m } else { (i + m - k) % m };
                r + m * ((j + l) % 2)
            },
            vec![1, m],
        )
        .expect("dihedral groups are groups")
    }

    /// `C_p ⋊ C_q` with `s r s^-1 = r^k`; `r^i s^j` has index `i + p j`.
    pub fn metacyclic(p: usize, q: usize, k: usize, name: &str, structure: &str) -> Result<CayleyGroup> {
        let kpow: Vec<usize> = (0..q).map(|j| mod_pow(k, j, p)).collect();
        CayleyGroup::from_rule(
            name,
            structure,
            p * q,
            |x, y| {
                let (a, b) = (x % p, x / p);
                let (c, d) = (y % p, y / p);
                (a + c * kpow[b]) % p + p * ((b + d) % q)
            },
            vec![1, p],
        )
    }
}

pub(crate) fn mod_pow(base: usize, exp: usize, m: usize) -> usize {
    let mut acc = 1 % m;
    let mut b = base % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Backtracking over images of the distinguished generators of `src` in
/// `dst`. Images are restricted to elements of the same order, and every
/// partial assignment is propagated over the subgroup generated so far; any
/// clash or collision prunes the branch.
struct HomSearch<'a> {
    src: &'a CayleyGroup,
    dst: &'a CayleyGroup,
    src_orders: Vec<usize>,
    dst_orders: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    images: Vec<usize>,
}

impl<'a> HomSearch<'a> {
    fn new(src: &'a CayleyGroup, dst: &'a CayleyGroup) -> Self {
        let src_orders = (0..src.order).map(|a| src.element_order(a)).collect();
        let dst_orders = (0..dst.order).map(|a| dst.element_order(a)).collect();
        let mut map = vec![usize::MAX; src.order];
        let mut used = vec![false; dst.order];
        map[0] = 0;
        used[0] = true;
        HomSearch {
            src,
            dst,
            src_orders,
            dst_orders,
            map,
            used,
            images: Vec::new(),
        }
    }

    /// Calls `visit` with each bijective homomorphism; stops when it returns false.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) {
        if self.src.order != self.dst.order {
            return;
        }
        self.descend(visit);
    }

    fn descend(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let depth = self.images.len();
        if depth == self.src.generators.len() {
            debug_assert!(self.map.iter().all(|&m| m != usize::MAX));
            return visit(&self.map);
        }
        let g = self.src.generators[depth];
        let want = self.src_orders[g];
        for cand in 0..self.dst.order {
            if self.dst_orders[cand] != want {
                continue;
            }
            if self.map[g] != usize::MAX && self.map[g] != cand {
                continue;
            }
            self.images.push(cand);
            let mut trail = Vec::new();
            if self.propagate(&mut trail) && !self.descend(visit) {
                self.undo(&trail);
                self.images.pop();
                return false;
            }
            self.undo(&trail);
            self.images.pop();
        }
        true
    }

    /// Closes the map over the subgroup generated by the assigned generators.
    fn propagate(&mut self, trail: &mut Vec<usize>) -> bool {
        let gens = &self.src.generators[..self.images.len()];
        let mut queue: VecDeque<usize> = (0..self.src.order)
            .filter(|&x| self.map[x] != usize::MAX)
            .collect();
        while let Some(x) = queue.pop_front() {
            for (&g, &img) in gens.iter().zip(&self.images) {
                let y = self.src.mul(x, g);
                let want = self.dst.mul(self.map[x], img);
                if self.map[y] == usize::MAX {
                    if self.used[want] || self.src_orders[y] != self.dst_orders[want] {
                        return false;
                    }
                    self.map[y] = want;
                    self.used[want] = true;
                    trail.push(y);
                    queue.push_back(y);
                } else if self.map[y] != want {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, trail: &[usize]) {
        for &y in trail {
            self.used[self.map[y]] = false;
            self.map[y] = usize::MAX;
        }
    }
}

/// One line of the catalog data file.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub order: usize,
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub structure: String,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<CayleyGroup> {
        let g = CayleyGroup::from_permutations(&self.name, &self.structure, self.degree, &self.generators)?;
        if g.order() != self.order {
            return Err(Error::Structural(format!(
                "{}: generators give order {}, expected {}",
                self.name,
                g.order(),
                self.order
            )));
        }
        Ok(g)
    }
}

/// Parses the line-oriented catalog format (see `docs/catalog-format.md`).
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse {
            line: lineno + 1,
            msg,
        };
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(err(format!("expected 5 '|'-separated fields, found {}", fields.len())));
        }
        let order = fields[1].parse().map_err(|e| err(format!("order: {e}")))?;
        let degree = fields[2].parse().map_err(|e| err(format!("degree: {e}")))?;
        let generators = fields[3]
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| Permutation::from_cycles(degree, s).map_err(|e| err(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        out.push(CatalogEntry {
            name: fields[0].to_string(),
            order,
            degree,
            generators,
            structure: fields[4].to_string(),
        });
    }
    Ok(out)
}

fn builtin_entries() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(|| parse_catalog(CATALOG_TEXT).expect("bundled catalog parses"))
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient.
pub fn totient(n: usize) -> usize {
    (1..=n).filter(|&k| gcd(k, n) == 1).count()
}

/// Whether [`groups_of_order`] can serve `n`.
pub fn is_supported_order(n: usize) -> bool {
    if (1..=FILE_CATALOG_MAX_ORDER).contains(&n) {
        return true;
    }
    let f = prime_factors(n);
    match f.as_slice() {
        [_] => true,
        [2, p] => *p > 2,
        [q, p] if q != p => true,
        [2, q, p] => q != p && *q > 2,
        _ => false,
    }
}

/// One representative of each isomorphism class of groups of order `n`, in
/// catalog order.
pub fn groups_of_order(n: usize) -> Result<Vec<CayleyGroup>> {
    if n == 0 {
        return Err(Error::UnsupportedOrder(n));
    }
    if n <= FILE_CATALOG_MAX_ORDER {
        return builtin_entries()
            .iter()
            .filter(|e| e.order == n)
            .map(CatalogEntry::build)
            .collect();
    }
    let f = prime_factors(n);
    match f.as_slice() {
        [p] => Ok(vec![CayleyGroup::cyclic(*p, &format!("{p}.1_C{p}"))]),
        [2, p] if *p > 2 => Ok(vec![
            CayleyGroup::dihedral(*p, &format!("{n}.1_D{p}")),
            CayleyGroup::cyclic(n, &format!("{n}.2_C{n}")),
        ]),
        [q, p] if q != p => {
            let mut out = Vec::new();
            if (p - 1) % q == 0 {
                let k = degree2pq::least_root_of_order(*q, *p).expect("order q divides p-1");
                out.push(CayleyGroup::metacyclic(
                    *p,
                    *q,
                    k,
                    &format!("{n}.1_C{p}:C{q}"),
                    &format!("C{p} : C{q}"),
                )?);
            }
            out.push(CayleyGroup::cyclic(n, &format!("{n}.{}_C{n}", out.len() + 1)));
            Ok(out)
        }
        [2, q, p] if q != p && *q > 2 => degree2pq::family_groups(*p, *q),
        _ => Err(Error::UnsupportedOrder(n)),
    }
}
