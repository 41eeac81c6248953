//! Transitive subgroups of `Hol(N)` up to conjugacy in `Hol(N)`.
//!
//! The search walks the whole subgroup lattice from the bottom. Each
//! conjugacy class found so far is extended by one element at a time, and
//! every conjugate of every class is kept in a hash map keyed by its element
//! bitset, so a newly generated subgroup is recognised with one lookup.
//! Extensions by elements in the same `N(H)`-orbit of `H`-cosets give
//! conjugate subgroups and are skipped.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holomorph::HolomorphContext;
use crate::perm::{PermGroup, Permutation};

/// Default cap on the order of a holomorph we are willing to search. The
/// multiplication table needs `2·|Hol|²` bytes.
pub const DEFAULT_HOL_BUDGET: usize = 5000;
/// Default cap on subgroup closures performed per type.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
/// Default wall-clock allowance per type, in seconds.
pub const DEFAULT_TIME_BUDGET_SECS: u64 = 1800;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub hol_order: usize,
    pub nodes: u64,
    pub seconds: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            hol_order: DEFAULT_HOL_BUDGET,
            nodes: DEFAULT_NODE_BUDGET,
            seconds: DEFAULT_TIME_BUDGET_SECS,
        }
    }
}

/// One `Hol(N)`-conjugacy class of transitive subgroups.
#[derive(Clone, Debug)]
pub struct TransitiveClassRecord {
    pub type_name: String,
    pub rep: PermGroup,
    pub order: usize,
    pub stabilizer: PermGroup,
    pub class_size: usize,
    pub normalizer_order: usize,
    pub regular: bool,
}

/// `Hol(N)` with elements numbered in sorted order and a full product table.
pub struct HolTable {
    degree: usize,
    elements: Vec<Permutation>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    point0: Vec<u8>,
}

impl HolTable {
    /// Tabulates products in `Hol(N)`. An element `x = λ(μ)α` is determined by
    /// `x(0)` together with the images of the distinguished generators of `N`,
    /// so products are looked up by those few points only.
    pub fn new(ctx: &HolomorphContext) -> Result<Self> {
        let hol = ctx.hol();
        let m = hol.order();
        if m > u16::MAX as usize {
            return Err(Error::Budget {
                what: "holomorph order",
                limit: u16::MAX as u64,
                reached: m as u64,
            });
        }
        let n = hol.degree();
        let mut points = vec![0usize];
        points.extend(ctx.group().generators().iter().copied());
        let elements = hol.elements().to_vec();
        let key = |img: &mut dyn Iterator<Item = usize>| img.fold(0u64, |k, y| k * n as u64 + y as u64);
        let lookup: HashMap<u64, u16> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (key(&mut points.iter().map(|&p| e.apply(p))), i as u16))
            .collect();
        if lookup.len() != m {
            return Err(Error::Consistency("holomorph elements are not determined by generator images".into()));
        }
        let mut mul = vec![0u16; m * m];
        let mut inv = vec![0u16; m];
        for (i, x) in elements.iter().enumerate() {
            for (j, y) in elements.iter().enumerate() {
                let k = lookup[&key(&mut points.iter().map(|&p| x.apply(y.apply(p))))];
                mul[i * m + j] = k;
                if k == 0 {
                    inv[i] = j as u16;
                }
            }
        }
        let point0 = elements.iter().map(|e| e.apply(0) as u8).collect();
        Ok(HolTable {
            degree: n,
            elements,
            mul,
            inv,
            point0,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.elements.len() + b] as usize
    }

    #[inline]
    fn conj(&self, a: usize, x: usize) -> usize {
        self.mul(self.mul(a, x), self.inv[a] as usize)
    }

    fn to_group(&self, elems: &[u16]) -> PermGroup {
        let perms = elems.iter().map(|&i| self.elements[i as usize].clone()).collect();
        PermGroup::from_closed_unchecked(self.degree, perms)
    }
}

type Bits = Vec<u64>;

fn bits_of(m: usize, elems: &[u16]) -> Bits {
    let mut b = vec![0u64; m.div_ceil(64)];
    for &e in elems {
        b[e as usize / 64] |= 1 << (e % 64);
    }
    b
}

#[inline]
fn has(bits: &Bits, e: usize) -> bool {
    bits[e / 64] >> (e % 64) & 1 == 1
}

/// One conjugacy class of subgroups of `Hol(N)`.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// Sorted element indices of the representative.
    pub elements: Vec<u16>,
    pub generators: Vec<u16>,
    pub normalizer_order: usize,
    pub class_size: usize,
    pub transitive: bool,
}

/// Every conjugacy class of subgroups of a holomorph.
pub struct SubgroupLattice {
    pub classes: Vec<SubgroupClass>,
    pub nodes: u64,
}

struct Deadline {
    #[cfg(not(target_arch = "wasm32"))]
    end: Option<std::time::Instant>,
    #[cfg_attr(target_arch = "wasm32", allow(dead_code))]
    seconds: u64,
}

impl Deadline {
    fn new(seconds: u64) -> Self {
        Deadline {
            #[cfg(not(target_arch = "wasm32"))]
            end: std::time::Instant::now().checked_add(std::time::Duration::from_secs(seconds)),
            seconds,
        }
    }

    fn check(&self) -> Result<()> {
        #[cfg(not(target_arch = "wasm32"))]
        if let Some(end) = self.end {
            if std::time::Instant::now() > end {
                return Err(Error::Budget {
                    what: "time (seconds)",
                    limit: self.seconds,
                    reached: self.seconds + 1,
                });
            }
        }
        Ok(())
    }
}

/// Runs the lattice search on `table`.
pub fn subgroup_lattice(table: &HolTable, budget: &SearchBudget) -> Result<SubgroupLattice> {
    let m = table.order();
    let n = table.degree;
    let deadline = Deadline::new(budget.seconds);
    let mut nodes = 0u64;
    let mut classes: Vec<SubgroupClass> = Vec::new();
    let mut known: HashMap<Bits, usize> = HashMap::new();

    let register = |elems: Vec<u16>,
                        gens: Vec<u16>,
                        classes: &mut Vec<SubgroupClass>,
                        known: &mut HashMap<Bits, usize>|
     -> usize {
        let id = classes.len();
        let norm = normalizer(table, &bits_of(m, &elems), &gens);
        // Left cosets a·N(K) give the distinct conjugates a K a^-1.
        let mut covered = vec![false; m];
        let mut best: Option<(Vec<u16>, usize)> = None;
        let mut class_size = 0;
        for a in 0..m {
            if covered[a] {
                continue;
            }
            for &x in &norm {
                covered[table.mul(a, x as usize)] = true;
            }
            class_size += 1;
            let mut conj: Vec<u16> = elems.iter().map(|&k| table.conj(a, k as usize) as u16).collect();
            conj.sort_unstable();
            known.insert(bits_of(m, &conj), id);
            if best.as_ref().map_or(true, |(b, _)| conj < *b) {
                best = Some((conj, a));
            }
        }
        debug_assert_eq!(class_size * norm.len(), m);
        let (rep, a) = best.expect("at least one conjugate");
        let generators = gens.iter().map(|&g| table.conj(a, g as usize) as u16).collect();
        let mut hit = vec![false; n];
        for &x in &rep {
            hit[table.point0[x as usize] as usize] = true;
        }
        classes.push(SubgroupClass {
            elements: rep,
            generators,
            normalizer_order: norm.len(),
            class_size,
            transitive: hit.iter().all(|&h| h),
        });
        id
    };

    register(vec![0], Vec::new(), &mut classes, &mut known);
    let mut queue = VecDeque::from([0usize]);
    while let Some(cid) = queue.pop_front() {
        let h = classes[cid].elements.clone();
        let h_gens = classes[cid].generators.clone();
        let h_bits = bits_of(m, &h);
        let norm = normalizer(table, &h_bits, &h_gens);
        let mut marked = vec![false; m];
        for &x in &h {
            marked[x as usize] = true;
        }
        for g in 0..m {
            if marked[g] {
                continue;
            }
            // every N(H)-conjugate c of g, and the cosets Hc and cH, give
            // subgroups conjugate to <H, g>
            for &a in &norm {
                let c = table.conj(a as usize, g);
                if marked[c] {
                    continue;
                }
                for &x in &h {
                    marked[table.mul(x as usize, c)] = true;
                    marked[table.mul(c, x as usize)] = true;
                }
            }
            nodes += 1;
            if nodes > budget.nodes {
                return Err(Error::Budget {
                    what: "search node",
                    limit: budget.nodes,
                    reached: nodes,
                });
            }
            if nodes % 256 == 0 {
                deadline.check()?;
            }
            let k = extend(table, &h, &h_bits, &h_gens, g);
            let k_bits = bits_of(m, &k);
            if !known.contains_key(&k_bits) {
                let mut gens = h_gens.clone();
                gens.push(g as u16);
                let id = register(k, gens, &mut classes, &mut known);
                queue.push_back(id);
            }
        }
    }
    Ok(SubgroupLattice { classes, nodes })
}

/// `{a : a x a^-1 ∈ K for every generator x}`.
fn normalizer(table: &HolTable, k_bits: &Bits, gens: &[u16]) -> Vec<u16> {
    (0..table.order())
        .filter(|&a| gens.iter().all(|&x| has(k_bits, table.conj(a, x as usize))))
        .map(|a| a as u16)
        .collect()
}

/// `<H, g>` by Dimino's coset method: whole right cosets `H t` are added at
/// a time. Returns sorted element indices.
fn extend(table: &HolTable, h: &[u16], h_bits: &Bits, h_gens: &[u16], g: usize) -> Vec<u16> {
    let m = table.order();
    let mut members = h_bits.clone();
    let mut elems: Vec<u16> = h.to_vec();
    let mut gens: Vec<usize> = h_gens.iter().map(|&x| x as usize).collect();
    gens.push(g);
    let mut reps = vec![0usize];
    let mut i = 0;
    while i < reps.len() {
        let r = reps[i];
        i += 1;
        for &s in &gens {
            let t = table.mul(r, s);
            if !has(&members, t) {
                for &x in h {
                    let y = table.mul(x as usize, t);
                    members[y / 64] |= 1 << (y % 64);
                    elems.push(y as u16);
                }
                reps.push(t);
            }
        }
    }
    debug_assert!(elems.len() <= m);
    elems.sort_unstable();
    elems
}

/// All transitive subgroups of `Hol(N)` up to conjugacy, ordered by
/// (order, sorted element list).
pub fn enumerate_transitive_classes(
    ctx: &HolomorphContext,
    budget: &SearchBudget,
) -> Result<Vec<TransitiveClassRecord>> {
    let hol_order = ctx.hol().order();
    if hol_order > budget.hol_order {
        return Err(Error::Budget {
            what: "holomorph order",
            limit: budget.hol_order as u64,
            reached: hol_order as u64,
        });
    }
    let table = HolTable::new(ctx)?;
    let lattice = subgroup_lattice(&table, budget)?;
    Ok(records_from_lattice(ctx, &table, &lattice))
}

pub(crate) fn records_from_lattice(
    ctx: &HolomorphContext,
    table: &HolTable,
    lattice: &SubgroupLattice,
) -> Vec<TransitiveClassRecord> {
    let n = ctx.degree();
    let mut chosen: Vec<&SubgroupClass> = lattice.classes.iter().filter(|c| c.transitive).collect();
    chosen.sort_by(|a, b| {
        a.elements
            .len()
            .cmp(&b.elements.len())
            .then_with(|| a.elements.cmp(&b.elements))
    });
    chosen
        .into_iter()
        .map(|c| {
            let rep = table.to_group(&c.elements);
            let stabilizer = rep.point_stabilizer(0);
            TransitiveClassRecord {
                type_name: ctx.group().name().to_string(),
                order: rep.order(),
                regular: rep.order() == n,
                stabilizer,
                rep,
                class_size: c.class_size,
                normalizer_order: c.normalizer_order,
            }
        })
        .collect()
}

/// The records whose representative is regular.
pub fn regular_classes(records: &[TransitiveClassRecord]) -> Vec<&TransitiveClassRecord> {
    records.iter().filter(|r| r.regular).collect()
}
