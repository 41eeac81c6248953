//! The groups of order `2pq` (`p > q` odd primes), their automorphisms, and
//! explicit transitive subgroups of their holomorphs.
//!
//! Element encodings (all indices are into the Cayley tables built here):
//!
//! | group | element | index |
//! |---|---|---|
//! | `N1 = C_2pq` | `x^i` | `i` |
//! | `N2 = C_p × D_q` | `x^a r^i s^j` | `a·2q + i + q·j` |
//! | `N3 = C_q × D_p` | `x^a r^i s^j` | `a·2p + i + p·j` |
//! | `N4 = D_pq` | `r^i s^j` | `i + pq·j` |
//! | `N5 = C_2 × (C_p ⋊ C_q)` | `x^a r^i s^j` | `a·pq + i + p·j` |
//! | `N6 = C_p ⋊ C_2q` | `r^i s^j` | `i + p·j` |
//!
//! `N5` has `s r s^-1 = r^k` and `N6` has `s r s^-1 = r^-k`, where `k` is the
//! least residue of multiplicative order `q` mod `p`.

use serde::Serialize;

use crate::catalog::{is_prime, mod_pow, CayleyGroup};
use crate::classify::stab_respecting_iso;
use crate::error::{Error, Result};
use crate::holomorph::HolomorphContext;
use crate::perm::{closure, PermGroup, Permutation};

/// Element budget for the holomorphs built here; `Hol(D_39)` has 73008 elements.
const HOL_ELEMENT_BUDGET: usize = 200_000;

pub(crate) fn mult_order(a: usize, m: usize) -> usize {
    let a = a % m;
    let mut x = a;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
        if k > m {
            return 0;
        }
    }
    k
}

pub(crate) fn primitive_root(p: usize) -> usize {
    (2..p).find(|&g| mult_order(g, p) == p - 1).unwrap_or(1)
}

/// Least `k` in `2..p` of multiplicative order `q` mod `p`.
pub fn least_root_of_order(q: usize, p: usize) -> Option<usize> {
    (2..p).find(|&k| mult_order(k, p) == q)
}

/// The `x mod m1 m2` with `x ≡ a (mod m1)` and `x ≡ b (mod m2)`; moduli coprime.
fn crt(a: usize, m1: usize, b: usize, m2: usize) -> usize {
    (0..m1 * m2)
        .find(|&x| x % m1 == a % m1 && x % m2 == b % m2)
        .expect("coprime moduli")
}

/// Least `t` with `b^t ≡ target (mod m)`.
fn discrete_log(b: usize, target: usize, m: usize) -> Result<usize> {
    (0..m)
        .find(|&t| mod_pow(b, t, m) == target % m)
        .ok_or_else(|| Error::Consistency(format!("{target} is not a power of {b} mod {m}")))
}

/// One of `N1..N6` with the automorphisms named in its description.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub index: usize,
    pub group: CayleyGroup,
    /// Named automorphisms as image arrays on element indices.
    pub automorphisms: Vec<(String, Permutation)>,
    pub expected_aut_order: usize,
    /// Index of the generator written `x`, if the presentation has one.
    pub x: Option<usize>,
    pub r: Option<usize>,
    pub s: Option<usize>,
}

impl FamilyMember {
    pub fn automorphism(&self, name: &str) -> &Permutation {
        &self
            .automorphisms
            .iter()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("N{} has no automorphism named {name}", self.index))
            .1
    }
}

#[derive(Clone, Debug)]
pub struct Degree2pqFamily {
    pub p: usize,
    pub q: usize,
    pub k: Option<usize>,
    pub members: Vec<FamilyMember>,
}

impl Degree2pqFamily {
    pub fn member(&self, i: usize) -> &FamilyMember {
        &self.members[i - 1]
    }
}

fn automorphism_from_images(g: &CayleyGroup, images: &[usize], what: &str) -> Result<Permutation> {
    let map = g
        .extend_homomorphism(g, images)
        .ok_or_else(|| Error::Consistency(format!("{what} is not a homomorphism of {}", g.name())))?;
    Permutation::from_images(map)
        .map_err(|_| Error::Consistency(format!("{what} is not bijective on {}", g.name())))
}

fn check_family_input(p: usize, q: usize) -> Result<()> {
    if !(is_prime(p) && is_prime(q) && q > 2 && p > q) {
        return Err(Error::Invalid(format!(
            "need odd primes p > q, got p = {p}, q = {q}"
        )));
    }
    Ok(())
}

/// Builds the groups of order `2pq` and their named automorphisms, checking
/// each automorphism group's order against its closed form.
pub fn build_family(p: usize, q: usize) -> Result<Degree2pqFamily> {
    check_family_input(p, q)?;
    let n = 2 * p * q;
    let gp = primitive_root(p);
    let gq = primitive_root(q);
    let k = least_root_of_order(q, p);
    let mut members = Vec::new();

    // N1 = C_2pq
    {
        let g = CayleyGroup::cyclic(n, &format!("{n}.1_C{n}"));
        let a_p = crt(gp, p, 1, 2 * q);
        let a_q = crt(gq, q, 1, 2 * p);
        let autos = vec![
            ("sigma".to_string(), automorphism_from_images(&g, &[a_p], "sigma_1")?),
            ("rho".to_string(), automorphism_from_images(&g, &[a_q], "rho_1")?),
        ];
        members.push(FamilyMember {
            index: 1,
            group: g,
            automorphisms: autos,
            expected_aut_order: (p - 1) * (q - 1),
            x: Some(1),
            r: None,
            s: None,
        });
    }

    // N2 = C_p x D_q and N3 = C_q x D_p share a shape
    for (index, a_mod, d_mod) in [(2, p, q), (3, q, p)] {
        let g = CayleyGroup::cyclic(a_mod, "x").direct_product(
            &CayleyGroup::dihedral(d_mod, "d"),
            &format!("{n}.{index}_C{a_mod}xD{d_mod}"),
            &format!("C{a_mod} x D{d_mod}"),
        )?;
        let (x, r, s) = (2 * d_mod, 1, d_mod);
        let a = primitive_root(a_mod);
        let b = primitive_root(d_mod);
        let idx = |ax: usize, i: usize, j: usize| ax * 2 * d_mod + i + d_mod * j;
        let autos = vec![
            ("sigma".to_string(), automorphism_from_images(&g, &[idx(a, 0, 0), r, s], "sigma")?),
            ("phi".to_string(), automorphism_from_images(&g, &[x, r, idx(0, 1, 1)], "phi")?),
            ("psi_b".to_string(), automorphism_from_images(&g, &[x, idx(0, b, 0), s], "psi_b")?),
        ];
        members.push(FamilyMember {
            index,
            group: g,
            automorphisms: autos,
            expected_aut_order: d_mod * (p - 1) * (q - 1),
            x: Some(x),
            r: Some(r),
            s: Some(s),
        });
    }

    // N4 = D_pq
    {
        let m = p * q;
        let g = CayleyGroup::dihedral(m, &format!("{n}.4_D{m}"));
        let b_p = crt(gp, p, 1, q);
        let b_q = crt(1, p, gq, q);
        let autos = vec![
            ("phi".to_string(), automorphism_from_images(&g, &[1, 1 + m], "phi_4")?),
            ("psi_bp".to_string(), automorphism_from_images(&g, &[b_p, m], "psi_bp_4")?),
            ("psi_bq".to_string(), automorphism_from_images(&g, &[b_q, m], "psi_bq_4")?),
        ];
        members.push(FamilyMember {
            index: 4,
            group: g,
            automorphisms: autos,
            expected_aut_order: m * (p - 1) * (q - 1),
            x: None,
            r: Some(1),
            s: Some(m),
        });
    }

    if let Some(k) = k {
        let b = gp;
        // N5 = C_2 x (C_p : C_q)
        let meta = CayleyGroup::metacyclic(p, q, k, "m", "")?;
        let g = CayleyGroup::cyclic(2, "x").direct_product(
            &meta,
            &format!("{n}.5_C2x(C{p}:C{q})"),
            &format!("C2 x (C{p} : C{q})"),
        )?;
        let (x, r, s) = (p * q, 1, p);
        let autos = vec![
            ("phi".to_string(), automorphism_from_images(&g, &[x, r, 1 + p], "phi_5")?),
            ("psi_b".to_string(), automorphism_from_images(&g, &[x, b, s], "psi_b_5")?),
        ];
        members.push(FamilyMember {
            index: 5,
            group: g,
            automorphisms: autos,
            expected_aut_order: p * (p - 1),
            x: Some(x),
            r: Some(r),
            s: Some(s),
        });

        // N6 = C_p : C_2q with s r s^-1 = r^-k
        let g = CayleyGroup::metacyclic(
            p,
            2 * q,
            p - k,
            &format!("{n}.6_C{p}:C{}", 2 * q),
            &format!("C{p} : C{}", 2 * q),
        )?;
        let autos = vec![
            ("phi".to_string(), automorphism_from_images(&g, &[1, 1 + p], "phi_6")?),
            ("psi_b".to_string(), automorphism_from_images(&g, &[b, p], "psi_b_6")?),
        ];
        members.push(FamilyMember {
            index: 6,
            group: g,
            automorphisms: autos,
            expected_aut_order: p * (p - 1),
            x: None,
            r: Some(1),
            s: Some(p),
        });
    }

    for m in &members {
        let gens: Vec<Permutation> = m.automorphisms.iter().map(|(_, a)| a.clone()).collect();
        let generated = closure(n, &gens, HOL_ELEMENT_BUDGET)?.len();
        let full = m.group.automorphism_group().order();
        if generated != m.expected_aut_order || full != m.expected_aut_order {
            return Err(Error::Consistency(format!(
                "|Aut(N{})|: named generators give {generated}, search gives {full}, expected {}",
                m.index, m.expected_aut_order
            )));
        }
    }
    Ok(Degree2pqFamily { p, q, k, members })
}

/// The catalog entries for order `2pq`.
pub fn family_groups(p: usize, q: usize) -> Result<Vec<CayleyGroup>> {
    check_family_input(p, q)?;
    Ok(build_family(p, q)?.members.into_iter().map(|m| m.group).collect())
}

/// A named subgroup of `Hol(N_i)` together with what was checked about it.
#[derive(Clone, Debug)]
pub struct Witness {
    pub name: String,
    pub host: usize,
    pub group: PermGroup,
    pub normalizer_order: Option<usize>,
}

/// Summary line for reports.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessSummary {
    pub name: String,
    pub host: String,
    pub order: usize,
    pub stabilizer_order: usize,
    pub transitive: bool,
    pub normalizer_order: Option<usize>,
    pub generators: Vec<String>,
}

impl Witness {
    pub fn summary(&self, family: &Degree2pqFamily) -> WitnessSummary {
        WitnessSummary {
            name: self.name.clone(),
            host: family.member(self.host).group.name().to_string(),
            order: self.group.order(),
            stabilizer_order: self.group.point_stabilizer(0).order(),
            transitive: self.group.is_transitive(),
            normalizer_order: self.normalizer_order,
            generators: self.group.generators().iter().map(|g| g.to_string()).collect(),
        }
    }
}

/// Holomorphs of every family member, built once.
pub struct FamilyHolomorphs {
    pub contexts: Vec<HolomorphContext>,
}

impl FamilyHolomorphs {
    pub fn build(family: &Degree2pqFamily) -> Result<Self> {
        let contexts = family
            .members
            .iter()
            .map(|m| HolomorphContext::build_with_budget(&m.group, HOL_ELEMENT_BUDGET))
            .collect::<Result<Vec<_>>>()?;
        Ok(FamilyHolomorphs { contexts })
    }

    pub fn get(&self, i: usize) -> &HolomorphContext {
        &self.contexts[i - 1]
    }
}

fn consistency(msg: String) -> Error {
    Error::Consistency(msg)
}

/// `ψ^t` where `ψ` is the named automorphism and `ψ^t` sends `r` to `r^target`.
fn psi_power(
    member: &FamilyMember,
    name: &str,
    base: usize,
    modulus: usize,
    target: usize,
) -> Result<Permutation> {
    let t = discrete_log(base, target, modulus)?;
    let psi = member.automorphism(name).pow(t as i64);
    let r = member.r.expect("member has r");
    let want = member.group.pow(r, target % modulus);
    if psi.apply(r) != want {
        return Err(consistency(format!(
            "{name}^{t} does not send r to r^{target} in N{}",
            member.index
        )));
    }
    Ok(psi)
}

fn psi_minus_one(family: &Degree2pqFamily, i: usize) -> Result<Permutation> {
    let (p, q) = (family.p, family.q);
    let m = family.member(i);
    match i {
        2 => psi_power(m, "psi_b", primitive_root(q), q, q - 1),
        3 => psi_power(m, "psi_b", primitive_root(p), p, p - 1),
        4 => {
            let half_p = m.automorphism("psi_bp").pow(((p - 1) / 2) as i64);
            let half_q = m.automorphism("psi_bq").pow(((q - 1) / 2) as i64);
            let psi = &half_p * &half_q;
            let r = m.r.unwrap();
            if psi.apply(r) != m.group.inv(r) {
                return Err(consistency("psi_-1 does not invert r in N4".into()));
            }
            Ok(psi)
        }
        _ => Err(Error::Invalid(format!("no psi_-1 for N{i}"))),
    }
}

fn generate(ctx: &HolomorphContext, gens: Vec<Permutation>) -> Result<PermGroup> {
    for g in &gens {
        if !ctx.hol().contains(g) {
            return Err(consistency(format!("{g} is not in Hol({})", ctx.group().name())));
        }
    }
    PermGroup::generate_with_budget(ctx.degree(), gens, HOL_ELEMENT_BUDGET)
}

/// `λ(μ) ∘ α`, the holomorph element written `(μ, α)`.
fn pair(ctx: &HolomorphContext, mu: usize, alpha: &Permutation) -> Permutation {
    ctx.f_embed(mu) * alpha
}

/// `M_2, M_3, M_4` (regular, cyclic) and `J_2 ≅ C_p × D_q`, `J_3 ≅ C_q × D_p`
/// (regular in `Hol(D_pq)`), each with its normalizer order checked.
pub fn witness_four_types(family: &Degree2pqFamily, hols: &FamilyHolomorphs) -> Result<Vec<Witness>> {
    let (p, q) = (family.p, family.q);
    let n = 2 * p * q;
    let base = 2 * p * q * (p - 1) * (q - 1);
    let mut out = Vec::new();

    for i in [2, 3] {
        let m = family.member(i);
        let ctx = hols.get(i);
        let psi = psi_minus_one(family, i)?;
        let gens = vec![
            ctx.f_embed(m.x.unwrap()).clone(),
            ctx.f_embed(m.r.unwrap()).clone(),
            pair(ctx, m.s.unwrap(), &psi),
        ];
        out.push((format!("M{i}"), i, generate(ctx, gens)?, base));
    }
    {
        let m = family.member(4);
        let ctx = hols.get(4);
        let psi = psi_minus_one(family, 4)?;
        let gens = vec![ctx.f_embed(m.r.unwrap()).clone(), pair(ctx, m.s.unwrap(), &psi)];
        out.push(("M4".to_string(), 4, generate(ctx, gens)?, base));

        let c_psi = m.automorphism("psi_bp").pow(((p - 1) / 2) as i64);
        let d_psi = m.automorphism("psi_bq").pow(((q - 1) / 2) as i64);
        let r = m.r.unwrap();
        let (c, d) = (c_psi.apply(r), d_psi.apply(r));
        if c % p != p - 1 || c % q != 1 || d % p != 1 || d % q != q - 1 {
            return Err(consistency(format!("c = {c}, d = {d} fail their congruences")));
        }
        let j2 = vec![ctx.f_embed(r).clone(), pair(ctx, m.s.unwrap(), &c_psi)];
        let j3 = vec![ctx.f_embed(r).clone(), pair(ctx, m.s.unwrap(), &d_psi)];
        out.push(("J2".to_string(), 4, generate(ctx, j2)?, base * q));
        out.push(("J3".to_string(), 4, generate(ctx, j3)?, base * p));
    }

    let mut witnesses = Vec::new();
    for (name, host, group, expected_norm) in out {
        let ctx = hols.get(host);
        if group.order() != n || !group.is_transitive() {
            return Err(consistency(format!("{name} is not regular (order {})", group.order())));
        }
        let abstract_g = CayleyGroup::from_permutations(&name, "", n, group.generators())?;
        let expected_type = match name.as_str() {
            "J2" => family.member(2).group.clone(),
            "J3" => family.member(3).group.clone(),
            _ => family.member(1).group.clone(),
        };
        if !abstract_g.is_isomorphic_to(&expected_type) {
            return Err(consistency(format!(
                "{name} is not isomorphic to {}",
                expected_type.structure()
            )));
        }
        let norm = ctx.hol().normalizer(&group)?.order();
        if norm != expected_norm {
            return Err(consistency(format!(
                "{name}: normalizer has order {norm}, expected {expected_norm}"
            )));
        }
        witnesses.push(Witness {
            name,
            host,
            group,
            normalizer_order: Some(norm),
        });
    }
    Ok(witnesses)
}

/// `M_1 .. M_6` (or `M_1 .. M_4`), transitive of order `2pq(p-1)` with the
/// stated point stabilizers, and pairwise permutation isomorphic.
pub fn witness_m_series(family: &Degree2pqFamily, hols: &FamilyHolomorphs) -> Result<Vec<Witness>> {
    let (p, q) = (family.p, family.q);
    let n = 2 * p * q;
    let mut series: Vec<(usize, PermGroup, Permutation)> = Vec::new();

    let m1 = family.member(1);
    let ctx = hols.get(1);
    let sigma1 = m1.automorphism("sigma").clone();
    series.push((1, generate(ctx, vec![ctx.f_embed(1).clone(), sigma1.clone()])?, sigma1));

    let m2 = family.member(2);
    let ctx = hols.get(2);
    let sigma2 = m2.automorphism("sigma").clone();
    let gens = vec![
        ctx.f_embed(m2.x.unwrap()).clone(),
        ctx.f_embed(m2.r.unwrap()).clone(),
        pair(ctx, m2.s.unwrap(), &psi_minus_one(family, 2)?),
        sigma2.clone(),
    ];
    series.push((2, generate(ctx, gens)?, sigma2));

    let m3 = family.member(3);
    let ctx = hols.get(3);
    let psi3 = m3.automorphism("psi_b").clone();
    let gens = vec![
        ctx.f_embed(m3.x.unwrap()).clone(),
        pair(ctx, m3.r.unwrap(), &m3.automorphism("phi").pow(-2)),
        ctx.f_embed(m3.s.unwrap()).clone(),
        psi3.clone(),
    ];
    series.push((3, generate(ctx, gens)?, psi3));

    let m4 = family.member(4);
    let ctx = hols.get(4);
    let psi4 = m4.automorphism("psi_bp").clone();
    let gens = vec![
        pair(ctx, m4.r.unwrap(), &m4.automorphism("phi").pow(-2)),
        ctx.f_embed(m4.s.unwrap()).clone(),
        psi4.clone(),
    ];
    series.push((4, generate(ctx, gens)?, psi4));

    if let Some(k) = family.k {
        let b = primitive_root(p);
        let k_inv = (1..p).find(|&t| t * k % p == 1).expect("k is a unit");
        for i in [5, 6] {
            let m = family.member(i);
            let ctx = hols.get(i);
            let psi_b = m.automorphism("psi_b").clone();
            let psi_k_inv = psi_power(m, "psi_b", b, p, k_inv)?;
            let mut gens = Vec::new();
            if let Some(x) = m.x {
                gens.push(ctx.f_embed(x).clone());
            }
            gens.push(ctx.f_embed(m.s.unwrap()).clone());
            gens.push(pair(ctx, m.r.unwrap(), &psi_k_inv));
            gens.push(psi_b.clone());
            series.push((i, generate(ctx, gens)?, psi_b));
        }
    }

    let expected = n * (p - 1);
    for (i, g, stab_gen) in &series {
        if g.order() != expected || !g.is_transitive() {
            return Err(consistency(format!(
                "M{i}: order {} (expected {expected}), transitive = {}",
                g.order(),
                g.is_transitive()
            )));
        }
        let stab = g.point_stabilizer(0);
        let cyclic = PermGroup::generate(n, vec![stab_gen.clone()])?;
        if stab != cyclic {
            return Err(consistency(format!("M{i}: stabilizer is not generated by the named automorphism")));
        }
    }
    for a in 0..series.len() {
        for b in a + 1..series.len() {
            if stab_respecting_iso(&series[a].1, &series[b].1).is_none() {
                return Err(consistency(format!(
                    "M{} and M{} are not permutation isomorphic",
                    series[a].0, series[b].0
                )));
            }
        }
    }
    Ok(series
        .into_iter()
        .map(|(i, g, _)| Witness {
            name: format!("M{i}"),
            host: i,
            group: g,
            normalizer_order: None,
        })
        .collect())
}

/// `C_2q × (C_p ⋊ C_{p-1})`, the abstract type of the `M` series.
pub fn m_series_model(p: usize, q: usize) -> Result<CayleyGroup> {
    let affine = CayleyGroup::metacyclic(p, p - 1, primitive_root(p), "aff", "")?;
    CayleyGroup::cyclic(2 * q, "c").direct_product(
        &affine,
        "model",
        &format!("C{} x (C{p} : C{})", 2 * q, p - 1),
    )
}

/// Everything `verify-2pq` reports.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub p: usize,
    pub q: usize,
    pub k: Option<usize>,
    pub automorphism_orders: Vec<(String, usize)>,
    pub four_types: Vec<WitnessSummary>,
    pub m_series: Vec<WitnessSummary>,
    pub m1_matches_model: bool,
}

pub fn verify(p: usize, q: usize) -> Result<VerificationReport> {
    let family = build_family(p, q)?;
    let hols = FamilyHolomorphs::build(&family)?;
    let four = witness_four_types(&family, &hols)?;
    let series = witness_m_series(&family, &hols)?;
    let m1 = &series[0].group;
    let m1_abstract = CayleyGroup::from_permutations("M1", "", 2 * p * q, m1.generators())?;
    let m1_matches_model = m1_abstract.is_isomorphic_to(&m_series_model(p, q)?);
    if !m1_matches_model {
        return Err(consistency("M1 is not isomorphic to C_2q x (C_p : C_(p-1))".into()));
    }
    Ok(VerificationReport {
        p,
        q,
        k: family.k,
        automorphism_orders: family
            .members
            .iter()
            .map(|m| (m.group.name().to_string(), m.expected_aut_order))
            .collect(),
        four_types: four.iter().map(|w| w.summary(&family)).collect(),
        m_series: series.iter().map(|w| w.summary(&family)).collect(),
        m1_matches_model,
    })
}
