//! Explicit structures behind a transitive subgroup `M ≤ Hol(N)`: the skew
//! bracoid it defines, its cocycle decomposition, the skew brace of a
//! regular `M`, the Yang-Baxter map of a brace, and the regular subgroup of
//! `Perm(G/G')` that the Byott translation produces.
//!
//! `N` is written multiplicatively. The additive expression `-x + y` in the
//! usual brace notation is evaluated as `x^-1 · y`, left to right.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::catalog::CayleyGroup;
use crate::error::{Error, Result};
use crate::holomorph::HolomorphContext;
use crate::perm::{PermGroup, Permutation};

fn broken(msg: String) -> Error {
    Error::Consistency(msg)
}

/// `(G, N, ⊙)` with the action stored as a `|G| × |N|` table.
#[derive(Clone, Debug)]
pub struct SkewBracoid {
    pub g: CayleyGroup,
    pub n: CayleyGroup,
    /// `action[g * |N| + η] = g ⊙ η`.
    pub action: Vec<usize>,
    pub reduced: bool,
}

impl SkewBracoid {
    #[inline]
    pub fn act(&self, g: usize, eta: usize) -> usize {
        self.action[g * self.n.order() + eta]
    }

    pub fn degree(&self) -> usize {
        self.n.order()
    }

    /// Checks the action laws, transitivity and
    /// `g ⊙ (μη) = (g ⊙ μ) (g ⊙ 1)^-1 (g ⊙ η)` on every triple.
    pub fn verify(&self) -> Result<()> {
        let (gn, nn) = (self.g.order(), self.n.order());
        for eta in 0..nn {
            if self.act(0, eta) != eta {
                return Err(broken(format!("identity moves {eta}")));
            }
        }
        for a in 0..gn {
            for b in 0..gn {
                let ab = self.g.mul(a, b);
                for eta in 0..nn {
                    if self.act(ab, eta) != self.act(a, self.act(b, eta)) {
                        return Err(broken(format!("(g h) ⊙ η differs from g ⊙ (h ⊙ η) at {a}, {b}, {eta}")));
                    }
                }
            }
        }
        let mut reached = vec![false; nn];
        for g in 0..gn {
            reached[self.act(g, 0)] = true;
        }
        if reached.iter().any(|&r| !r) {
            return Err(broken("action is not transitive".into()));
        }
        for g in 0..gn {
            let shift = self.n.inv(self.act(g, 0));
            for mu in 0..nn {
                let left = self.n.mul(self.act(g, mu), shift);
                for eta in 0..nn {
                    let lhs = self.act(g, self.n.mul(mu, eta));
                    let rhs = self.n.mul(left, self.act(g, eta));
                    if lhs != rhs {
                        return Err(broken(format!("bracoid axiom fails at g = {g}, μ = {mu}, η = {eta}")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The abstract group of `M`, with element `i` equal to `M.elements()[i]`.
pub fn abstract_group(m: &PermGroup, name: &str) -> Result<CayleyGroup> {
    CayleyGroup::from_permutations(name, "", m.degree(), m.generators())
}

/// Extends images of `g`'s distinguished generators to a homomorphism into
/// permutations, failing if the assignment is inconsistent.
fn extend_to_permutations(g: &CayleyGroup, images: &[Permutation]) -> Result<Vec<Permutation>> {
    if images.len() != g.generators().len() {
        return Err(Error::Structural(format!(
            "need {} generator images, got {}",
            g.generators().len(),
            images.len()
        )));
    }
    let degree = images.first().map_or(1, Permutation::degree);
    let mut map: Vec<Option<Permutation>> = vec![None; g.order()];
    map[0] = Some(Permutation::identity(degree));
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        let mx = map[x].clone().expect("queued elements are mapped");
        for (&s, img) in g.generators().iter().zip(images) {
            let y = g.mul(x, s);
            let want = &mx * img;
            match &map[y] {
                None => {
                    map[y] = Some(want);
                    queue.push_back(y);
                }
                Some(have) if *have != want => {
                    return Err(Error::Structural("δ is not a homomorphism".into()));
                }
                _ => {}
            }
        }
    }
    Ok(map.into_iter().map(|m| m.expect("generators generate")).collect())
}

/// The bracoid `g ⊙ η = f^-1(δ(g) f(η) h(δ(g))^-1)`.
///
/// With `delta = None`, `G` is `M` itself and the bracoid is reduced. A
/// caller-supplied `δ` is given by the images of `G`'s distinguished
/// generators and must be a surjective homomorphism onto `M`.
pub fn bracoid_from_subgroup(
    ctx: &HolomorphContext,
    m: &PermGroup,
    delta: Option<(&CayleyGroup, &[Permutation])>,
) -> Result<SkewBracoid> {
    if !m.is_subgroup_of(ctx.hol()) {
        return Err(Error::Structural("M is not contained in Hol(N)".into()));
    }
    let (g, images) = match delta {
        None => (abstract_group(m, "M")?, m.elements().to_vec()),
        Some((g, gen_images)) => {
            let images = extend_to_permutations(g, gen_images)?;
            if images.iter().any(|x| !m.contains(x)) {
                return Err(Error::Structural("δ does not land in M".into()));
            }
            let mut hit: Vec<&Permutation> = images.iter().collect();
            hit.sort();
            hit.dedup();
            if hit.len() != m.order() {
                return Err(Error::Structural("δ is not surjective".into()));
            }
            (g.clone(), images)
        }
    };
    let n = ctx.degree();
    let mut action = Vec::with_capacity(g.order() * n);
    for x in &images {
        for eta in 0..n {
            action.push(ctx.dot_action(x, eta)?);
        }
    }
    Ok(SkewBracoid {
        reduced: g.order() == m.order(),
        g,
        n: ctx.group().clone(),
        action,
    })
}

/// `π(g) = f^-1(g h(g)^-1)` and `γ(g) = h(g)` for `g ∈ M`, indexed like
/// `M.elements()`.
#[derive(Clone, Debug)]
pub struct Cocycle {
    pub pi: Vec<usize>,
    pub gamma: Vec<Permutation>,
}

pub fn cocycle_decompose(ctx: &HolomorphContext, m: &PermGroup) -> Result<Cocycle> {
    let n = ctx.degree();
    let mut pi = Vec::with_capacity(m.order());
    let mut gamma = Vec::with_capacity(m.order());
    for x in m.elements() {
        let h = ctx.h_project(x)?;
        let hinv = h.inverse();
        pi.push((x * &hinv).apply(0));
        let g_images: Vec<usize> = (0..n)
            .map(|mu| (&(&h * ctx.f_embed(mu)) * &hinv).apply(0))
            .collect();
        gamma.push(Permutation::from_images(g_images)?);
    }
    Ok(Cocycle { pi, gamma })
}

impl Cocycle {
    /// Checks that each `γ(g)` is an automorphism, `γ` is a homomorphism,
    /// `π` is a 1-cocycle, `π` is onto exactly when `M` is transitive, and
    /// `g ⊙ μ = π(g) γ(g)(μ)` against `bracoid`.
    pub fn verify(&self, ctx: &HolomorphContext, m: &PermGroup, bracoid: &SkewBracoid) -> Result<()> {
        let ng = ctx.group();
        let n = ng.order();
        for (i, gam) in self.gamma.iter().enumerate() {
            for a in 0..n {
                for b in 0..n {
                    if gam.apply(ng.mul(a, b)) != ng.mul(gam.apply(a), gam.apply(b)) {
                        return Err(broken(format!("γ({i}) is not an endomorphism")));
                    }
                }
            }
            // a permutation of the points is automatically bijective; check
            // that it is one
            let mut seen = vec![false; n];
            for a in 0..n {
                seen[gam.apply(a)] = true;
            }
            if seen.iter().any(|&s| !s) {
                return Err(broken(format!("γ({i}) is not bijective")));
            }
        }
        let elems = m.elements();
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                let k = m.index_of(&(x * y)).expect("M is closed");
                if self.gamma[k] != &self.gamma[i] * &self.gamma[j] {
                    return Err(broken(format!("γ is not a homomorphism at ({i}, {j})")));
                }
                if self.pi[k] != ng.mul(self.pi[i], self.gamma[i].apply(self.pi[j])) {
                    return Err(broken(format!("π is not a 1-cocycle at ({i}, {j})")));
                }
            }
        }
        let mut hit = vec![false; n];
        for &p in &self.pi {
            hit[p] = true;
        }
        if hit.iter().all(|&h| h) != m.is_transitive() {
            return Err(broken("π is onto but M is not transitive, or vice versa".into()));
        }
        for i in 0..elems.len() {
            for mu in 0..n {
                if bracoid.act(i, mu) != ng.mul(self.pi[i], self.gamma[i].apply(mu)) {
                    return Err(broken(format!("g ⊙ μ ≠ π(g) γ(g)(μ) at ({i}, {mu})")));
                }
            }
        }
        Ok(())
    }
}

/// A skew brace on `{0, .., n-1}`; both operations have identity 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkewBrace {
    pub size: usize,
    /// Row-major `add[a][b] = a + b` (the group `N`).
    pub add: Vec<Vec<usize>>,
    /// Row-major `circ[a][b] = a ∘ b`.
    pub circ: Vec<Vec<usize>>,
}

impl SkewBrace {
    fn add_inv(&self, a: usize) -> usize {
        (0..self.size).find(|&b| self.add[a][b] == 0).expect("additive inverse")
    }

    fn circ_inv(&self, a: usize) -> usize {
        (0..self.size).find(|&b| self.circ[a][b] == 0).expect("circle inverse")
    }

    pub fn is_trivial(&self) -> bool {
        self.add == self.circ
    }

    /// Group axioms for `∘` and `a ∘ (b + c) = (a ∘ b) - a + (a ∘ c)`.
    pub fn verify(&self) -> Result<()> {
        let n = self.size;
        for t in [&self.add, &self.circ] {
            for a in 0..n {
                if t[0][a] != a || t[a][0] != a {
                    return Err(broken("0 is not a two-sided identity".into()));
                }
                for b in 0..n {
                    for c in 0..n {
                        if t[t[a][b]][c] != t[a][t[b][c]] {
                            return Err(broken("operation is not associative".into()));
                        }
                    }
                }
            }
            for row in t {
                let mut seen = vec![false; n];
                for &x in row {
                    seen[x] = true;
                }
                if seen.iter().any(|&s| !s) {
                    return Err(broken("operation has no inverses".into()));
                }
            }
        }
        for a in 0..n {
            let minus_a = self.add_inv(a);
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.circ[a][self.add[b][c]];
                    let rhs = self.add[self.add[self.circ[a][b]][minus_a]][self.circ[a][c]];
                    if lhs != rhs {
                        return Err(broken(format!("brace law fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Transports `M`'s product to `N` along `g ↦ g ⊙ 1 = g(0)`.
pub fn brace_from_regular(ctx: &HolomorphContext, m: &PermGroup) -> Result<SkewBrace> {
    let n = ctx.degree();
    if m.order() != n || !m.is_transitive() {
        return Err(Error::Structural(format!(
            "M of order {} is not regular on {n} points",
            m.order()
        )));
    }
    let mut by_point: Vec<Option<&Permutation>> = vec![None; n];
    for x in m.elements() {
        by_point[ctx.dot_action(x, 0)?] = Some(x);
    }
    let by_point: Vec<&Permutation> = by_point.into_iter().map(|x| x.expect("regular")).collect();
    let g = ctx.group();
    let add = (0..n).map(|a| (0..n).map(|b| g.mul(a, b)).collect()).collect();
    let circ = (0..n)
        .map(|a| (0..n).map(|b| (by_point[a] * by_point[b]).apply(0)).collect())
        .collect();
    let brace = SkewBrace { size: n, add, circ };
    brace.verify()?;
    Ok(brace)
}

/// `r(x, y) = (σ_x(y), ρ_y(x))` on a finite set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YbeSolution {
    pub size: usize,
    /// `r[x][y]`.
    pub r: Vec<Vec<(usize, usize)>>,
}

impl YbeSolution {
    pub fn sigma(&self, x: usize, y: usize) -> usize {
        self.r[x][y].0
    }

    pub fn rho(&self, y: usize, x: usize) -> usize {
        self.r[x][y].1
    }

    /// `(r × id)(id × r)(r × id) = (id × r)(r × id)(id × r)` on all triples.
    pub fn check_braid(&self) -> Result<()> {
        let n = self.size;
        let r12 = |(a, b, c): (usize, usize, usize)| {
            let (u, v) = self.r[a][b];
            (u, v, c)
        };
        let r23 = |(a, b, c): (usize, usize, usize)| {
            let (u, v) = self.r[b][c];
            (a, u, v)
        };
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let t = (x, y, z);
                    if r12(r23(r12(t))) != r23(r12(r23(t))) {
                        return Err(broken(format!("braid relation fails at {t:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every `σ_x` and every `ρ_y` is a bijection.
    pub fn check_nondegenerate(&self) -> Result<()> {
        let n = self.size;
        for fixed in 0..n {
            let mut s = vec![false; n];
            let mut r = vec![false; n];
            for other in 0..n {
                s[self.sigma(fixed, other)] = true;
                r[self.rho(fixed, other)] = true;
            }
            if s.iter().chain(&r).any(|&b| !b) {
                return Err(broken(format!("σ_{fixed} or ρ_{fixed} is not bijective")));
            }
        }
        Ok(())
    }
}

/// `σ_x(y) = -x + x∘y`, `ρ_y(x) = (σ_x(y))^{∘-1} ∘ x ∘ y`; verified.
pub fn ybe_solution(b: &SkewBrace) -> Result<YbeSolution> {
    let n = b.size;
    let r = (0..n)
        .map(|x| {
            let minus_x = b.add_inv(x);
            (0..n)
                .map(|y| {
                    let xy = b.circ[x][y];
                    let s = b.add[minus_x][xy];
                    (s, b.circ[b.circ_inv(s)][xy])
                })
                .collect()
        })
        .collect();
    let sol = YbeSolution { size: n, r };
    sol.check_braid()?;
    sol.check_nondegenerate()?;
    Ok(sol)
}

/// Given `σ` with `σ(0) = 0` and `σ G σ^-1 = M` (so `φ(g) = σ g σ^-1` and
/// `β̄(g(0)) = φ(g)(0)` is `σ` itself), returns
/// `α(N) = {σ^-1 λ(η) σ}`, a regular subgroup of `Sym` on `G`'s points that
/// `G` normalizes.
pub fn realize_regular_subgroup(
    ctx: &HolomorphContext,
    m: &PermGroup,
    g: &PermGroup,
    sigma: &Permutation,
) -> Result<PermGroup> {
    if sigma.apply(0) != 0 || sigma.degree() != g.degree() || g.conjugate(sigma) != *m {
        return Err(Error::Structural("σ does not carry G onto M fixing 0".into()));
    }
    let sinv = sigma.inverse();
    let alpha: Vec<Permutation> = (0..ctx.degree())
        .map(|eta| &(&sinv * ctx.f_embed(eta)) * sigma)
        .collect();
    let image = PermGroup::from_element_set(g.degree(), alpha)?;
    if image.order() != ctx.degree() || !image.is_transitive() {
        return Err(broken("α(N) is not regular".into()));
    }
    for x in g.generators() {
        for a in image.generators() {
            if !image.contains(&a.conjugate_by(x)) {
                return Err(broken("G does not normalize α(N)".into()));
            }
        }
    }
    Ok(image)
}

/// JSON form of a brace and its Yang-Baxter map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BraceExport {
    pub carrier_size: usize,
    pub additive: Vec<Vec<usize>>,
    pub circle: Vec<Vec<usize>>,
    pub ybe: Vec<Vec<[usize; 2]>>,
}

impl BraceExport {
    pub fn new(b: &SkewBrace, s: &YbeSolution) -> Self {
        BraceExport {
            carrier_size: b.size,
            additive: b.add.clone(),
            circle: b.circ.clone(),
            ybe: s.r.iter().map(|row| row.iter().map(|&(u, v)| [u, v]).collect()).collect(),
        }
    }
}

/// JSON form of a reduced bracoid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BracoidExport {
    pub degree: usize,
    pub group_order: usize,
    /// Elements of `G` as permutations in cycle notation, in table order.
    pub elements: Vec<String>,
    /// `action[g][η] = g ⊙ η`.
    pub action: Vec<Vec<usize>>,
    /// `π(g)` per element.
    pub cocycle: Vec<usize>,
    /// `γ(g)` per element, as image arrays on `N`.
    pub gamma: Vec<Vec<usize>>,
}

/// All action data for one record, verified.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionsExport {
    pub type_name: String,
    pub bracoid: BracoidExport,
    pub brace: Option<BraceExport>,
}

pub fn export_actions(ctx: &HolomorphContext, m: &PermGroup) -> Result<ActionsExport> {
    let bracoid = bracoid_from_subgroup(ctx, m, None)?;
    bracoid.verify()?;
    let cocycle = cocycle_decompose(ctx, m)?;
    cocycle.verify(ctx, m, &bracoid)?;
    let n = ctx.degree();
    let brace = if m.order() == n {
        let b = brace_from_regular(ctx, m)?;
        let s = ybe_solution(&b)?;
        Some(BraceExport::new(&b, &s))
    } else {
        None
    };
    Ok(ActionsExport {
        type_name: ctx.group().name().to_string(),
        bracoid: BracoidExport {
            degree: n,
            group_order: m.order(),
            elements: m.elements().iter().map(|e| e.to_string()).collect(),
            action: bracoid.action.chunks(n).map(<[usize]>::to_vec).collect(),
            cocycle: cocycle.pi,
            gamma: cocycle.gamma.iter().map(Permutation::images).collect(),
        },
        brace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::groups_of_order;
    use crate::transitive::{enumerate_transitive_classes, SearchBudget};

    fn ctx(name: &str) -> HolomorphContext {
        let n: usize = name.split('.').next().unwrap().parse().unwrap();
        let g = groups_of_order(n).unwrap().into_iter().find(|g| g.name() == name).unwrap();
        HolomorphContext::build(&g).unwrap()
    }

    #[test]
    fn lambda_gives_left_translation() {
        let c = ctx("6.1_S3");
        let b = bracoid_from_subgroup(&c, c.lambda(), None).unwrap();
        b.verify().unwrap();
        assert!(b.reduced);
        for (i, x) in c.lambda().elements().iter().enumerate() {
            let g = x.apply(0);
            for eta in 0..6 {
                assert_eq!(b.act(i, eta), c.group().mul(g, eta));
            }
        }
        let brace = brace_from_regular(&c, c.lambda()).unwrap();
        assert!(brace.is_trivial());
        let co = cocycle_decompose(&c, c.lambda()).unwrap();
        assert!(co.gamma.iter().all(Permutation::is_identity));
        co.verify(&c, c.lambda(), &b).unwrap();
    }

    #[test]
    fn aut_gives_constant_cocycle() {
        let c = ctx("8.5_C2^3");
        let co = cocycle_decompose(&c, c.aut()).unwrap();
        assert!(co.pi.iter().all(|&p| p == 0));
        assert_eq!(co.gamma, c.aut().elements().to_vec());
    }

    #[test]
    fn hol_c4_bracoid() {
        let c = ctx("4.1_C4");
        let b = bracoid_from_subgroup(&c, c.hol(), None).unwrap();
        assert_eq!((b.g.order(), b.degree()), (8, 4));
        b.verify().unwrap();
    }

    #[test]
    fn v4_regular_in_hol_c4() {
        let c = ctx("4.1_C4");
        let recs = enumerate_transitive_classes(&c, &SearchBudget::default()).unwrap();
        let v4 = recs
            .iter()
            .find(|r| r.regular && r.rep.elements().iter().all(|e| e.order() <= 2))
            .unwrap();
        let b = brace_from_regular(&c, &v4.rep).unwrap();
        assert!(!b.is_trivial());
        for a in 0..4 {
            assert_eq!(b.circ[a][a], 0);
        }
        let s = ybe_solution(&b).unwrap();
        assert_eq!(s.size, 4);
    }

    #[test]
    fn flip_and_s3_conjugation() {
        let c = ctx("4.2_C2xC2");
        let s = ybe_solution(&brace_from_regular(&c, c.lambda()).unwrap()).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(s.r[x][y], (y, x));
            }
        }
        let c = ctx("6.1_S3");
        let g = c.group();
        let s = ybe_solution(&brace_from_regular(&c, c.lambda()).unwrap()).unwrap();
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(s.r[x][y], (y, g.mul(g.mul(g.inv(y), x), y)));
            }
        }
    }

    #[test]
    fn non_reduced_bracoid_through_delta() {
        // G = C8 onto λ(C4) through x ↦ λ(1)
        let c = ctx("4.1_C4");
        let c8 = groups_of_order(8).unwrap().remove(0);
        let img = c.f_embed(1).clone();
        let b = bracoid_from_subgroup(&c, c.lambda(), Some((&c8, &[img]))).unwrap();
        assert!(!b.reduced);
        b.verify().unwrap();
        // not a homomorphism: generator of order 8 sent to an element of order 2
        let bad = c.f_embed(2).clone();
        let v = bracoid_from_subgroup(&c, c.lambda(), Some((&c8, &[bad])));
        assert!(matches!(v, Err(Error::Structural(_))));
    }

    #[test]
    fn regular_required_for_braces() {
        let c = ctx("4.1_C4");
        assert!(matches!(brace_from_regular(&c, c.hol()), Err(Error::Structural(_))));
    }

    #[test]
    fn realization_of_hol_c4() {
        let c = ctx("4.1_C4");
        let g = c.hol().clone();
        let alpha = realize_regular_subgroup(&c, c.hol(), &g, &Permutation::identity(4)).unwrap();
        assert_eq!(alpha.order(), 4);
        for x in g.elements() {
            assert_eq!(alpha.conjugate(x), alpha);
        }
        let bad = Permutation::from_cycles(4, "(0 1)").unwrap();
        assert!(realize_regular_subgroup(&c, c.hol(), &g, &bad).is_err());
    }

    #[test]
    fn export_round_trips_through_json() {
        let c = ctx("4.1_C4");
        let e = export_actions(&c, c.lambda()).unwrap();
        let text = serde_json::to_string(&e).unwrap();
        let back: ActionsExport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.bracoid.action, e.bracoid.action);
        assert_eq!(back.brace.unwrap().carrier_size, 4);
    }
}
