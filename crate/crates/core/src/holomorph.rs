//! The holomorph `Hol(N)`, realized as permutations of the elements of `N`.
//!
//! Point `i` is element `i` of the Cayley table, so the identity of `N` is
//! point 0. Every element of `Hol(N)` factors uniquely as `λ(μ) ∘ α` with
//! `α ∈ Aut(N)`, and `μ` is the image of point 0.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::catalog::{CayleyGroup, Side};
use crate::error::{Error, Result};
use crate::perm::{closure, PermGroup, Permutation, DEFAULT_ELEMENT_BUDGET};

/// `Hol(N)` together with `λ(N)`, `ρ(N)` and `Aut(N)`.
#[derive(Clone, Debug)]
pub struct HolomorphContext {
    group: CayleyGroup,
    lambda: PermGroup,
    rho: PermGroup,
    aut: PermGroup,
    hol: PermGroup,
    translations: Vec<Permutation>,
}

impl HolomorphContext {
    /// Builds `Hol(N)` with the default element budget.
    pub fn build(group: &CayleyGroup) -> Result<Self> {
        Self::build_with_budget(group, DEFAULT_ELEMENT_BUDGET)
    }

    pub fn build_with_budget(group: &CayleyGroup, element_budget: usize) -> Result<Self> {
        let n = group.order();
        let aut = group.automorphism_group();
        let expected = n * aut.order();
        if expected > element_budget {
            return Err(Error::Budget {
                what: "element",
                limit: element_budget as u64,
                reached: expected as u64,
            });
        }
        let lambda = group.regular_representation(Side::Left);
        let rho = group.regular_representation(Side::Right);
        let mut gens: Vec<Permutation> = lambda.generators().to_vec();
        gens.extend(aut.generators().iter().cloned());
        let hol = PermGroup::from_closed_unchecked(n, closure(n, &gens, element_budget)?);
        let translations = (0..n).map(|m| group.left_translation(m)).collect();
        let ctx = HolomorphContext {
            group: group.clone(),
            lambda,
            rho,
            aut,
            hol,
            translations,
        };
        ctx.verify()?;
        Ok(ctx)
    }

    fn verify(&self) -> Result<()> {
        let n = self.degree();
        let fail = |msg: &str| Err(Error::Consistency(format!("Hol({}): {msg}", self.group.name())));
        if self.hol.order() != n * self.aut.order() {
            return fail("order is not |N|·|Aut(N)|");
        }
        if self.hol.point_stabilizer(0) != self.aut {
            return fail("point stabilizer differs from Aut(N)");
        }
        if !self.rho.is_subgroup_of(&self.hol) {
            return fail("ρ(N) is not contained in the holomorph");
        }
        for x in self.hol.generators() {
            for l in self.lambda.generators() {
                if !self.lambda.contains(&l.conjugate_by(x)) {
                    return fail("holomorph does not normalize λ(N)");
                }
            }
        }
        // (η,α)(μ,β) = (η α(μ), αβ), on a fixed pseudo-random sample
        let mut rng = StdRng::seed_from_u64(0x4801);
        let auts = self.aut.elements();
        for _ in 0..100 {
            let (eta, mu) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let alpha = &auts[rng.gen_range(0..auts.len())];
            let beta = &auts[rng.gen_range(0..auts.len())];
            let lhs = &(&self.translations[eta] * alpha) * &(&self.translations[mu] * beta);
            let rhs = &self.translations[self.group.mul(eta, alpha.apply(mu))] * &(alpha * beta);
            if lhs != rhs {
                return fail("semidirect multiplication law fails");
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &CayleyGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.group.order()
    }

    pub fn lambda(&self) -> &PermGroup {
        &self.lambda
    }

    pub fn rho(&self) -> &PermGroup {
        &self.rho
    }

    pub fn aut(&self) -> &PermGroup {
        &self.aut
    }

    pub fn hol(&self) -> &PermGroup {
        &self.hol
    }

    /// The embedding `f = λ: N -> Hol(N)`.
    pub fn f_embed(&self, mu: usize) -> &Permutation {
        &self.translations[mu]
    }

    /// `h(x) = λ(x(0))^-1 ∘ x`, the `Aut(N)` part of `x`.
    pub fn h_project(&self, x: &Permutation) -> Result<Permutation> {
        if !self.hol.contains(x) {
            return Err(Error::Structural(format!("{x} is not in Hol({})", self.group.name())));
        }
        Ok(self.project_unchecked(x))
    }

    pub(crate) fn project_unchecked(&self, x: &Permutation) -> Permutation {
        let mu = x.apply(0);
        &self.translations[self.group.inv(mu)] * x
    }

    /// `(x ∘ f(η) ∘ h(x)^-1)(0)`. This always equals `x(η)`; the long form is
    /// kept so callers can check that claim.
    pub fn dot_action(&self, x: &Permutation, eta: usize) -> Result<usize> {
        let h = self.h_project(x)?;
        let y = &(x * &self.translations[eta]) * &h.inverse();
        Ok(y.apply(0))
    }

    /// `(μ, α)` with `x = λ(μ) ∘ α`.
    pub fn decompose(&self, x: &Permutation) -> Result<(usize, Permutation)> {
        Ok((x.apply(0), self.h_project(x)?))
    }

    /// `{λ(h) : h ∈ H}` for a subgroup `H` of `N` given by its elements.
    pub fn embed_subgroup(&self, h: &[usize]) -> PermGroup {
        let elems = h.iter().map(|&m| self.translations[m].clone()).collect();
        PermGroup::from_closed_unchecked(self.degree(), elems)
    }
}
