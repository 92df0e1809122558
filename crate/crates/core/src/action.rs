//! Action of the conformal generators on symbols of linear and bilinear
//! differential operators between density spaces.
//!
//! A linear operator `F_λ → F_μ` is identified with its symbol `P(x, ξ)`; a
//! bilinear one `F_λ ⊗ F_μ → F_ν` with `P(x, ξ, η)`, where `ξ` differentiates
//! the first argument and `η` the second. For the affine generators the
//! action is the cotangent lift plus `δ · div X`. For the inversions the
//! lift acquires second-order corrections (trace and Euler terms) which are
//! written out explicitly below.

use std::fmt;

use crate::conformal::{shifted, Generator, GeneratorKind, InvariantMonomial, Signature, Weight};
use crate::error::{Error, Result};
use crate::poly::{Family, Monomial, SymbolPoly, Variable};
use crate::rational::{from_usize, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearContext {
    pub signature: Signature,
    pub lambda: Weight,
    pub mu: Weight,
}

impl LinearContext {
    pub fn new(signature: Signature, lambda: Weight, mu: Weight) -> Self {
        LinearContext { signature, lambda, mu }
    }

    pub fn dimension(&self) -> usize {
        self.signature.dimension()
    }

    /// `δ = μ - λ`.
    pub fn delta(&self) -> Rational {
        self.mu.value() - self.lambda.value()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearContext {
    pub signature: Signature,
    pub lambda: Weight,
    pub mu: Weight,
    pub nu: Weight,
}

impl BilinearContext {
    pub fn new(signature: Signature, lambda: Weight, mu: Weight, nu: Weight) -> Self {
        BilinearContext { signature, lambda, mu, nu }
    }

    pub fn dimension(&self) -> usize {
        self.signature.dimension()
    }

    /// `δ = ν - μ - λ`.
    pub fn delta(&self) -> Rational {
        self.nu.value() - self.mu.value() - self.lambda.value()
    }
}

/// Residual of one generator applied to an operator symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorResidual {
    pub generator: Generator,
    pub residual: SymbolPoly,
}

/// Per-generator residuals; the operator is invariant iff all vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub residuals: Vec<GeneratorResidual>,
}

impl InvarianceReport {
    pub fn is_invariant(&self) -> bool {
        self.residuals.iter().all(|r| r.residual.is_zero())
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &GeneratorResidual> {
        self.residuals.iter().filter(|r| !r.residual.is_zero())
    }

    pub fn residual_for(&self, kind: GeneratorKind) -> Option<&SymbolPoly> {
        self.residuals.iter().find(|r| r.generator.kind() == kind).map(|r| &r.residual)
    }
}

impl fmt::Display for InvarianceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.residuals {
            writeln!(f, "{}: {}", r.generator, r.residual)?;
        }
        Ok(())
    }
}

pub(crate) fn report<F>(signature: Signature, mut residual: F) -> Result<InvarianceReport>
where
    F: FnMut(&Generator) -> Result<SymbolPoly>,
{
    let residuals = Generator::all(signature)
        .into_iter()
        .map(|generator| Ok(GeneratorResidual { residual: residual(&generator)?, generator }))
        .collect::<Result<_>>()?;
    Ok(InvarianceReport { residuals })
}

fn times_var(p: &SymbolPoly, v: Variable) -> SymbolPoly {
    p.mul_monomial(&Monomial::var(v))
}

fn d(p: &SymbolPoly, v: Variable) -> SymbolPoly {
    p.diff(v).expect("variable index checked against the signature")
}

/// `Σ_j v_j ∂_{v_j}` on the family `v`.
fn euler(p: &SymbolPoly, family: Family) -> SymbolPoly {
    SymbolPoly::from_terms(
        p.dimension(),
        p.terms().map(|(m, c)| (m.clone(), c * from_usize(m.family_degree(family) as usize))),
    )
}

/// `T_v = g^{jk} ∂_{v_j} ∂_{v_k}`.
fn trace(p: &SymbolPoly, family: Family, sig: Signature) -> SymbolPoly {
    (1..=sig.dimension()).fold(SymbolPoly::zero(p.dimension()), |acc, j| {
        let v = Variable { family, index: j };
        acc + d(&d(p, v), v).scale(&int(sig.diag(j)))
    })
}

/// Shared engine. `slots` lists each momentum family with the weight of the
/// density it differentiates.
fn act(
    gen: &Generator,
    sig: Signature,
    delta: &Rational,
    slots: &[(Family, &Weight)],
    p: &SymbolPoly,
) -> Result<SymbolPoly> {
    sig.check_same(gen.signature())?;
    let n = sig.dimension();
    if p.dimension() != n {
        return Err(Error::DimensionMismatch { left: n, right: p.dimension() });
    }
    let field = gen.vector_field();
    let components = field.components();

    // X^k ∂_{x^k} P + δ div(X) P
    let mut out = field.apply(p) + (&field.divergence() * p).scale(delta);

    match gen.kind() {
        GeneratorKind::Inversion(i) => {
            let g_ii = int(sig.diag(i));
            let x_low_i = sig.lowered_x(i);
            for &(family, weight) in slots {
                let v = |j: usize| Variable { family, index: j };
                // -2 (v_i x_j - v_j x_i) ∂_{v_j} P
                for j in 1..=n {
                    let dp = d(p, v(j));
                    if dp.is_zero() {
                        continue;
                    }
                    let bracket = &times_var(&sig.lowered_x(j), v(i)) - &times_var(&x_low_i, v(j));
                    out = out - (&bracket * &dp).scale(&int(2));
                }
                // ∂_{v^i} P = g_ii ∂_{v_i} P
                let raised = d(p, v(i)).scale(&g_ii);
                // +2 (v_j x^j) ∂_{v^i} P
                let pairing = (1..=n).fold(SymbolPoly::zero(n), |acc, j| {
                    acc + SymbolPoly::monomial(n, Monomial::from_powers([(Variable::x(j), 1), (v(j), 1)]), int(1))
                });
                out = out + (&pairing * &raised).scale(&int(2));
                // -v_i T_v P + 2 (E_v + n w) ∂_{v^i} P
                out = out - times_var(&trace(p, family, sig), v(i));
                let euler_term = euler(&raised, family) + raised.scale(&(from_usize(n) * weight.value()));
                out = out + euler_term.scale(&int(2));
            }
        }
        _ => {
            // Cotangent lift: -v_j (∂_k X^j) ∂_{v_k} P.
            for &(family, _) in slots {
                for (j, xj) in components.iter().enumerate() {
                    for k in 1..=n {
                        let jac = d(xj, Variable::x(k));
                        if jac.is_zero() {
                            continue;
                        }
                        let dp = d(p, Variable { family, index: k });
                        if dp.is_zero() {
                            continue;
                        }
                        out = out - times_var(&(&jac * &dp), Variable { family, index: j + 1 });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `L_X^{λ,μ}` on the symbol of a linear operator `F_λ → F_μ`.
pub fn act_linear(gen: &Generator, ctx: &LinearContext, p: &SymbolPoly) -> Result<SymbolPoly> {
    if p.involves(Family::Eta) {
        return Err(Error::ContractViolation("linear symbols depend on x and ξ only".into()));
    }
    act(gen, ctx.signature, &ctx.delta(), &[(Family::Xi, &ctx.lambda)], p)
}

/// `L_X^{λ,μ;ν}` on the symbol of a bilinear operator `F_λ ⊗ F_μ → F_ν`.
pub fn act_bilinear(gen: &Generator, ctx: &BilinearContext, p: &SymbolPoly) -> Result<SymbolPoly> {
    act(gen, ctx.signature, &ctx.delta(), &[(Family::Xi, &ctx.lambda), (Family::Eta, &ctx.mu)], p)
}

/// Closed-form image of `R^{r,s,t}` under an inversion:
///
/// ```text
/// x_i · x_coeff · R^{r,s,t}
///   + ξ_i · Σ xi_terms      (on R^{r-1,s,t}, R^{r,s-2,t+1}, R^{r,s-1,t})
///   + η_i · Σ eta_terms     (on R^{r,s,t-1}, R^{r+1,s-2,t}, R^{r,s-1,t})
/// ```
///
/// Entries whose target would carry a negative exponent have a zero
/// coefficient and are omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionExpansion {
    pub monomial: InvariantMonomial,
    pub x_coeff: Rational,
    pub xi_terms: Vec<(InvariantMonomial, Rational)>,
    pub eta_terms: Vec<(InvariantMonomial, Rational)>,
}

pub fn inversion_monomial_expansion(r: usize, s: usize, t: usize, ctx: &BilinearContext) -> InversionExpansion {
    let n = ctx.dimension();
    let nn = from_usize(n);
    let (rr, ss, tt) = (from_usize(r), from_usize(s), from_usize(t));
    let k = from_usize(r + s + t);
    let lam_shift = shifted(n, ctx.lambda.value());
    let mu_shift = shifted(n, ctx.mu.value());
    let one = int(1);
    let two = int(2);

    let x_coeff = &two * (&two * &k - &nn * ctx.delta());

    let mut xi_terms = Vec::new();
    let mut eta_terms = Vec::new();
    if r >= 1 {
        xi_terms.push((InvariantMonomial::new(r - 1, s, t), &two * &rr * (&two * &rr + &lam_shift)));
    }
    if t >= 1 {
        eta_terms.push((InvariantMonomial::new(r, s, t - 1), &two * &tt * (&two * &tt + &mu_shift)));
    }
    if s >= 2 {
        let c = -(&ss * (&ss - &one));
        xi_terms.push((InvariantMonomial::new(r, s - 2, t + 1), c.clone()));
        eta_terms.push((InvariantMonomial::new(r + 1, s - 2, t), c));
    }
    if s >= 1 {
        xi_terms
            .push((InvariantMonomial::new(r, s - 1, t), &two * &ss * (&ss + &two * &tt + &nn * ctx.mu.value() - &one)));
        eta_terms.push((
            InvariantMonomial::new(r, s - 1, t),
            &two * &ss * (&ss + &two * &rr + &nn * ctx.lambda.value() - &one),
        ));
    }
    InversionExpansion { monomial: InvariantMonomial::new(r, s, t), x_coeff, xi_terms, eta_terms }
}

impl InversionExpansion {
    /// Assembles the expansion as a polynomial for the inversion `X̄_i`.
    pub fn to_poly(&self, i: usize, sig: Signature) -> SymbolPoly {
        let n = sig.dimension();
        let combine = |terms: &[(InvariantMonomial, Rational)]| {
            terms.iter().fold(SymbolPoly::zero(n), |acc, (m, c)| acc + m.to_poly(sig).scale(c))
        };
        let x_part = &sig.lowered_x(i) * &self.monomial.to_poly(sig).scale(&self.x_coeff);
        x_part
            + times_var(&combine(&self.xi_terms), Variable::xi(i))
            + times_var(&combine(&self.eta_terms), Variable::eta(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::{euclidean_invariant, Invariant};
    use crate::rational::rat;
    use num_traits::Zero;

    fn sig(p: usize, q: usize) -> Signature {
        Signature::new(p, q).unwrap()
    }

    fn gen(kind: GeneratorKind, s: Signature) -> Generator {
        Generator::new(kind, s).unwrap()
    }

    fn lin(s: Signature, l: Rational, m: Rational) -> LinearContext {
        LinearContext::new(s, Weight(l), Weight(m))
    }

    #[test]
    fn dilation_on_laplacian_power() {
        // nδ = 2k with n = 3, k = 2.
        let s = sig(3, 0);
        let ctx = lin(s, rat(1, 5), rat(1, 5) + rat(4, 3));
        let p = euclidean_invariant(Invariant::Rxixi, s).pow(2);
        let out = act_linear(&gen(GeneratorKind::Dilation, s), &ctx, &p).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn inversion_at_admissible_weights_vanishes() {
        let s = sig(2, 0);
        let ctx = lin(s, int(0), int(1));
        let p = euclidean_invariant(Invariant::Rxixi, s);
        for i in 1..=2 {
            assert!(act_linear(&gen(GeneratorKind::Inversion(i), s), &ctx, &p).unwrap().is_zero());
        }
    }

    #[test]
    fn inversion_leaves_second_term() {
        let s = sig(2, 0);
        let ctx = lin(s, rat(1, 2), rat(3, 2));
        let p = euclidean_invariant(Invariant::Rxixi, s);
        for i in 1..=2 {
            let out = act_linear(&gen(GeneratorKind::Inversion(i), s), &ctx, &p).unwrap();
            assert_eq!(out, SymbolPoly::xi(2, i).scale(&int(4)));
        }
    }

    #[test]
    fn linear_rejects_eta() {
        let s = sig(2, 0);
        let ctx = lin(s, int(0), int(1));
        let p = SymbolPoly::eta(2, 1);
        assert!(matches!(act_linear(&gen(GeneratorKind::Dilation, s), &ctx, &p), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn translations_kill_x_free_symbols() {
        let s = sig(1, 1);
        let ctx = BilinearContext::new(s, Weight(rat(1, 3)), Weight(rat(2, 7)), Weight(int(5)));
        let p = InvariantMonomial::new(1, 2, 1).to_poly(s);
        for i in 1..=2 {
            assert!(act_bilinear(&gen(GeneratorKind::Translation(i), s), &ctx, &p).unwrap().is_zero());
        }
    }

    #[test]
    fn dilation_on_bilinear_monomial() {
        let s = sig(2, 1);
        let (l, m) = (rat(1, 3), rat(2, 7));
        // nδ = 2(r+s+t) for (1,1,0).
        let nu = &l + &m + rat(4, 3);
        let ctx = BilinearContext::new(s, Weight(l.clone()), Weight(m.clone()), Weight(nu));
        let p = InvariantMonomial::new(1, 1, 0).to_poly(s);
        assert!(act_bilinear(&gen(GeneratorKind::Dilation, s), &ctx, &p).unwrap().is_zero());
        // Off by 1/3 in ν gives n/3 = 1 times the monomial.
        let ctx = BilinearContext::new(s, Weight(l.clone()), Weight(m.clone()), Weight(&l + &m + rat(5, 3)));
        let out = act_bilinear(&gen(GeneratorKind::Dilation, s), &ctx, &p).unwrap();
        assert_eq!(out, p);
    }

    #[test]
    fn inversion_on_mixed_invariant() {
        let s = sig(2, 0);
        let (l, m) = (rat(1, 5), rat(1, 7));
        let ctx = BilinearContext::new(s, Weight(l.clone()), Weight(m.clone()), Weight(&l + &m + int(1)));
        let p = euclidean_invariant(Invariant::Rxieta, s);
        for i in 1..=2 {
            let out = act_bilinear(&gen(GeneratorKind::Inversion(i), s), &ctx, &p).unwrap();
            let expected = SymbolPoly::xi(2, i).scale(&(int(2) * int(2) * &m))
                + SymbolPoly::eta(2, i).scale(&(int(2) * int(2) * &l));
            assert_eq!(out, expected);
        }
    }

    #[test]
    fn expansion_examples() {
        let s = sig(2, 0);
        let zero_delta = BilinearContext::new(s, Weight(rat(1, 3)), Weight(rat(1, 4)), Weight(rat(7, 12)));
        let e = inversion_monomial_expansion(0, 0, 0, &zero_delta);
        assert!(e.x_coeff.is_zero() && e.xi_terms.is_empty() && e.eta_terms.is_empty());

        let ctx = BilinearContext::new(s, Weight(rat(1, 5)), Weight(rat(1, 7)), Weight(int(1)));
        let e = inversion_monomial_expansion(1, 0, 0, &ctx);
        assert_eq!(e.xi_terms, vec![(InvariantMonomial::new(0, 0, 0), rat(8, 5))]);

        let e = inversion_monomial_expansion(0, 2, 0, &ctx);
        assert!(e.xi_terms.contains(&(InvariantMonomial::new(0, 0, 1), int(-2))));
        assert!(e.eta_terms.contains(&(InvariantMonomial::new(1, 0, 0), int(-2))));
    }

    #[test]
    fn expansion_matches_action_on_monomials() {
        let s = sig(2, 1);
        let ctx = BilinearContext::new(s, Weight(rat(2, 9)), Weight(rat(-3, 5)), Weight(rat(1, 11)));
        for k in 0..=3 {
            for m in InvariantMonomial::at_level(k) {
                let p = m.to_poly(s);
                for i in 1..=3 {
                    let direct = act_bilinear(&gen(GeneratorKind::Inversion(i), s), &ctx, &p).unwrap();
                    let closed = inversion_monomial_expansion(m.r, m.s, m.t, &ctx).to_poly(i, s);
                    assert_eq!(direct, closed, "{m} inversion({i})");
                }
            }
        }
    }

    #[test]
    fn signature_mismatch_rejected() {
        let ctx = lin(sig(2, 0), int(0), int(1));
        let g = gen(GeneratorKind::Dilation, sig(1, 1));
        assert!(matches!(act_linear(&g, &ctx, &SymbolPoly::one(2)), Err(Error::SignatureMismatch(..))));
    }
}
