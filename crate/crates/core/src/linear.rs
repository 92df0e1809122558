//! Invariant linear operators `F_λ → F_μ`: the powers of the Laplacian.
//!
//! Translations and rotations leave only polynomials in `R_ξξ`, so the
//! general candidate is `Σ c_k R_ξξ^k`. The dilation then pins `δ = 2k/n`
//! and the inversions pin `λ = (n - 2k)/2n`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::action::{act_linear, report, InvarianceReport, LinearContext};
use crate::conformal::{euclidean_invariant, Generator, GeneratorKind, Invariant, Signature, Weight};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Monomial, SymbolPoly, Variable};
use crate::rational::Rational;

/// `Σ c_k R_ξξ^k` between the densities of `ctx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearOperatorSymbol {
    pub ctx: LinearContext,
    coefficients: BTreeMap<usize, Rational>,
}

impl LinearOperatorSymbol {
    pub fn new<I: IntoIterator<Item = (usize, Rational)>>(ctx: LinearContext, coefficients: I) -> Self {
        let coefficients = coefficients.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        LinearOperatorSymbol { ctx, coefficients }
    }

    pub fn coefficient(&self, k: usize) -> Rational {
        self.coefficients.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `(k, c_k)` for the nonzero coefficients.
    pub fn coefficients(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coefficients.iter().map(|(k, c)| (*k, c))
    }

    /// `2 · max k`, or `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coefficients.keys().next_back().map(|k| 2 * k)
    }

    pub fn to_poly(&self) -> SymbolPoly {
        let sig = self.ctx.signature;
        self.coefficients
            .iter()
            .fold(SymbolPoly::zero(sig.dimension()), |acc, (&k, c)| acc + laplacian_power_symbol(sig, k).scale(c))
    }
}

/// `R_ξξ^k`, the symbol of `Δ^k`.
pub fn laplacian_power_symbol(sig: Signature, k: usize) -> SymbolPoly {
    euclidean_invariant(Invariant::Rxixi, sig).pow(k as u32)
}

/// `λ = (n - 2k)/2n`, `μ = (n + 2k)/2n`.
pub fn admissible_linear_weights(k: usize, n: usize) -> (Weight, Weight) {
    let n = n as i64;
    let k = k as i64;
    (
        Weight(Rational::new((n - 2 * k).into(), (2 * n).into())),
        Weight(Rational::new((n + 2 * k).into(), (2 * n).into())),
    )
}

/// Residual of every generator on `R_ξξ^k`.
pub fn check_linear_invariance(k: usize, ctx: &LinearContext) -> Result<InvarianceReport> {
    let p = laplacian_power_symbol(ctx.signature, k);
    report(ctx.signature, |g| act_linear(g, ctx, &p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearClassification {
    pub basis: Vec<LinearOperatorSymbol>,
}

impl LinearClassification {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// `x`-degree of the full ansatz in [`classify_linear`]. The generators
/// raise it by at most one, so two would close; four leaves margin.
pub const ANSATZ_X_DEGREE: u32 = 4;

/// Invariant operators of order `<= 2 k_max`.
///
/// The classification is the kernel of the full generator action on every
/// `x^a ξ^b` with `|b| <= 2 k_max` and `|a| <= ANSATZ_X_DEGREE`. The basis is
/// reported in powers of `R_ξξ`; a kernel element outside that span is an
/// error rather than silently dropped.
pub fn classify_linear(ctx: &LinearContext, k_max: usize) -> Result<LinearClassification> {
    let full = classify_linear_monomial(ctx, 2 * k_max as u32, ANSATZ_X_DEGREE)?;
    let reduced = classify_linear_reduced(ctx, k_max)?;
    let mut all: Vec<SymbolPoly> = reduced.basis.iter().map(LinearOperatorSymbol::to_poly).collect();
    all.extend(full.iter().cloned());
    if full.len() != reduced.dimension() || span_rank(&all) != full.len() {
        return Err(Error::InconsistentSystem(format!(
            "{} invariant symbols found, {} of them polynomials in R_ξξ",
            full.len(),
            reduced.dimension()
        )));
    }
    Ok(reduced)
}

/// Kernel of the generator action on `span{R_ξξ^k : k <= k_max}`, with each
/// basis element scaled so that its highest power has coefficient one.
pub fn classify_linear_reduced(ctx: &LinearContext, k_max: usize) -> Result<LinearClassification> {
    let sig = ctx.signature;
    let generators = Generator::all(sig);
    let images = (0..=k_max)
        .map(|k| {
            let p = laplacian_power_symbol(sig, k);
            generators.iter().map(|g| act_linear(g, ctx, &p)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel = linalg::nullspace(k_max + 1, linalg::rows_from_images(&images));
    let basis = kernel
        .into_iter()
        .map(|v| {
            let lead = v.iter().rev().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rational::one);
            LinearOperatorSymbol::new(ctx.clone(), v.into_iter().map(|c| c / &lead).enumerate())
        })
        .collect();
    Ok(LinearClassification { basis })
}

fn xi_and_x_vars(n: usize) -> (Vec<Variable>, Vec<Variable>) {
    ((1..=n).map(Variable::x).collect(), (1..=n).map(Variable::xi).collect())
}

fn kernel_over(
    ansatz: &[Monomial],
    n: usize,
    generators: &[Generator],
    ctx: &LinearContext,
) -> Result<Vec<SymbolPoly>> {
    let images = ansatz
        .par_iter()
        .map(|m| {
            let p = SymbolPoly::monomial(n, m.clone(), Rational::one());
            generators.iter().map(|g| act_linear(g, ctx, &p)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel = linalg::nullspace(ansatz.len(), linalg::rows_from_images(&images));
    Ok(kernel.into_iter().map(|v| SymbolPoly::from_terms(n, ansatz.iter().cloned().zip(v))).collect())
}

/// Classification over the unreduced ansatz: every monomial `x^a ξ^b` with
/// `|a| <= max_x_degree` and `|b| <= max_xi_degree`, constrained by all
/// generators. Returns a kernel basis.
///
/// Translations lower the `x`-degree and the other generators raise it by at
/// most one, so every kernel element of the truncated ansatz is a genuine
/// invariant.
pub fn classify_linear_monomial(ctx: &LinearContext, max_xi_degree: u32, max_x_degree: u32) -> Result<Vec<SymbolPoly>> {
    let n = ctx.dimension();
    let (xs, xis) = xi_and_x_vars(n);
    let xs = Monomial::all_up_to(&xs, max_x_degree);
    let xis = Monomial::all_up_to(&xis, max_xi_degree);
    let ansatz: Vec<Monomial> = xs.iter().flat_map(|a| xis.iter().map(move |b| a.mul(b))).collect();
    kernel_over(&ansatz, n, &Generator::all(ctx.signature), ctx)
}

/// Polynomials in `(x, ξ)` of total degree `<= max_degree` annihilated by
/// all translations and rotations. The weights play no role for these
/// generators.
pub fn euclidean_kernel(sig: Signature, max_degree: u32) -> Result<Vec<SymbolPoly>> {
    let n = sig.dimension();
    let (mut vars, xis) = xi_and_x_vars(n);
    vars.extend(xis);
    let ansatz = Monomial::all_up_to(&vars, max_degree);
    let generators: Vec<Generator> = Generator::all(sig)
        .into_iter()
        .filter(|g| matches!(g.kind(), GeneratorKind::Translation(_) | GeneratorKind::Rotation(..)))
        .collect();
    let zero = Weight(Rational::zero());
    let ctx = LinearContext::new(sig, zero.clone(), zero);
    kernel_over(&ansatz, n, &generators, &ctx)
}

/// Dimension of `span(polys)`.
pub fn span_rank(polys: &[SymbolPoly]) -> usize {
    let mut columns: HashMap<Monomial, usize> = HashMap::new();
    let rows: Vec<linalg::SparseRow> = polys
        .iter()
        .map(|p| {
            p.terms()
                .map(|(m, c)| {
                    let next = columns.len();
                    (*columns.entry(m.clone()).or_insert(next), c.clone())
                })
                .collect()
        })
        .collect();
    linalg::Rref::new(columns.len(), rows).rank()
}
