//! Operators applied to actual polynomial densities.
//!
//! Invariance is checked from the definition: for a bilinear `B`,
//!
//! ```text
//! L_X^ν B(f, g) - B(L_X^λ f, g) - B(f, L_X^μ g) = 0
//! ```
//!
//! using only the Lie derivative of densities. Nothing here goes through the
//! action on symbols, so the two verifiers are independent.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bilinear::BilinearOperator;
use crate::conformal::{lie_derivative_density, Generator, Signature, Weight};
use crate::error::{Error, Result};
use crate::poly::{Family, Monomial, SymbolPoly, Variable};
use crate::rational::int;

/// A density of weight `weight` with polynomial coefficient in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityPoly {
    coeff: SymbolPoly,
    weight: Weight,
}

impl DensityPoly {
    pub fn new(coeff: SymbolPoly, weight: Weight) -> Result<Self> {
        if coeff.involves(Family::Xi) || coeff.involves(Family::Eta) {
            return Err(Error::ContractViolation("density coefficients depend on x only".into()));
        }
        Ok(DensityPoly { coeff, weight })
    }

    pub fn coeff(&self) -> &SymbolPoly {
        &self.coeff
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }
}

/// `∂_i`.
fn d(f: &SymbolPoly, i: usize) -> SymbolPoly {
    f.diff(Variable::x(i)).expect("index within dimension")
}

/// `Δ f = Σ g_ii ∂_i² f`.
pub fn laplacian(sig: Signature, f: &SymbolPoly) -> SymbolPoly {
    (1..=sig.dimension()).fold(SymbolPoly::zero(f.dimension()), |acc, i| acc + d(&d(f, i), i).scale(&int(sig.diag(i))))
}

fn laplacian_power(sig: Signature, k: usize, f: &SymbolPoly) -> SymbolPoly {
    (0..k).fold(f.clone(), |acc, _| laplacian(sig, &acc))
}

/// `Σ g^{i₁j₁}…g^{iₛjₛ} ∂_{i₁…iₛ} f · ∂_{j₁…jₛ} g`, one pairing at a time.
fn contract(sig: Signature, s: usize, f: SymbolPoly, g: SymbolPoly) -> SymbolPoly {
    let n = sig.dimension();
    let mut pairs = vec![(int(1), f, g)];
    for _ in 0..s {
        pairs = pairs
            .iter()
            .flat_map(|(c, a, b)| {
                (1..=n).filter_map(move |i| {
                    let (da, db) = (d(a, i), d(b, i));
                    (!da.is_zero() && !db.is_zero()).then(|| (c * int(sig.diag(i)), da, db))
                })
            })
            .collect();
    }
    pairs.into_iter().fold(SymbolPoly::zero(n), |acc, (c, a, b)| acc + (&a * &b).scale(&c))
}

/// Raw bidifferential application, ignoring weights.
fn bilinear_on(op: &BilinearOperator, f: &SymbolPoly, g: &SymbolPoly) -> SymbolPoly {
    let sig = op.ctx.signature;
    op.table.entries().filter(|(_, c)| *c != int(0)).fold(SymbolPoly::zero(sig.dimension()), |acc, (m, c)| {
        let df = laplacian_power(sig, m.r, f);
        let dg = laplacian_power(sig, m.t, g);
        acc + contract(sig, m.s, df, dg).scale(&c)
    })
}

/// `B(f, g)`, a density of weight `ν`.
pub fn apply_bilinear(op: &BilinearOperator, f: &DensityPoly, g: &DensityPoly) -> Result<DensityPoly> {
    let n = op.ctx.dimension();
    for p in [&f.coeff, &g.coeff] {
        if p.dimension() != n {
            return Err(Error::DimensionMismatch { left: n, right: p.dimension() });
        }
    }
    for (expected, actual) in [(&op.ctx.lambda, &f.weight), (&op.ctx.mu, &g.weight)] {
        if expected != actual {
            return Err(Error::WeightMismatch {
                expected: Box::new(expected.0.clone()),
                actual: Box::new(actual.0.clone()),
            });
        }
    }
    Ok(DensityPoly { coeff: bilinear_on(op, &f.coeff, &g.coeff), weight: op.ctx.nu.clone() })
}

/// `Δ^k f`. The output weight is left to the caller.
pub fn apply_linear(k: usize, sig: Signature, f: &SymbolPoly) -> SymbolPoly {
    laplacian_power(sig, k, f)
}

/// A nonzero invariance defect on one pair of test monomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualRecord {
    pub f: String,
    pub g: String,
    pub generator: String,
    pub residual: String,
}

fn x_monomials(n: usize, degree: u32) -> Vec<SymbolPoly> {
    let vars: Vec<Variable> = (1..=n).map(Variable::x).collect();
    Monomial::all_up_to(&vars, degree).into_iter().map(|m| SymbolPoly::monomial(n, m, int(1))).collect()
}

/// `B(m, m')` for every pair of `x`-monomials up to a degree; `B` of any
/// two polynomials in that range is then a bilinear combination of entries.
struct PairTable {
    n: usize,
    index: HashMap<Monomial, usize>,
    values: Vec<Vec<SymbolPoly>>,
}

impl PairTable {
    fn new(op: &BilinearOperator, degree: u32) -> Self {
        let n = op.ctx.dimension();
        let vars: Vec<Variable> = (1..=n).map(Variable::x).collect();
        let monos = Monomial::all_up_to(&vars, degree);
        let polys: Vec<SymbolPoly> = monos.iter().map(|m| SymbolPoly::monomial(n, m.clone(), int(1))).collect();
        let values = polys.par_iter().map(|f| polys.iter().map(|g| bilinear_on(op, f, g)).collect()).collect();
        let index = monos.into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        PairTable { n, index, values }
    }

    fn eval(&self, f: &SymbolPoly, g: &SymbolPoly) -> SymbolPoly {
        let mut out = SymbolPoly::zero(self.n);
        for (a, ca) in f.terms() {
            for (b, cb) in g.terms() {
                let entry = &self.values[self.index[a]][self.index[b]];
                out = out + entry.scale(&(ca * cb));
            }
        }
        out
    }
}

fn residuals_with(
    table: &PairTable,
    op: &BilinearOperator,
    gen: &Generator,
    degree: u32,
) -> Result<Vec<ResidualRecord>> {
    let ctx = &op.ctx;
    let test = x_monomials(ctx.dimension(), degree);
    let lifted = |w: &Weight| test.iter().map(|f| lie_derivative_density(gen, w, f)).collect::<Result<Vec<_>>>();
    let (lf, lg) = (lifted(&ctx.lambda)?, lifted(&ctx.mu)?);
    let mut out = Vec::new();
    for (i, f) in test.iter().enumerate() {
        for (j, g) in test.iter().enumerate() {
            let lhs = lie_derivative_density(gen, &ctx.nu, &table.eval(f, g))?;
            let residual = lhs - table.eval(&lf[i], g) - table.eval(f, &lg[j]);
            if !residual.is_zero() {
                out.push(ResidualRecord {
                    f: f.to_string(),
                    g: g.to_string(),
                    generator: gen.to_string(),
                    residual: residual.to_string(),
                });
            }
        }
    }
    Ok(out)
}

/// Nonzero `L^ν B(f,g) - B(L^λ f, g) - B(f, L^μ g)` over all pairs of
/// `x`-monomials of degree `<= degree`, in grid order.
pub fn oracle_residual(op: &BilinearOperator, gen: &Generator, degree: u32) -> Result<Vec<ResidualRecord>> {
    residuals_with(&PairTable::new(op, degree + 1), op, gen, degree)
}

/// [`oracle_residual`] for every generator.
pub fn oracle_residual_all(op: &BilinearOperator, degree: u32) -> Result<Vec<ResidualRecord>> {
    let table = PairTable::new(op, degree + 1);
    let mut out = Vec::new();
    for gen in Generator::all(op.ctx.signature) {
        out.extend(residuals_with(&table, op, &gen, degree)?);
    }
    Ok(out)
}

/// Nonzero `L^μ(Δ^k f) - Δ^k(L^λ f)` over `x`-monomials of degree `<= degree`,
/// for every generator.
pub fn linear_oracle_residual(
    k: usize,
    sig: Signature,
    lambda: &Weight,
    mu: &Weight,
    degree: u32,
) -> Result<Vec<ResidualRecord>> {
    let test = x_monomials(sig.dimension(), degree);
    let mut out = Vec::new();
    for gen in Generator::all(sig) {
        for f in &test {
            let residual = lie_derivative_density(&gen, mu, &apply_linear(k, sig, f))?
                - apply_linear(k, sig, &lie_derivative_density(&gen, lambda, f)?);
            if !residual.is_zero() {
                out.push(ResidualRecord {
                    f: f.to_string(),
                    g: "1".into(),
                    generator: gen.to_string(),
                    residual: residual.to_string(),
                });
            }
        }
    }
    Ok(out)
}
