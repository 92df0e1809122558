//! Flat conformal geometry on `R^{p,q}`: the diagonal metric, density
//! weights, the conformal generators and their Lie derivative on densities,
//! and the Euclidean invariant polynomials.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, SparseRow};
use crate::poly::{Family, Monomial, SymbolPoly, Variable};
use crate::rational::{format_rational, from_usize, int, parse_rational, Rational};

/// Signature `(p, q)` of the flat metric `diag(+1 × p, -1 × q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    p: usize,
    q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::ContractViolation("signature must have p + q >= 1".into()));
        }
        Ok(Signature { p, q })
    }

    pub fn euclidean(n: usize) -> Self {
        Signature::new(n, 0).expect("n >= 1")
    }

    pub fn p(self) -> usize {
        self.p
    }

    pub fn q(self) -> usize {
        self.q
    }

    pub fn dimension(self) -> usize {
        self.p + self.q
    }

    /// Diagonal entry `g_ii` (equal to `g^ii`) as a small integer.
    pub fn diag(self, i: usize) -> i64 {
        assert!(i >= 1 && i <= self.dimension(), "metric index {i} out of range");
        if i <= self.p {
            1
        } else {
            -1
        }
    }

    pub fn metric_entry(self, i: usize, j: usize) -> Result<Rational> {
        let n = self.dimension();
        for index in [i, j] {
            if index == 0 || index > n {
                return Err(Error::IndexOutOfRange { index, dimension: n });
            }
        }
        Ok(if i == j { int(self.diag(i)) } else { Rational::zero() })
    }

    pub fn check_same(self, other: Signature) -> Result<()> {
        if self != other {
            return Err(Error::SignatureMismatch(self.p, self.q, other.p, other.q));
        }
        Ok(())
    }

    /// The lowered coordinate `x_i = g_ii x^i`.
    pub fn lowered_x(self, i: usize) -> SymbolPoly {
        SymbolPoly::x(self.dimension(), i).scale(&int(self.diag(i)))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.p, self.q)
    }
}

impl FromStr for Signature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("signature must be `p,q`, got {s:?}"));
        let (p, q) = s.split_once(',').ok_or_else(bad)?;
        let p = p.trim().parse().map_err(|_| bad())?;
        let q = q.trim().parse().map_err(|_| bad())?;
        Signature::new(p, q)
    }
}

/// Density degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight(pub Rational);

impl Weight {
    pub fn value(&self) -> &Rational {
        &self.0
    }
}

impl From<Rational> for Weight {
    fn from(value: Rational) -> Self {
        Weight(value)
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Weight)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    Translation(usize),
    /// `x_i ∂_j - x_j ∂_i` with `i < j`.
    Rotation(usize, usize),
    Dilation,
    Inversion(usize),
}

/// One of the `n + n(n-1)/2 + 1 + n` generators of `o(p+1, q+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    kind: GeneratorKind,
    signature: Signature,
}

impl Generator {
    pub fn new(kind: GeneratorKind, signature: Signature) -> Result<Self> {
        let n = signature.dimension();
        let check = |index: usize| {
            if index == 0 || index > n {
                Err(Error::IndexOutOfRange { index, dimension: n })
            } else {
                Ok(())
            }
        };
        match kind {
            GeneratorKind::Translation(i) | GeneratorKind::Inversion(i) => check(i)?,
            GeneratorKind::Rotation(i, j) => {
                check(i)?;
                check(j)?;
                if i >= j {
                    return Err(Error::ContractViolation(format!(
                        "rotation indices must satisfy i < j, got ({i},{j})"
                    )));
                }
            }
            GeneratorKind::Dilation => {}
        }
        Ok(Generator { kind, signature })
    }

    /// Every generator, in the order translations, rotations, dilation,
    /// inversions.
    pub fn all(signature: Signature) -> Vec<Generator> {
        let n = signature.dimension();
        let mut kinds: Vec<GeneratorKind> = (1..=n).map(GeneratorKind::Translation).collect();
        for i in 1..=n {
            for j in i + 1..=n {
                kinds.push(GeneratorKind::Rotation(i, j));
            }
        }
        kinds.push(GeneratorKind::Dilation);
        kinds.extend((1..=n).map(GeneratorKind::Inversion));
        kinds.into_iter().map(|kind| Generator { kind, signature }).collect()
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn is_affine(&self) -> bool {
        !matches!(self.kind, GeneratorKind::Inversion(_))
    }

    /// Components `X^k(x)` of `X = X^k ∂_k`.
    pub fn components(&self) -> Vec<SymbolPoly> {
        let sig = self.signature;
        let n = sig.dimension();
        let mut comps = vec![SymbolPoly::zero(n); n];
        match self.kind {
            GeneratorKind::Translation(i) => comps[i - 1] = SymbolPoly::one(n),
            GeneratorKind::Rotation(i, j) => {
                comps[j - 1] = sig.lowered_x(i);
                comps[i - 1] = -&sig.lowered_x(j);
            }
            GeneratorKind::Dilation => {
                for (k, c) in comps.iter_mut().enumerate() {
                    *c = SymbolPoly::x(n, k + 1);
                }
            }
            GeneratorKind::Inversion(i) => {
                let two_xi = sig.lowered_x(i).scale(&int(2));
                for (k, c) in comps.iter_mut().enumerate() {
                    *c = -&(&two_xi * &SymbolPoly::x(n, k + 1));
                }
                comps[i - 1] = &comps[i - 1] + &square_norm_x(sig);
            }
        }
        comps
    }

    pub fn vector_field(&self) -> VectorField {
        VectorField { signature: self.signature, components: self.components() }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GeneratorKind::Translation(i) => write!(f, "translation({i})"),
            GeneratorKind::Rotation(i, j) => write!(f, "rotation({i},{j})"),
            GeneratorKind::Dilation => f.write_str("dilation"),
            GeneratorKind::Inversion(i) => write!(f, "inversion({i})"),
        }
    }
}

/// `x_j x^j`.
fn square_norm_x(sig: Signature) -> SymbolPoly {
    euclidean_invariant(Invariant::Rxx, sig)
}

/// A polynomial vector field on `R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    signature: Signature,
    components: Vec<SymbolPoly>,
}

impl VectorField {
    pub fn new(signature: Signature, components: Vec<SymbolPoly>) -> Result<Self> {
        let n = signature.dimension();
        if components.len() != n {
            return Err(Error::DimensionMismatch { left: n, right: components.len() });
        }
        for c in &components {
            if c.dimension() != n {
                return Err(Error::DimensionMismatch { left: n, right: c.dimension() });
            }
            if c.involves(Family::Xi) || c.involves(Family::Eta) {
                return Err(Error::ContractViolation("vector field components depend on x only".into()));
            }
        }
        Ok(VectorField { signature, components })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn components(&self) -> &[SymbolPoly] {
        &self.components
    }

    pub fn divergence(&self) -> SymbolPoly {
        let n = self.signature.dimension();
        self.components
            .iter()
            .enumerate()
            .fold(SymbolPoly::zero(n), |acc, (k, c)| acc + c.diff(Variable::x(k + 1)).unwrap())
    }

    /// `X^k ∂f/∂x^k`.
    pub fn apply(&self, f: &SymbolPoly) -> SymbolPoly {
        let n = self.signature.dimension();
        self.components
            .iter()
            .enumerate()
            .fold(SymbolPoly::zero(n), |acc, (k, c)| acc + c * &f.diff(Variable::x(k + 1)).unwrap())
    }

    /// `[X, Y]^k = X^i ∂_i Y^k - Y^i ∂_i X^k`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.signature.check_same(other.signature)?;
        let components =
            self.components.iter().zip(&other.components).map(|(xk, yk)| self.apply(yk) - other.apply(xk)).collect();
        Ok(VectorField { signature: self.signature, components })
    }

    /// Lie derivative on densities of weight `lambda`:
    /// `X^i ∂_i f + lambda (∂_i X^i) f`.
    pub fn lie_derivative_density(&self, lambda: &Weight, f: &SymbolPoly) -> Result<SymbolPoly> {
        if f.dimension() != self.signature.dimension() {
            return Err(Error::DimensionMismatch { left: self.signature.dimension(), right: f.dimension() });
        }
        if f.involves(Family::Xi) || f.involves(Family::Eta) {
            return Err(Error::ContractViolation("density coefficients depend on x only".into()));
        }
        Ok(self.apply(f) + (&self.divergence() * f).scale(lambda.value()))
    }

    /// Coefficients of `self` in the span of the conformal generators, or
    /// `None` if it is not a conformal vector field.
    pub fn decompose(&self) -> Option<Vec<(Generator, Rational)>> {
        let generators = Generator::all(self.signature);
        let fields: Vec<Vec<SymbolPoly>> = generators.iter().map(Generator::components).collect();
        let mut rows: std::collections::HashMap<(usize, Monomial), (SparseRow, Rational)> =
            std::collections::HashMap::new();
        for (col, comps) in fields.iter().enumerate() {
            for (k, c) in comps.iter().enumerate() {
                for (m, a) in c.terms() {
                    rows.entry((k, m.clone()))
                        .or_insert_with(|| (SparseRow::new(), Rational::zero()))
                        .0
                        .insert(col, a.clone());
                }
            }
        }
        for (k, c) in self.components.iter().enumerate() {
            for (m, a) in c.terms() {
                rows.entry((k, m.clone())).or_insert_with(|| (SparseRow::new(), Rational::zero())).1 = a.clone();
            }
        }
        let coeffs = linalg::solve(generators.len(), rows.into_values())?;
        Some(generators.into_iter().zip(coeffs).filter(|(_, c)| !c.is_zero()).collect())
    }
}

/// Lie derivative of a `lambda`-density along a conformal generator.
pub fn lie_derivative_density(gen: &Generator, lambda: &Weight, f: &SymbolPoly) -> Result<SymbolPoly> {
    gen.vector_field().lie_derivative_density(lambda, f)
}

/// The `o(p,q)`-invariant contractions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Invariant {
    /// `g_ij x^i x^j`
    Rxx,
    /// `x^i ξ_i`
    Rxxi,
    /// `g^ij ξ_i ξ_j`
    Rxixi,
    /// `g^ij ξ_i η_j`
    Rxieta,
    /// `g^ij η_i η_j`
    Retaeta,
}

pub fn euclidean_invariant(which: Invariant, sig: Signature) -> SymbolPoly {
    let n = sig.dimension();
    let pair = |a: Family, b: Family, metric: bool| {
        SymbolPoly::from_terms(
            n,
            (1..=n).map(|i| {
                let m = Monomial::from_powers([
                    (Variable { family: a, index: i }, 1),
                    (Variable { family: b, index: i }, 1),
                ]);
                let c = if metric { int(sig.diag(i)) } else { int(1) };
                (m, c)
            }),
        )
    };
    match which {
        Invariant::Rxx => pair(Family::X, Family::X, true),
        Invariant::Rxxi => pair(Family::X, Family::Xi, false),
        Invariant::Rxixi => pair(Family::Xi, Family::Xi, true),
        Invariant::Rxieta => pair(Family::Xi, Family::Eta, true),
        Invariant::Retaeta => pair(Family::Eta, Family::Eta, true),
    }
}

/// `R^{r,s,t} = R_ξξ^r R_ξη^s R_ηη^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantMonomial {
    pub r: usize,
    pub s: usize,
    pub t: usize,
}

impl InvariantMonomial {
    pub const fn new(r: usize, s: usize, t: usize) -> Self {
        InvariantMonomial { r, s, t }
    }

    pub fn level(&self) -> usize {
        self.r + self.s + self.t
    }

    /// All `(r, s, t)` with `r + s + t = k`, ordered by `r`, then `t`.
    pub fn at_level(k: usize) -> Vec<InvariantMonomial> {
        let mut out = Vec::with_capacity((k + 1) * (k + 2) / 2);
        for r in 0..=k {
            for t in 0..=k - r {
                out.push(InvariantMonomial::new(r, k - r - t, t));
            }
        }
        out
    }

    pub fn to_poly(&self, sig: Signature) -> SymbolPoly {
        euclidean_invariant(Invariant::Rxixi, sig).pow(self.r as u32)
            * euclidean_invariant(Invariant::Rxieta, sig).pow(self.s as u32)
            * euclidean_invariant(Invariant::Retaeta, sig).pow(self.t as u32)
    }
}

impl fmt::Display for InvariantMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R^({},{},{})", self.r, self.s, self.t)
    }
}

/// `n(2w - 1)`, the recurring shift in the denominators.
pub(crate) fn shifted(n: usize, w: &Rational) -> Rational {
    from_usize(n) * (w * int(2) - int(1))
}
