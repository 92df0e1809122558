//! Invariant bilinear operators `B_2k : F_λ ⊗ F_μ → F_ν`.
//!
//! Every `e(p,q)`-invariant bilinear symbol is a polynomial in `R_ξξ`, `R_ξη`
//! and `R_ηη`. The dilation forces homogeneity `ν = λ + μ + 2k/n`; the
//! inversions then impose two linear recurrences on the coefficients
//! `c_{rst}` of `Σ c_{rst} R^{r,s,t}` (`r + s + t = k`):
//!
//! ```text
//! 2(r+1)(2(r+1) + n(2λ-1)) c_{r+1,s,t} - (s+2)(s+1) c_{r,s+2,t-1} + 2(s+1)(s+2t+nμ) c_{r,s+1,t} = 0
//! 2(t+1)(2(t+1) + n(2μ-1)) c_{r,s,t+1} - (s+2)(s+1) c_{r-1,s+2,t} + 2(s+1)(s+2r+nλ) c_{r,s+1,t} = 0
//! ```
//!
//! for all `r + s + t = k - 1`. [`solve_recurrence`] fills the table from
//! `c_{0,k,0} = 1` and then checks every equation; [`classify_bilinear`]
//! ignores the recurrences and computes the kernel of the full generator
//! action instead.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{act_bilinear, report, BilinearContext, InvarianceReport};
use crate::conformal::{shifted, Generator, InvariantMonomial, Signature, Weight};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::SymbolPoly;
use crate::rational::{binomial, format_rational, from_usize, int, latex_rational, parse_rational, Rational};

/// Coefficients `c_{rst}` of a homogeneous combination of `R^{r,s,t}` with
/// `r + s + t = k`. Only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    k: usize,
    entries: BTreeMap<InvariantMonomial, Rational>,
}

impl CoeffTable {
    pub fn new<I>(k: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (InvariantMonomial, Rational)>,
    {
        let mut table = CoeffTable { k, entries: BTreeMap::new() };
        for (m, c) in entries {
            if m.level() != k {
                return Err(Error::ContractViolation(format!("{m} does not have level {k}")));
            }
            table.set(m, c);
        }
        Ok(table)
    }

    fn set(&mut self, m: InvariantMonomial, c: Rational) {
        if c.is_zero() {
            self.entries.remove(&m);
        } else {
            self.entries.insert(m, c);
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, r: usize, s: usize, t: usize) -> Rational {
        self.entries.get(&InvariantMonomial::new(r, s, t)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Every monomial of the level with its coefficient, zeros included.
    pub fn entries(&self) -> impl Iterator<Item = (InvariantMonomial, Rational)> + '_ {
        InvariantMonomial::at_level(self.k).into_iter().map(|m| (m, self.get(m.r, m.s, m.t)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CoeffTable::new(self.k, self.entries.iter().map(|(m, v)| (*m, v * c))).unwrap()
    }

    /// Rescaled so that `c_{0,k,0} = 1`, or `None` if that entry vanishes.
    pub fn normalized(&self) -> Option<Self> {
        let pivot = self.get(0, self.k, 0);
        (!pivot.is_zero()).then(|| self.scale(&(Rational::one() / pivot)))
    }

    /// `Some(c)` with `self = c · other`, if such a scalar exists.
    pub fn ratio_to(&self, other: &CoeffTable) -> Option<Rational> {
        if self.k != other.k {
            return None;
        }
        let (m, b) = match other.entries.iter().next() {
            Some(first) => first,
            None => return self.is_zero().then(Rational::zero),
        };
        let c = self.get(m.r, m.s, m.t) / b;
        (self == &other.scale(&c)).then_some(c)
    }

    pub fn to_poly(&self, sig: Signature) -> SymbolPoly {
        self.entries.iter().fold(SymbolPoly::zero(sig.dimension()), |acc, (m, c)| acc + m.to_poly(sig).scale(c))
    }
}

/// A candidate `B_2k` together with the spaces it acts between.
///
/// The homogeneity lock `ν = λ + μ + 2k/n` is not enforced so that
/// non-invariant candidates can be represented and verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearOperator {
    pub ctx: BilinearContext,
    pub table: CoeffTable,
}

impl BilinearOperator {
    pub fn new(ctx: BilinearContext, table: CoeffTable) -> Self {
        BilinearOperator { ctx, table }
    }

    /// `B_2k` from the recurrences, normalized by `c_{0,k,0} = 1`, with the
    /// target weight set by homogeneity.
    pub fn construct(signature: Signature, k: usize, lambda: Weight, mu: Weight) -> Result<Self> {
        let n = signature.dimension();
        let table = solve_recurrence(k, n, lambda.value(), mu.value())?;
        let nu = target_weight(&lambda, &mu, k, n);
        Ok(BilinearOperator { ctx: BilinearContext::new(signature, lambda, mu, nu), table })
    }

    pub fn k(&self) -> usize {
        self.table.k()
    }

    pub fn homogeneity_holds(&self) -> bool {
        self.ctx.nu == target_weight(&self.ctx.lambda, &self.ctx.mu, self.k(), self.ctx.dimension())
    }

    pub fn symbol(&self) -> SymbolPoly {
        self.table.to_poly(self.ctx.signature)
    }

    pub fn to_json(&self) -> String {
        let doc = OperatorDoc {
            n: self.ctx.dimension(),
            signature: [self.ctx.signature.p(), self.ctx.signature.q()],
            lambda: self.ctx.lambda.to_string(),
            mu: self.ctx.mu.to_string(),
            nu: self.ctx.nu.to_string(),
            k: self.k(),
            coefficients: self
                .table
                .entries()
                .map(|(m, c)| CoeffDoc { r: m.r, s: m.s, t: m.t, c: format_rational(&c) })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("operator document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: OperatorDoc = serde_json::from_str(text)?;
        let signature = Signature::new(doc.signature[0], doc.signature[1])?;
        if signature.dimension() != doc.n {
            return Err(Error::Parse(format!(
                "n = {} does not match signature ({},{})",
                doc.n, doc.signature[0], doc.signature[1]
            )));
        }
        let entries = doc
            .coefficients
            .iter()
            .map(|c| Ok((InvariantMonomial::new(c.r, c.s, c.t), parse_rational(&c.c)?)))
            .collect::<Result<Vec<_>>>()?;
        let table = CoeffTable::new(doc.k, entries).map_err(|e| Error::Parse(e.to_string()))?;
        let ctx = BilinearContext::new(
            signature,
            Weight(parse_rational(&doc.lambda)?),
            Weight(parse_rational(&doc.mu)?),
            Weight(parse_rational(&doc.nu)?),
        );
        Ok(BilinearOperator { ctx, table })
    }

    /// `Σ c_{rst} R_{\xi\xi}^r R_{\xi\eta}^s R_{\eta\eta}^t` with fractions
    /// as `\frac`.
    pub fn to_latex(&self) -> String {
        table_latex(&self.table)
    }

    /// One aligned row per monomial.
    pub fn to_text(&self) -> String {
        table_text(&self.table)
    }
}

pub fn table_latex(table: &CoeffTable) -> String {
    let mut out = String::new();
    for (m, c) in table.entries.iter().rev() {
        let negative = c < &Rational::zero();
        let magnitude = if negative { -c } else { c.clone() };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors = Vec::new();
        for (name, e) in [("\\xi\\xi", m.r), ("\\xi\\eta", m.s), ("\\eta\\eta", m.t)] {
            match e {
                0 => {}
                1 => factors.push(format!("R_{{{name}}}")),
                _ => factors.push(format!("R_{{{name}}}^{{{e}}}")),
            }
        }
        if factors.is_empty() || !magnitude.is_one() {
            factors.insert(0, latex_rational(&magnitude));
        }
        out.push_str(&factors.join(" "));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn table_text(table: &CoeffTable) -> String {
    let rows: Vec<(String, InvariantMonomial)> = table.entries().map(|(m, c)| (format_rational(&c), m)).collect();
    let width = rows.iter().map(|(c, _)| c.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (c, m) in rows {
        writeln!(out, "{c:>width$}  Rxx^{} Rxe^{} Ree^{}", m.r, m.s, m.t).unwrap();
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct OperatorDoc {
    n: usize,
    signature: [usize; 2],
    lambda: String,
    mu: String,
    nu: String,
    k: usize,
    coefficients: Vec<CoeffDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CoeffDoc {
    r: usize,
    s: usize,
    t: usize,
    c: String,
}

/// `ν = λ + μ + 2k/n`.
pub fn target_weight(lambda: &Weight, mu: &Weight, k: usize, n: usize) -> Weight {
    Weight(lambda.value() + mu.value() + Rational::new((2 * k).into(), n.into()))
}

/// Fails on the first vanishing denominator the recurrence needs:
/// `2j + n(2λ-1)` and `2j + n(2μ-1)` for `j = 1..=k`.
pub fn check_resonance(k: usize, n: usize, lambda: &Rational, mu: &Rational) -> Result<()> {
    for (name, w, symbol) in [("lambda", lambda, "λ"), ("mu", mu, "μ")] {
        let shift = shifted(n, w);
        for level in 0..k {
            let j = 2 * (level + 1);
            if (from_usize(j) + &shift).is_zero() {
                return Err(Error::ResonantWeight {
                    factor: format!("{j}+n(2{symbol}-1)"),
                    weight: name,
                    value: Box::new(w.clone()),
                    level,
                });
            }
        }
    }
    Ok(())
}

struct Recurrence<'a> {
    n: Rational,
    lambda: &'a Rational,
    mu: &'a Rational,
    lam_shift: Rational,
    mu_shift: Rational,
}

impl Recurrence<'_> {
    fn lookup(c: &BTreeMap<(usize, usize, usize), Rational>, r: isize, s: isize, t: isize) -> Rational {
        if r < 0 || s < 0 || t < 0 {
            return Rational::zero();
        }
        c.get(&(r as usize, s as usize, t as usize)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Returns `(a, rest)` such that the first equation at `(r,s,t)` reads
    /// `a · c_{r+1,s,t} + rest = 0`.
    fn first(
        &self,
        c: &BTreeMap<(usize, usize, usize), Rational>,
        r: usize,
        s: usize,
        t: usize,
    ) -> (Rational, Rational) {
        let (ri, si, ti) = (r as isize, s as isize, t as isize);
        let (r1, s1, s2) = (from_usize(r + 1), from_usize(s + 1), from_usize(s + 2));
        let a = int(2) * &r1 * (int(2) * &r1 + &self.lam_shift);
        let rest = -(&s2 * &s1) * Self::lookup(c, ri, si + 2, ti - 1)
            + int(2) * &s1 * (from_usize(s + 2 * t) + &self.n * self.mu) * Self::lookup(c, ri, si + 1, ti);
        (a, rest)
    }

    /// Same for the second equation and `c_{r,s,t+1}`.
    fn second(
        &self,
        c: &BTreeMap<(usize, usize, usize), Rational>,
        r: usize,
        s: usize,
        t: usize,
    ) -> (Rational, Rational) {
        let (ri, si, ti) = (r as isize, s as isize, t as isize);
        let (t1, s1, s2) = (from_usize(t + 1), from_usize(s + 1), from_usize(s + 2));
        let a = int(2) * &t1 * (int(2) * &t1 + &self.mu_shift);
        let rest = -(&s2 * &s1) * Self::lookup(c, ri - 1, si + 2, ti)
            + int(2) * &s1 * (from_usize(s + 2 * r) + &self.n * self.lambda) * Self::lookup(c, ri, si + 1, ti);
        (a, rest)
    }
}

/// Solves the two recurrences with `c_{0,k,0} = 1`.
///
/// The top row `r = 0` comes from the second equation, every later row from
/// the first; afterwards every instance of both equations is re-checked.
pub fn solve_recurrence(k: usize, n: usize, lambda: &Rational, mu: &Rational) -> Result<CoeffTable> {
    check_resonance(k, n, lambda, mu)?;
    let rec = Recurrence { n: from_usize(n), lambda, mu, lam_shift: shifted(n, lambda), mu_shift: shifted(n, mu) };
    let mut c: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
    c.insert((0, k, 0), Rational::one());
    for t in 0..k {
        let s = k - 1 - t;
        let (a, rest) = rec.second(&c, 0, s, t);
        c.insert((0, s, t + 1), -rest / a);
    }
    for r in 0..k {
        for t in 0..k - r {
            let s = k - 1 - r - t;
            let (a, rest) = rec.first(&c, r, s, t);
            c.insert((r + 1, s, t), -rest / a);
        }
    }

    for m in InvariantMonomial::at_level(k.saturating_sub(1)).into_iter().filter(|_| k > 0) {
        let (r, s, t) = (m.r, m.s, m.t);
        let (a1, rest1) = rec.first(&c, r, s, t);
        let (a2, rest2) = rec.second(&c, r, s, t);
        let lhs1 = a1 * Recurrence::lookup(&c, r as isize + 1, s as isize, t as isize) + rest1;
        let lhs2 = a2 * Recurrence::lookup(&c, r as isize, s as isize, t as isize + 1) + rest2;
        if !lhs1.is_zero() || !lhs2.is_zero() {
            return Err(Error::InconsistentSystem(format!("(r,s,t) = ({r},{s},{t})")));
        }
    }

    CoeffTable::new(k, c.into_iter().map(|((r, s, t), v)| (InvariantMonomial::new(r, s, t), v)))
}

/// The explicit second- and fourth-order operators, scaled to have
/// polynomial coefficients: `c_{0,1,0} = -(2+n(2μ-1))(2+n(2λ-1))` and
/// `c_{0,2,0} = -(2+n(2λ-1))(2+n(2μ-1))(4+n(2λ-1))(4+n(2μ-1))`.
pub fn closed_form(k: usize, n: usize, lambda: &Rational, mu: &Rational) -> Result<CoeffTable> {
    let nn = from_usize(n);
    let nl = &nn * lambda;
    let nm = &nn * mu;
    let l2 = int(2) + shifted(n, lambda);
    let m2 = int(2) + shifted(n, mu);
    let l4 = int(4) + shifted(n, lambda);
    let m4 = int(4) + shifted(n, mu);
    let one = Rational::one();
    let m = InvariantMonomial::new;
    match k {
        1 => CoeffTable::new(1, [(m(1, 0, 0), &nm * &m2), (m(0, 1, 0), -(&m2 * &l2)), (m(0, 0, 1), &nl * &l2)]),
        2 => {
            let outer = &l4 * &m4;
            let mixed = &l2 + int(2) * (&one + &nm) * (int(2) + &nl) + &m2 + int(2) * (&one + &nl) * (int(2) + &nm);
            CoeffTable::new(
                2,
                [
                    (m(0, 2, 0), -(&l2 * &m2 * &outer)),
                    (m(1, 1, 0), int(2) * (&one + &nm) * &m2 * &outer),
                    (m(0, 1, 1), int(2) * (&one + &nl) * &l2 * &outer),
                    (m(1, 0, 1), -(mixed * &outer) / int(2)),
                    (m(2, 0, 0), -((&one + &nm) * &m2 * &nm * &m4)),
                    (m(0, 0, 2), -((&one + &nl) * &l2 * &nl * &l4)),
                ],
            )
        }
        _ => Err(Error::ContractViolation(format!("closed forms exist for k = 1, 2 only, got {k}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    /// `c_{i,k-i,0}`
    Xi,
    /// `c_{0,k-i,i}`
    Eta,
}

/// Product formula for the boundary coefficients, normalized by
/// `c_{0,k,0} = 1`:
/// `c_{i,k-i,0} = (-1)^i C(k,i) Π_{j=1..i} (k-j+nμ) / Π_{j=1..i} (2j+n(2λ-1))`,
/// and the mirror image for the `η` edge.
pub fn edge_coefficient(
    k: usize,
    i: usize,
    edge: Edge,
    n: usize,
    lambda: &Rational,
    mu: &Rational,
) -> Result<Rational> {
    if i > k {
        return Err(Error::ContractViolation(format!("edge index {i} exceeds k = {k}")));
    }
    let (num_w, den_w, den_name, den_symbol) = match edge {
        Edge::Xi => (mu, lambda, "lambda", "λ"),
        Edge::Eta => (lambda, mu, "mu", "μ"),
    };
    let nn = from_usize(n);
    let shift = shifted(n, den_w);
    let mut value = binomial(&from_usize(k), i);
    if i % 2 == 1 {
        value = -value;
    }
    for j in 1..=i {
        let den = from_usize(2 * j) + &shift;
        if den.is_zero() {
            return Err(Error::ResonantWeight {
                factor: format!("{}+n(2{den_symbol}-1)", 2 * j),
                weight: den_name,
                value: Box::new(den_w.clone()),
                level: j - 1,
            });
        }
        value *= from_usize(k - j) + &nn * num_w;
        value /= den;
    }
    Ok(value)
}

/// Applies every generator to the operator's symbol.
pub fn verify_invariance(op: &BilinearOperator) -> Result<InvarianceReport> {
    let symbol = op.symbol();
    report(op.ctx.signature, |g| act_bilinear(g, &op.ctx, &symbol))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearClassification {
    pub basis: Vec<CoeffTable>,
}

impl BilinearClassification {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of the generator action on the span of all `R^{r,s,t}` with
/// `r + s + t <= k_max`, by exact row reduction. No division by weight
/// dependent factors happens, so resonant weights are allowed.
pub fn classify_bilinear(ctx: &BilinearContext, k_max: usize) -> Result<BilinearClassification> {
    let sig = ctx.signature;
    let unknowns: Vec<InvariantMonomial> = (0..=k_max).flat_map(InvariantMonomial::at_level).collect();
    let generators = Generator::all(sig);
    let images = unknowns
        .par_iter()
        .map(|m| {
            let p = m.to_poly(sig);
            generators.iter().map(|g| act_bilinear(g, ctx, &p)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel = linalg::nullspace(unknowns.len(), linalg::rows_from_images(&images));

    let basis = kernel
        .into_iter()
        .map(|v| {
            let entries: Vec<(InvariantMonomial, Rational)> =
                unknowns.iter().copied().zip(v).filter(|(_, c)| !c.is_zero()).collect();
            let k = entries[0].0.level();
            let table = CoeffTable::new(k, entries)
                .map_err(|_| Error::ContractViolation("kernel vector mixes homogeneity levels".into()))?;
            Ok(table.normalized().unwrap_or(table))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BilinearClassification { basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::GeneratorKind;
    use crate::rational::rat;

    fn im(r: usize, s: usize, t: usize) -> InvariantMonomial {
        InvariantMonomial::new(r, s, t)
    }

    #[test]
    fn target_weights() {
        let w = |r: Rational| Weight(r);
        assert_eq!(target_weight(&w(int(0)), &w(int(0)), 0, 2), w(int(0)));
        assert_eq!(target_weight(&w(rat(1, 5)), &w(rat(1, 7)), 1, 2), w(rat(47, 35)));
        assert_eq!(target_weight(&w(rat(1, 3)), &w(rat(1, 3)), 3, 3), w(rat(8, 3)));
    }

    #[test]
    fn order_zero_is_multiplication() {
        let t = solve_recurrence(0, 3, &rat(1, 3), &rat(2, 5)).unwrap();
        assert_eq!(t, CoeffTable::new(0, [(im(0, 0, 0), int(1))]).unwrap());
    }

    #[test]
    fn first_order_table() {
        let t = solve_recurrence(1, 2, &rat(1, 4), &rat(1, 4)).unwrap();
        let expected =
            CoeffTable::new(1, [(im(0, 1, 0), int(1)), (im(1, 0, 0), rat(-1, 2)), (im(0, 0, 1), rat(-1, 2))]).unwrap();
        assert_eq!(t, expected);
    }

    #[test]
    fn resonant_lambda_is_reported() {
        let err = solve_recurrence(1, 2, &int(0), &rat(1, 4)).unwrap_err();
        match err {
            Error::ResonantWeight { factor, weight, level, .. } => {
                assert_eq!(factor, "2+n(2λ-1)");
                assert_eq!(weight, "lambda");
                assert_eq!(level, 0);
            }
            other => panic!("unexpected {other:?}"),
        }
        // λ = 1/2 is not resonant at n = 2.
        assert!(solve_recurrence(1, 2, &rat(1, 2), &rat(1, 4)).is_ok());
    }

    #[test]
    fn closed_form_examples() {
        let b2 = closed_form(1, 2, &rat(1, 4), &rat(1, 4)).unwrap();
        assert_eq!(
            b2,
            CoeffTable::new(1, [(im(1, 0, 0), rat(1, 2)), (im(0, 1, 0), int(-1)), (im(0, 0, 1), rat(1, 2))]).unwrap()
        );
        let solved = solve_recurrence(1, 2, &rat(1, 4), &rat(1, 4)).unwrap();
        assert_eq!(b2.ratio_to(&solved), Some(int(-1)));

        let b2 = closed_form(1, 2, &rat(1, 5), &rat(1, 7)).unwrap();
        assert_eq!(b2.get(1, 0, 0), rat(8, 49));
        assert_eq!(b2.get(0, 1, 0), rat(-16, 35));
        assert_eq!(b2.get(0, 0, 1), rat(8, 25));

        let sym = closed_form(1, 3, &rat(2, 7), &rat(2, 7)).unwrap();
        assert_eq!(sym.get(1, 0, 0), sym.get(0, 0, 1));
        assert!(closed_form(3, 2, &rat(1, 5), &rat(1, 7)).is_err());
    }

    #[test]
    fn edge_examples() {
        for edge in [Edge::Xi, Edge::Eta] {
            assert_eq!(edge_coefficient(3, 0, edge, 2, &rat(1, 5), &rat(1, 7)).unwrap(), int(1));
        }
        assert_eq!(edge_coefficient(1, 1, Edge::Xi, 2, &rat(1, 4), &rat(1, 4)).unwrap(), rat(-1, 2));
        assert_eq!(edge_coefficient(2, 1, Edge::Xi, 2, &rat(1, 5), &rat(1, 7)).unwrap(), rat(-45, 14));
        let solved = solve_recurrence(2, 2, &rat(1, 5), &rat(1, 7)).unwrap();
        assert_eq!(solved.get(1, 1, 0), rat(-45, 14));
        assert!(matches!(edge_coefficient(2, 1, Edge::Xi, 2, &int(0), &rat(1, 7)), Err(Error::ResonantWeight { .. })));
        assert!(edge_coefficient(2, 3, Edge::Eta, 2, &rat(1, 5), &rat(1, 7)).is_err());
    }

    #[test]
    fn verification_examples() {
        let s = Signature::euclidean(2);
        let op = BilinearOperator::construct(s, 1, Weight(rat(1, 4)), Weight(rat(1, 4))).unwrap();
        assert_eq!(op.ctx.nu, Weight(rat(3, 2)));
        assert!(verify_invariance(&op).unwrap().is_invariant());

        let mut bad = op.clone();
        bad.ctx.nu = Weight(rat(3, 2) + rat(1, 10));
        let report = verify_invariance(&bad).unwrap();
        assert!(!report.is_invariant());
        // nδ - 2k = 1/5 on the dilation.
        assert_eq!(report.residual_for(GeneratorKind::Dilation).unwrap(), &op.symbol().scale(&rat(1, 5)));

        let mult = BilinearOperator::new(
            BilinearContext::new(s, Weight(rat(2, 3)), Weight(rat(-1, 9)), Weight(rat(5, 9))),
            CoeffTable::new(0, [(im(0, 0, 0), int(1))]).unwrap(),
        );
        assert!(verify_invariance(&mult).unwrap().is_invariant());
    }

    #[test]
    fn classification_examples() {
        let s = Signature::euclidean(2);
        let (l, m) = (rat(1, 5), rat(1, 7));
        let ctx = |nu: Rational| BilinearContext::new(s, Weight(l.clone()), Weight(m.clone()), Weight(nu));
        let found = classify_bilinear(&ctx(&l + &m + int(1)), 2).unwrap();
        assert_eq!(found.dimension(), 1);
        let solved = solve_recurrence(1, 2, &l, &m).unwrap();
        assert_eq!(found.basis[0], solved);

        assert_eq!(classify_bilinear(&ctx(&l + &m + rat(1, 2)), 2).unwrap().dimension(), 0);
        let constants = classify_bilinear(&ctx(&l + &m), 2).unwrap();
        assert_eq!(constants.dimension(), 1);
        assert_eq!(constants.basis[0].k(), 0);
    }

    #[test]
    fn json_round_trip() {
        let op = BilinearOperator::construct(Signature::new(1, 1).unwrap(), 2, Weight(rat(1, 5)), Weight(rat(-2, 7)))
            .unwrap();
        let text = op.to_json();
        assert_eq!(BilinearOperator::from_json(&text).unwrap(), op);
        assert!(text.contains("\"signature\": [\n    1,\n    1\n  ]"));
    }

    #[test]
    fn json_rejects_inconsistent_documents() {
        let doc = r#"{"n":3,"signature":[2,0],"lambda":"1/4","mu":"1/4","nu":"3/2","k":1,"coefficients":[]}"#;
        assert!(BilinearOperator::from_json(doc).is_err());
        let doc = r#"{"n":2,"signature":[2,0],"lambda":"1/4","mu":"1/4","nu":"3/2","k":1,"coefficients":[{"r":1,"s":1,"t":0,"c":"1"}]}"#;
        assert!(BilinearOperator::from_json(doc).is_err());
        let doc = r#"{"n":2,"signature":[2,0],"lambda":"0.25","mu":"1/4","nu":"3/2","k":1,"coefficients":[]}"#;
        assert!(BilinearOperator::from_json(doc).is_err());
    }

    #[test]
    fn latex_and_text() {
        let zero = CoeffTable::new(0, [(im(0, 0, 0), int(1))]).unwrap();
        assert_eq!(table_latex(&zero), "1");
        let t = solve_recurrence(1, 2, &rat(1, 4), &rat(1, 4)).unwrap();
        assert_eq!(table_latex(&t), "-\\frac{1}{2} R_{\\xi\\xi} + R_{\\xi\\eta} - \\frac{1}{2} R_{\\eta\\eta}");
        let text = table_text(&t);
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.lines().next().unwrap(), "   1  Rxx^0 Rxe^1 Ree^0");
        assert!(text.contains("-1/2  Rxx^1 Rxe^0 Ree^0"));
    }
}
