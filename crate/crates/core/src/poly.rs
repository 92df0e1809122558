//! Sparse multivariate polynomials over the rationals in the variables
//! `x^1..x^n`, `ξ_1..ξ_n`, `η_1..η_n`.
//!
//! A [`SymbolPoly`] is kept in canonical form at all times: a map from
//! [`Monomial`] to nonzero coefficient, ordered graded-lexicographically.
//! Two polynomials are equal exactly when their maps are identical, which is
//! what every invariance check in the crate ultimately reduces to.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, from_usize, parse_rational, Rational};

/// Variable family. The derived order `X < Xi < Eta` is the canonical one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    X,
    Xi,
    Eta,
}

impl Family {
    fn prefix(self) -> &'static str {
        match self {
            Family::X => "x",
            Family::Xi => "xi",
            Family::Eta => "eta",
        }
    }
}

/// A single variable. `x` carries an upper index, `ξ` and `η` lower ones;
/// indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub family: Family,
    pub index: usize,
}

impl Variable {
    pub const fn x(index: usize) -> Self {
        Variable { family: Family::X, index }
    }

    pub const fn xi(index: usize) -> Self {
        Variable { family: Family::Xi, index }
    }

    pub const fn eta(index: usize) -> Self {
        Variable { family: Family::Eta, index }
    }

    pub fn check(self, dimension: usize) -> Result<()> {
        if self.index == 0 || self.index > dimension {
            return Err(Error::IndexOutOfRange { index: self.index, dimension });
        }
        Ok(())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.prefix(), self.index)
    }
}

/// Power product with only the nonzero exponents stored, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Variable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs,
    /// merging repeats and dropping zero exponents.
    pub fn from_powers<I: IntoIterator<Item = (Variable, u32)>>(powers: I) -> Self {
        let mut map: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn powers(&self) -> &[(Variable, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn family_degree(&self, family: Family) -> u32 {
        self.0.iter().filter(|(v, _)| v.family == family).map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.0.binary_search_by(|(w, _)| w.cmp(&v)).map(|pos| self.0[pos].1).unwrap_or(0)
    }

    pub fn max_index(&self) -> usize {
        self.0.iter().map(|(v, _)| v.index).max().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }

    /// Every monomial in `vars` of total degree at most `max_degree`, in
    /// ascending canonical order.
    pub fn all_up_to(vars: &[Variable], max_degree: u32) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        for &v in vars {
            let mut next = Vec::new();
            for m in &out {
                for e in 0..=max_degree - m.degree() {
                    next.push(m.mul(&Monomial::from_powers([(v, e)])));
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    /// `∂/∂v` of the monomial as `(multiplicity, lowered monomial)`, or
    /// `None` when `v` does not occur.
    pub fn diff(&self, v: Variable) -> Option<(u32, Monomial)> {
        let pos = self.0.binary_search_by(|(w, _)| w.cmp(&v)).ok()?;
        let e = self.0[pos].1;
        let mut lowered = self.0.clone();
        if e == 1 {
            lowered.remove(pos);
        } else {
            lowered[pos].1 -= 1;
        }
        Some((e, Monomial(lowered)))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the first variable (in
    /// canonical order) where the exponents differ decides, larger exponent
    /// being the larger monomial.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (&(va, ea), &(vb, eb)) in self.0.iter().zip(other.0.iter()) {
                match va.cmp(&vb) {
                    // `self` has a positive exponent where `other` has none.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal if ea != eb => return ea.cmp(&eb),
                    Ordering::Equal => {}
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolPoly {
    dimension: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SymbolPoly {
    pub fn zero(dimension: usize) -> Self {
        SymbolPoly { dimension, terms: BTreeMap::new() }
    }

    pub fn one(dimension: usize) -> Self {
        Self::constant(dimension, Rational::one())
    }

    pub fn constant(dimension: usize, c: Rational) -> Self {
        Self::monomial(dimension, Monomial::one(), c)
    }

    /// `c · m`. Panics if `m` mentions an index beyond `dimension`.
    pub fn monomial(dimension: usize, m: Monomial, c: Rational) -> Self {
        assert!(m.max_index() <= dimension, "monomial {m} exceeds dimension {dimension}");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SymbolPoly { dimension, terms }
    }

    pub fn variable(dimension: usize, v: Variable) -> Result<Self> {
        v.check(dimension)?;
        Ok(Self::monomial(dimension, Monomial::var(v), Rational::one()))
    }

    pub fn x(dimension: usize, i: usize) -> Self {
        Self::variable(dimension, Variable::x(i)).expect("x index in range")
    }

    pub fn xi(dimension: usize, i: usize) -> Self {
        Self::variable(dimension, Variable::xi(i)).expect("xi index in range")
    }

    pub fn eta(dimension: usize, i: usize) -> Self {
        Self::variable(dimension, Variable::eta(i)).expect("eta index in range")
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms<I>(dimension: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Self::zero(dimension);
        for (m, c) in terms {
            assert!(m.max_index() <= dimension, "monomial {m} exceeds dimension {dimension}");
            p.add_term(m, c);
        }
        p
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn involves(&self, family: Family) -> bool {
        self.terms.keys().any(|m| m.family_degree(family) > 0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    fn check_same_dimension(&self, other: &Self) -> Result<()> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch { left: self.dimension, right: other.dimension });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dimension(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dimension(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dimension(other)?;
        let mut out = Self::zero(self.dimension);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dimension);
        }
        SymbolPoly { dimension: self.dimension, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    /// `self · m`, cheaper than a general product.
    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        SymbolPoly { dimension: self.dimension, terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.dimension);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative.
    pub fn diff(&self, v: Variable) -> Result<Self> {
        v.check(self.dimension)?;
        let mut out = Self::zero(self.dimension);
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.diff(v) {
                out.add_term(lowered, c * from_usize(e as usize));
            }
        }
        Ok(out)
    }

    /// Parses the text grammar `3/2*x1^2*xi2 - eta1`. Indices must lie in
    /// `1..=dimension`.
    pub fn parse(text: &str, dimension: usize) -> Result<Self> {
        Parser { src: text.as_bytes(), pos: 0, dimension }.poly()
    }
}

impl fmt::Display for SymbolPoly {
    /// Highest term first, in the same grammar [`SymbolPoly::parse`] reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let magnitude = c.abs();
            if m.is_one() {
                f.write_str(&format_rational(&magnitude))?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&magnitude))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a SymbolPoly> for &'a SymbolPoly {
    type Output = SymbolPoly;

    fn add(self, rhs: &'a SymbolPoly) -> SymbolPoly {
        self.checked_add(rhs).expect("polynomial dimensions agree")
    }
}

impl<'a> Sub<&'a SymbolPoly> for &'a SymbolPoly {
    type Output = SymbolPoly;

    fn sub(self, rhs: &'a SymbolPoly) -> SymbolPoly {
        self.checked_sub(rhs).expect("polynomial dimensions agree")
    }
}

impl<'a> Mul<&'a SymbolPoly> for &'a SymbolPoly {
    type Output = SymbolPoly;

    fn mul(self, rhs: &'a SymbolPoly) -> SymbolPoly {
        self.checked_mul(rhs).expect("polynomial dimensions agree")
    }
}

impl Add for SymbolPoly {
    type Output = SymbolPoly;

    fn add(mut self, rhs: SymbolPoly) -> SymbolPoly {
        self.check_same_dimension(&rhs).expect("polynomial dimensions agree");
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for SymbolPoly {
    type Output = SymbolPoly;

    fn sub(mut self, rhs: SymbolPoly) -> SymbolPoly {
        self.check_same_dimension(&rhs).expect("polynomial dimensions agree");
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
        self
    }
}

impl Mul for SymbolPoly {
    type Output = SymbolPoly;

    fn mul(self, rhs: SymbolPoly) -> SymbolPoly {
        &self * &rhs
    }
}

impl Neg for &SymbolPoly {
    type Output = SymbolPoly;

    fn neg(self) -> SymbolPoly {
        self.scale(&-Rational::one())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dimension: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of polynomial", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<u64> {
        let d = self.digits().ok_or_else(|| self.error("expected digits"))?;
        d.parse().map_err(|_| self.error("number too large"))
    }

    fn poly(&mut self) -> Result<SymbolPoly> {
        let mut out = SymbolPoly::zero(self.dimension);
        let mut negative = self.eat("-");
        if !negative {
            self.eat("+");
        }
        loop {
            let (m, mut c) = self.term()?;
            if negative {
                c = -c;
            }
            out.add_term(m, c);
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                Some(_) => return Err(self.error("expected '+' or '-'")),
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut coeff = Rational::one();
        let mut powers = Vec::new();
        let mut expect_factor = true;
        if let Some(numer) = self.digits() {
            let text = if self.eat("/") {
                let denom = self.digits().ok_or_else(|| self.error("expected denominator"))?;
                format!("{numer}/{denom}")
            } else {
                numer
            };
            coeff = parse_rational(&text)?;
            expect_factor = self.eat("*");
        }
        if expect_factor {
            loop {
                powers.push(self.factor()?);
                if !self.eat("*") {
                    break;
                }
            }
        }
        Ok((Monomial::from_powers(powers), coeff))
    }

    fn factor(&mut self) -> Result<(Variable, u32)> {
        // `xi` must be tried before `x`.
        let family = if self.eat("xi") {
            Family::Xi
        } else if self.eat("x") {
            Family::X
        } else if self.eat("eta") {
            Family::Eta
        } else {
            return Err(self.error("expected a variable x<i>, xi<i> or eta<i>"));
        };
        let index = self.number()? as usize;
        let v = Variable { family, index };
        v.check(self.dimension)?;
        let exp = if self.eat("^") { self.number()? as u32 } else { 1 };
        Ok((v, exp))
    }
}
