//! The one-dimensional layer: transvectants and `f ↦ f^(k)`.
//!
//! On the line, `sl_2` acts on weight-`λ` densities through the generators
//! `d/dx`, `x d/dx`, `x² d/dx` by `L_X f = X f' + λ X' f`. The transvectant
//!
//! ```text
//! B_k(f, g) = Σ_{i+j=k} (-1)^i C(2μ+k-1, i) C(2λ+k-1, j) f^(i) g^(j)
//! ```
//!
//! maps `F_λ ⊗ F_μ → F_{λ+μ+k}` equivariantly, and `f ↦ f^(k)` maps
//! `F_{(1-k)/2} → F_{(1+k)/2}`. Odd orders exist here, unlike in higher
//! dimension, so this module does not reuse the `n`-dimensional engine.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::conformal::Weight;
use crate::rational::{binomial, format_rational, from_usize, int, Rational};

/// A univariate polynomial; `coefficients[i]` multiplies `x^i`.
///
/// Canonical: no trailing zeros, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly1D {
    coefficients: Vec<Rational>,
}

impl Poly1D {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Poly1D { coefficients }
    }

    pub fn zero() -> Self {
        Poly1D::default()
    }

    /// `c x^d`.
    pub fn monomial(d: usize, c: Rational) -> Self {
        let mut coefficients = vec![Rational::zero(); d + 1];
        coefficients[d] = c;
        Poly1D::new(coefficients)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Poly1D::new(self.coefficients.iter().enumerate().skip(1).map(|(i, c)| c * from_usize(i)).collect())
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Poly1D::new(self.coefficients.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coefficients.len().max(other.coefficients.len());
        let at = |p: &Poly1D, i: usize| p.coefficients.get(i).cloned().unwrap_or_else(Rational::zero);
        Poly1D::new((0..len).map(|i| at(self, i) + at(other, i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly1D::zero();
        }
        let mut out = vec![Rational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly1D::new(out)
    }

    /// Multiplication by `x^d`.
    pub fn shift(&self, d: usize) -> Self {
        if self.is_zero() {
            return Poly1D::zero();
        }
        let mut coefficients = vec![Rational::zero(); d];
        coefficients.extend(self.coefficients.iter().cloned());
        Poly1D::new(coefficients)
    }
}

impl fmt::Display for Poly1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = if c < &Rational::zero() { -c } else { c.clone() };
            match (first, c < &Rational::zero()) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = magnitude.is_one();
            match d {
                0 => write!(f, "{}", format_rational(&magnitude))?,
                _ if unit => {}
                _ => write!(f, "{}*", format_rational(&magnitude))?,
            }
            match d {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

/// `[a_0, …, a_k]` where `a_i` multiplies `f^(i) g^(k-i)`.
pub fn transvectant_coefficients(k: usize, lambda: &Weight, mu: &Weight) -> Vec<Rational> {
    let top = |w: &Weight| w.value() * int(2) + from_usize(k) - int(1);
    let (a, b) = (top(mu), top(lambda));
    (0..=k)
        .map(|i| {
            let sign = if i % 2 == 0 { int(1) } else { int(-1) };
            sign * binomial(&a, i) * binomial(&b, k - i)
        })
        .collect()
}

/// `B_k(f, g)`, of weight `λ + μ + k`.
pub fn apply_transvectant(k: usize, lambda: &Weight, mu: &Weight, f: &Poly1D, g: &Poly1D) -> Poly1D {
    transvectant_coefficients(k, lambda, mu)
        .iter()
        .enumerate()
        .fold(Poly1D::zero(), |acc, (i, c)| acc.add(&f.nth_derivative(i).mul(&g.nth_derivative(k - i)).scale(c)))
}

/// `d/dx`, `x d/dx`, `x² d/dx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sl2Generator {
    Translation,
    Dilation,
    Inversion,
}

impl Sl2Generator {
    pub const ALL: [Sl2Generator; 3] = [Sl2Generator::Translation, Sl2Generator::Dilation, Sl2Generator::Inversion];

    /// Degree `d` of the field `x^d d/dx`.
    fn power(self) -> usize {
        match self {
            Sl2Generator::Translation => 0,
            Sl2Generator::Dilation => 1,
            Sl2Generator::Inversion => 2,
        }
    }

    /// `X f' + λ X' f`.
    pub fn lie_derivative(self, lambda: &Weight, f: &Poly1D) -> Poly1D {
        let d = self.power();
        let transport = f.derivative().shift(d);
        if d == 0 {
            return transport;
        }
        transport.add(&f.shift(d - 1).scale(&(lambda.value() * from_usize(d))))
    }
}

impl fmt::Display for Sl2Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sl2Generator::Translation => "d/dx",
            Sl2Generator::Dilation => "x d/dx",
            Sl2Generator::Inversion => "x^2 d/dx",
        })
    }
}

/// Nonzero invariance defect on one pair of test monomials. `g` is `None`
/// for the linear check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Residual {
    pub generator: Sl2Generator,
    pub f: Poly1D,
    pub g: Option<Poly1D>,
    pub residual: Poly1D,
}

fn test_monomials(degree: usize) -> Vec<Poly1D> {
    (0..=degree).map(|d| Poly1D::monomial(d, int(1))).collect()
}

/// Defects of `B_k` against `ν = λ + μ + k` over monomial pairs of degree
/// `<= 2k + 2`. Empty means invariant.
pub fn sl2_residual(k: usize, lambda: &Weight, mu: &Weight) -> Vec<Sl2Residual> {
    let nu = Weight(lambda.value() + mu.value() + from_usize(k));
    let b = |f: &Poly1D, g: &Poly1D| apply_transvectant(k, lambda, mu, f, g);
    let test = test_monomials(2 * k + 2);
    let mut out = Vec::new();
    for generator in Sl2Generator::ALL {
        for f in &test {
            for g in &test {
                let residual = generator
                    .lie_derivative(&nu, &b(f, g))
                    .sub(&b(&generator.lie_derivative(lambda, f), g))
                    .sub(&b(f, &generator.lie_derivative(mu, g)));
                if !residual.is_zero() {
                    out.push(Sl2Residual { generator, f: f.clone(), g: Some(g.clone()), residual });
                }
            }
        }
    }
    out
}

/// Defects of `f ↦ f^(k)` from weight `lambda` to `λ + k`, over monomials of
/// degree `<= 2k + 2`. The target weight is the one forced by the dilation.
pub fn sl2_linear_residual(k: usize, lambda: &Weight) -> Vec<Sl2Residual> {
    let mu = Weight(lambda.value() + from_usize(k));
    let mut out = Vec::new();
    for generator in Sl2Generator::ALL {
        for f in test_monomials(2 * k + 2) {
            let residual = generator
                .lie_derivative(&mu, &f.nth_derivative(k))
                .sub(&generator.lie_derivative(lambda, &f).nth_derivative(k));
            if !residual.is_zero() {
                out.push(Sl2Residual { generator, f, g: None, residual });
            }
        }
    }
    out
}

/// `((1 - k)/2, (1 + k)/2)`.
pub fn derivative_weights(k: usize) -> (Weight, Weight) {
    let k = from_usize(k);
    (Weight((int(1) - &k) / int(2)), Weight((int(1) + k) / int(2)))
}
