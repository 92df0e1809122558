//! Exact rational scalars.
//!
//! Every coefficient and density weight in the crate is a [`Rational`]. The
//! backing type keeps values in lowest terms with a positive denominator, so
//! structural equality is numerical equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Shorthand for `num / den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_usize(value: usize) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p/q` or a bare integer `p`. Decimal and exponent notation are
/// rejected: a weight written as `0.3333` would silently miss `1/3`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let valid = |s: &str, allow_sign: bool| {
        let digits = if allow_sign { s.strip_prefix(['-', '+']).unwrap_or(s) } else { s };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(bad());
    }
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// `p/q`, or just `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// LaTeX form: integers plain, fractions as `\frac{p}{q}` with the sign
/// pulled in front.
pub fn latex_rational(value: &Rational) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}\\frac{{{}}}{{{}}}", value.numer().abs(), value.denom())
}

/// Generalized binomial coefficient `C(a, i) = a (a-1) ... (a-i+1) / i!`.
pub fn binomial(a: &Rational, i: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 0..i {
        acc *= a - from_usize(j);
        acc /= from_usize(j + 1);
    }
    acc
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert!(parse_rational(" 2/-1 ").is_err());
        assert_eq!(parse_rational("+7/3").unwrap(), rat(7, 3));
    }

    #[test]
    fn rejects_decimals_and_zero_denominators() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("/2").is_err());
    }

    #[test]
    fn lowest_terms_with_positive_denominator() {
        let r = rat(4, -6);
        assert_eq!(r.numer(), &BigInt::from(-2));
        assert_eq!(r.denom(), &BigInt::from(3));
        assert_eq!(format_rational(&r), "-2/3");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn latex_fractions() {
        assert_eq!(latex_rational(&rat(-1, 2)), "-\\frac{1}{2}");
        assert_eq!(latex_rational(&int(3)), "3");
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(binomial(&int(5), 2), int(10));
        assert_eq!(binomial(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binomial(&int(2), 3), int(0));
        assert_eq!(binomial(&rat(-3, 1), 0), int(1));
    }
}
