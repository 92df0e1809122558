#![allow(dead_code)]

use conformal_core::rational::rat;
use conformal_core::{Family, Monomial, Rational, Signature, SymbolPoly, Variable, Weight};
use proptest::prelude::*;

pub fn signatures() -> impl Strategy<Value = Signature> {
    prop_oneof![
        Just(Signature::new(1, 0).unwrap()),
        Just(Signature::new(2, 0).unwrap()),
        Just(Signature::new(1, 1).unwrap()),
        Just(Signature::new(3, 0).unwrap()),
        Just(Signature::new(2, 1).unwrap()),
    ]
}

pub fn rationals() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(a, b)| rat(a, b))
}

pub fn weights() -> impl Strategy<Value = Weight> {
    rationals().prop_map(Weight)
}

/// Sparse polynomials in the given families, degree `<= max_degree`.
pub fn polys(n: usize, families: &'static [Family], max_degree: u32) -> impl Strategy<Value = SymbolPoly> {
    let vars: Vec<Variable> =
        families.iter().flat_map(|&family| (1..=n).map(move |index| Variable { family, index })).collect();
    let pool = Monomial::all_up_to(&vars, max_degree);
    prop::collection::vec((prop::sample::select(pool), rationals()), 0..5)
        .prop_map(move |terms| SymbolPoly::from_terms(n, terms))
}

pub const X: &[Family] = &[Family::X];
pub const X_XI: &[Family] = &[Family::X, Family::Xi];
pub const ALL: &[Family] = &[Family::X, Family::Xi, Family::Eta];
