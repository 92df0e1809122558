//! Exact construction, classification and verification of conformally
//! invariant linear and bilinear differential operators on tensor densities
//! over flat `R^{p,q}`.
//!
//! Everything is computed over the rationals, so "invariant" means a
//! polynomial identity that holds exactly. The crate is organized bottom-up:
//!
//! - [`rational`], [`poly`], [`linalg`]: exact scalars, sparse polynomials in
//!   `x, ξ, η`, and sparse row reduction.
//! - [`conformal`]: signature, density weights, the generators of
//!   `o(p+1, q+1)` and their Lie derivative on densities.
//! - [`action`]: the generator action on operator symbols.
//! - [`linear`] and [`bilinear`]: the powers of the Laplacian and the
//!   bilinear family `B_2k`, with solvers and classifiers.
//! - [`oracle`]: an independent check that applies operators to actual
//!   polynomial densities.
//! - [`transvectant`]: the one-dimensional `sl_2` layer.
//! - [`cli`]: the `conformal` command-line tool.

pub mod action;
pub mod bilinear;
pub mod cli;
pub mod conformal;
pub mod error;
pub mod linalg;
pub mod linear;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod transvectant;

pub use action::{act_bilinear, act_linear, BilinearContext, InvarianceReport, LinearContext};
pub use bilinear::{BilinearOperator, CoeffTable};
pub use conformal::{Generator, GeneratorKind, InvariantMonomial, Signature, Weight};
pub use error::{Error, Result};
pub use poly::{Family, Monomial, SymbolPoly, Variable};
pub use rational::Rational;
