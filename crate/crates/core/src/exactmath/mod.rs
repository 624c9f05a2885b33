//! Exact scalars and linear algebra.
//!
//! Two scalar fields are used throughout: [`Rational`] and [`RatFunc`], the
//! field of rational functions over ℚ in named parameters. Both implement
//! [`Field`], and every algorithm above this module is generic over it.

mod matrix;
mod parse;
mod poly;
mod rational;
mod ratfunc;
mod univariate;

use std::fmt;

pub use matrix::{
    kernel_basis, rank, solve_linear, Echelon, IncrementalEchelon, LinearSolver, Matrix, Solution,
    Strategy,
};
pub use parse::parse_ratfunc;
pub use poly::{var_index, var_name, Monomial, MultiPoly, MAX_VARS};
pub use rational::Rational;
pub use ratfunc::RatFunc;
pub use univariate::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MathError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at specialization: denominator {0} vanishes")]
    Pole(String),
    #[error("inexact polynomial division")]
    NotExact,
    #[error("gcd of two zero polynomials")]
    GcdOfZeros,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("too many polynomial variables (limit {0})")]
    TooManyVariables(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Exact field interface shared by ℚ and ℚ(params).
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, MathError>;
    fn div(&self, o: &Self) -> Result<Self, MathError> {
        Ok(self.mul(&o.inv()?))
    }
    fn from_rational(q: &Rational) -> Self;
    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::integer(n))
    }
    /// The value as a rational constant, if it is one.
    fn as_rational(&self) -> Option<Rational>;
    /// Rough size of the representation, used to pick cheap pivots.
    fn cost(&self) -> usize;
}

/// `acc += a * b` without intermediate clones when `a` or `b` is zero.
pub fn add_mul<F: Field>(acc: &mut F, a: &F, b: &F) {
    if a.is_zero() || b.is_zero() {
        return;
    }
    *acc = acc.add(&a.mul(b));
}

/// Scalars into which the field `F` embeds; lets operators built over ℚ act
/// on vectors with coefficients in ℚ(params).
pub trait Embed<F: Field>: Field {
    fn embed(x: &F) -> Self;
}

impl<F: Field> Embed<F> for F {
    fn embed(x: &F) -> Self {
        x.clone()
    }
}

impl Embed<Rational> for RatFunc {
    fn embed(x: &Rational) -> Self {
        RatFunc::from_rational(x)
    }
}

/// `m · v` for an operator over `F` and a vector over `G ⊇ F`.
pub fn apply<F: Field, G: Embed<F>>(m: &Matrix<F>, v: &[G]) -> Vec<G> {
    (0..m.rows())
        .map(|i| {
            let mut acc = G::zero();
            for (j, x) in v.iter().enumerate() {
                let c = m.get(i, j);
                if !c.is_zero() && !x.is_zero() {
                    acc = acc.add(&G::embed(c).mul(x));
                }
            }
            acc
        })
        .collect()
}
