//! Exact arithmetic: rationals, sparse polynomials in a, b, c, d, rational
//! functions, and the univariate toolkit used for elimination.

pub mod gcd;
pub mod numfield;
pub mod parse;
pub mod poly;
pub mod quadratic;
pub mod ratfunc;
pub mod resultant;
pub mod uni;

use thiserror::Error;

pub use poly::{var_index, Monomial, MultiPoly, NVARS, VAR_NAMES};
pub use quadratic::{abs_irreducible_quadratic, poly_sqrt, squarefree_multi, QuadraticVerdict};
pub use ratfunc::{det3, det3_poly, RationalFunction};
pub use resultant::resultant;
pub use uni::UniPoly;

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("input has degree zero in the elimination variable")]
    DegreeZero,
    #[error("degree {0} exceeds the supported bound")]
    DegreeTooHigh(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Real roots, all roots, and conjugation orbits of a squarefree polynomial.
pub fn root_census(m: &UniPoly) -> Result<(usize, usize, usize), AlgebraError> {
    let real = m.sturm_real_roots()?;
    let total = m.degree();
    let complex = total - real;
    debug_assert!(complex % 2 == 0);
    Ok((total, real, real + complex / 2))
}
