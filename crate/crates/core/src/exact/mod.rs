//! Exact rational arithmetic and dense linear algebra.
//!
//! Everything that ends up in a certificate is computed here without any
//! floating-point fallback. Rank and nullspace come from fraction-free
//! (Bareiss) elimination over the integers after clearing row denominators.

mod matrix;
mod rational;

pub use matrix::{nullspace_exact, primitive_integer_vector, rank_exact, NullspaceResult, RationalMatrix};
pub use rational::Rational;

/// `num/den` as a reduced rational; errors on a zero denominator.
pub fn make_rational(num: i64, den: i64) -> crate::Result<Rational> {
    Rational::new(num, den)
}
