//! Exact scalars: prime fields, rationals, extension fields for evaluation,
//! sparse polynomials and rational functions.

pub mod field;
pub mod fp;
pub mod gcd;
pub mod gf;
pub mod monomial;
pub mod polynomial;
pub mod ratfunc;
pub mod rational;

pub use field::{BaseField, FactoredTerm, Field, FieldKind, ScalarOver};
pub use fp::{Fp, M61};
pub use gcd::gcd;
pub use gf::{Gf, SUPPORTED_PRIMES};
pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use ratfunc::RationalFunction;
pub use rational::Rational;
