//! Exact computations in face rings of simplicial cycles with a linear
//! system of parameters on the moment curve: Artinian reductions, degree
//! maps, Gorenstein quotients and checks of anisotropy and Lefschetz
//! properties.
//!
//! All algebra is generic over a [`scalars::Field`]; the aliases below name
//! the concrete instantiations used in practice.

pub mod complex;
pub mod degree;
pub mod error;
mod jet;
pub mod linalg;
pub mod reduction;
pub mod scalars;
pub mod verify;

pub use error::{Error, Result};

pub use scalars::{Fp, Rational, RationalFunction};

/// The rationals.
pub type Q = Rational;
pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
/// `Q(t_1, ..., t_n, r)`.
pub type QFunction = RationalFunction<Rational>;
/// `F_2(t_1, ..., t_n, r)`.
pub type F2Function = RationalFunction<F2>;
/// `F_3(t_1, ..., t_n, r)`.
pub type F3Function = RationalFunction<F3>;
