//! Exact decision engine for uniform nondivergence of `H = A·M` acting on
//! arithmetic quotients of products of `SL_n` factors.

pub mod cli;
pub mod config;
pub mod criterion;
pub mod linalg;
pub mod probe;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod weyl;
pub mod witness;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact rational scalar used on every decision path.
pub type Rational = BigRational;
pub type RatMatrix = linalg::Matrix<Rational>;
pub type RealMatrix = linalg::Matrix<f64>;
pub type RatSubspace = linalg::Subspace<Rational>;
