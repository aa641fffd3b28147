//! Exact verification of higher-order Jensen and Wright convexity claims.
//!
//! Points live in the rational span of an abstract Hamel basis, functions are
//! built from additive functionals, and differences are computed without
//! rounding. The atomic-measure calculus in [`measures`] gives a second,
//! independent route to the same difference values.
//!
//! The core types are generic over an exact [`Scalar`]; the aliases below fix
//! it to arbitrary-precision rationals, which is what the verifier uses.

pub mod differences;
pub mod error;
pub mod functions;
pub mod hamel;
pub mod measures;
pub mod scalar;
pub mod verifier;

pub use error::{Error, Result};
pub use functions::ScalarKernel;
pub use hamel::{Basis, BasisSymbol};
pub use scalar::Scalar;

/// Arbitrary-precision rational numbers.
pub type Rational = num_rational::BigRational;
/// Machine-word rationals, for bounded workloads.
pub type SmallRational = num_rational::Rational64;

pub type Point = hamel::Point<Rational>;
pub type Increment = hamel::Increment<Rational>;
pub type AdditiveFunctional = hamel::AdditiveFunctional<Rational>;
pub type PointFunction = functions::PointFunction<Rational>;
pub type IncrementList = differences::IncrementList<Rational>;
pub type MeasureExpr = measures::MeasureExpr<Rational>;
pub type ASets = measures::ASets<Rational>;
