//! Exact computation of L-functions of toric exponential sums over finite
//! fields, for the Laurent family
//!
//! ```text
//! f(x_1, ..., x_{n+1}) = sum_i a_i x_{n+1} (x_i + 1/x_i) + a_{n+1} x_{n+1} + 1/x_{n+1}
//! ```
//!
//! together with the combinatorial side (Newton polyhedra, weight counts,
//! Hodge polygons), the Dwork-side Hasse minors reduced to the residue field,
//! and the closed-form Hasse polynomials of the slope <= 1 side.
//!
//! Everything that feeds a verdict is exact: cyclotomic integers carry
//! arbitrary-precision coordinates and valuations are exact rationals.

pub mod budget;
pub mod cyclo;
pub mod dwork;
pub mod error;
pub mod expsum;
pub mod ff;
pub mod lfun;
pub mod polygon;
pub mod polytope;
pub mod sing;

pub use budget::Budget;
pub use error::{Error, Result};

/// Exact rational used for weights, valuations and polygon vertices.
pub type Rational = num_rational::Ratio<i64>;
