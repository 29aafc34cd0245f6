//! Exact arithmetic substrate: rationals, integer and rational matrices,
//! univariate polynomials, Sturm real-root isolation, resultants, and two
//! flavours of enclosures (outward-rounded `f64` intervals and dyadic
//! rational intervals with certified `ln`/`exp`).

pub mod bipoly;
pub mod error;
pub mod exact_interval;
pub mod interval;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod sturm;

pub use bipoly::{BiPoly, Var};
pub use error::CoreError;
pub use exact_interval::ExactInterval;
pub use interval::Interval;
pub use matrix::{IntMatrix, RatMatrix};
pub use poly::UniPoly;
pub use rational::Rational;
pub use sturm::{IsolatingInterval, SturmSequence};
