//! Point configurations in `Z^n` and the one-parameter reduced discriminant
//! curve attached to configurations with `m = n + 3` points.
//!
//! The pipeline is `SupportConfig::normalize` (or `with_origin`), then
//! `find_odd_cell`, `parametrize` and `reduced_curve`. The resulting
//! [`ReducedCurve`] is what the chamber machinery consumes.

pub mod cell;
pub mod error;
pub mod hornkap;
pub mod hull;
pub mod supports;

pub use cell::{find_odd_cell, is_odd_cell, OddCell};
pub use error::ToricError;
pub use hornkap::{
    curve_for, evaluate_psi, evaluate_psi_schedule, integer_exponents, log_derivative_poly, nullspace_sum_zero,
    parametrize, reduced_curve, saturated_nullspace, CurvePoint, LinearForm, LinearFormFamily, ProjectiveParam,
    ReducedCurve,
};
pub use hull::{genericity_check, Facet, FacetReport};
pub use supports::{cayley_embed, CayleyConfig, SupportConfig};
