//! Alpha-theory certification of approximate roots.
//!
//! Points are exact rationals and every comparison against the `0.03`
//! threshold is done in exact arithmetic on squared quantities, so a
//! certificate never depends on floating-point rounding. The reported
//! floating values (`beta`, `gamma_ub`, ...) are rounded upward.

pub mod alpha;
pub mod error;
pub mod haas_fast;
pub mod system;

pub use alpha::{beta, certify_distinct, certify_point, gamma_upper, newton_iterates, newton_step, AlphaCertificate};
pub use error::CertifyError;
pub use haas_fast::{haas_fast_alpha, haas_fast_alpha_with};
pub use system::{SparsePoly, SparseSystem};
