//! The Haas family `H_(a,b,d)`: certified root counts per quadrant, the
//! signature table for `d = 3`, the geometry of the five-root chamber and
//! emptiness probes for `d = 1, 2`.

pub mod count;
pub mod e3;
pub mod error;
pub mod probe;
pub mod reduced;
mod ser;
pub mod system;
pub mod table;

pub use count::{count_roots_quadrants, CertifiedRoot, CountOptions, QuadrantSignature, RootCount, FIVE_POINTS};
pub use e3::{e3_from_atlas, e3_geometry, E3Geometry, E3Vertex, PolynomialCheck, ProbabilityBound, VertexKind};
pub use error::HaasError;
pub use probe::{bezout_probe, chamber_probe, emptiness_probe, ChamberSignature, ProbeReport};
pub use reduced::{monomial_check, MonomialCheck};
pub use system::HaasSystem;
pub use table::{signature_table, ReferenceRow, TableRow, REFERENCE_ROWS};
