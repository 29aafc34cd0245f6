//! Critical points of the reduced discriminant curve and the chambers of its
//! complement: breakpoint limits, vertical tangents and cusps, certified
//! nodes, a strip decomposition of each open quadrant, and the counting
//! bounds that the critical-point method yields.

pub mod atlas;
pub mod bounds;
pub mod chart;
pub mod critical;
pub mod error;
pub mod isolated;
pub mod nodes;
pub mod sample;
mod ser;
pub mod shear;
mod special;

pub use atlas::{
    build_atlas, quadrant_label, AtlasOptions, Chamber, ChamberAtlas, LineKind, QuadrantCensus, Side, Strip, StripLine,
};
pub use bounds::{
    bound_report, diffeotopy_bound, diffeotopy_cap, feature_bounds, shear_bound, shear_bound_univariate, BoundReport,
    Enclosure, FeatureBounds, Variant,
};
pub use chart::{Breakpoint, Cell, ChartedCurve, Combo, LimitKind};
pub use critical::{
    axis_intersections, cusp_polynomial, cusps, vertical_tangents, AxisHit, CriticalSet, FeatureCounts, VerticalTangent,
};
pub use error::{ChamberError, ChartBox};
pub use isolated::{isolated_point_candidates, IsolatedCandidate};
pub use nodes::{nodes, Node, NodeOptions, NodeReport};
pub use sample::{sample_curve, Polyline};
pub use shear::{AffineForm, ShearSystem};

#[cfg(test)]
pub(crate) mod testing {
    use fewroots_toric::{curve_for, ReducedCurve, SupportConfig};

    pub fn haas() -> ReducedCurve {
        let c = SupportConfig::new(
            3,
            vec![vec![6, 0, 0], vec![0, 3, 0], vec![0, 1, 0], vec![0, 6, 1], vec![3, 0, 1], vec![1, 0, 1]],
        )
        .unwrap()
        .with_origin(0)
        .unwrap();
        curve_for(&c, Some(&[2, 3, 5])).unwrap()
    }
}
