//! Quadrant signatures at the thirteen representative parameter pairs.

use fewroots_core::rational::rat;
use fewroots_core::Rational;
use serde::Serialize;

use crate::count::{count_roots_quadrants, CountOptions, QuadrantSignature};
use crate::error::HaasError;
use crate::system::HaasSystem;

pub type ReferenceRow = (usize, (i64, i64), (i64, i64), [usize; 4]);

/// `(region, a, b, printed signature)` for `d = 3`; `a` and `b` as
/// numerator/denominator pairs. The printed columns list the two mixed
/// quadrants in the opposite order to [`QuadrantSignature`]: with `a = -1`
/// the first equation reads `x^6 = y^3 + y`, so every root has `y >= 0`, yet
/// row 2 places its two extra roots in the fourth column.
pub const REFERENCE_ROWS: [ReferenceRow; 13] = [
    (1, (-1, 1), (-1, 1), [1, 0, 0, 0]),
    (2, (-1, 1), (5, 1), [1, 0, 0, 2]),
    (3, (5, 1), (-1, 1), [1, 2, 0, 0]),
    (4, (71, 50), (71, 50), [3, 0, 0, 0]),
    (5, (1, 1), (9, 1), [1, 0, 2, 2]),
    (6, (9, 1), (1, 1), [1, 2, 2, 0]),
    (7, (44, 31), (44, 31), [5, 0, 0, 0]),
    (8, (36, 25), (37, 25), [3, 0, 0, 2]),
    (9, (37, 25), (36, 25), [3, 2, 0, 0]),
    (10, (8, 5), (5, 2), [3, 0, 2, 2]),
    (11, (5, 2), (8, 5), [3, 2, 2, 0]),
    (12, (7, 4), (7, 4), [3, 2, 0, 2]),
    (13, (2, 1), (2, 1), [3, 2, 2, 2]),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub region: usize,
    #[serde(serialize_with = "crate::ser::rational")]
    pub a: Rational,
    #[serde(serialize_with = "crate::ser::rational")]
    pub b: Rational,
    /// The signature as printed, in the order `++, +-, --, -+`.
    pub printed: [usize; 4],
    /// The printed signature in the order of [`QuadrantSignature`].
    pub expected: QuadrantSignature,
    pub found: QuadrantSignature,
    pub certified_distinct: bool,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.expected == self.found && self.certified_distinct
    }
}

pub fn signature_table(opts: &CountOptions) -> Result<Vec<TableRow>, HaasError> {
    REFERENCE_ROWS
        .iter()
        .map(|&(region, (an, ad), (bn, bd), printed)| {
            let (a, b) = (rat(an, ad), rat(bn, bd));
            let rc = count_roots_quadrants(&HaasSystem::new(a.clone(), b.clone(), 3)?, opts)?;
            Ok(TableRow {
                region,
                a,
                b,
                printed,
                expected: QuadrantSignature(printed).swapped(),
                found: rc.signature,
                certified_distinct: rc.distinct,
            })
        })
        .collect()
}
