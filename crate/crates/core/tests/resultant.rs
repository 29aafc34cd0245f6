use fewroots_core::bipoly::{resultant, BiPoly, Var};
use fewroots_core::rational::int;
use fewroots_core::UniPoly;
use proptest::prelude::*;

fn lin(a: i64, b: i64, c: i64) -> BiPoly {
    // a*y + b*x + c
    BiPoly::from_terms([((0, 1), int(a)), ((1, 0), int(b)), ((0, 0), int(c))])
}

fn mul(p: &BiPoly, q: &BiPoly) -> BiPoly {
    let mut out = BiPoly::zero();
    for (&(i, j), c) in p.terms() {
        for (&(k, l), d) in q.terms() {
            out.add_term((i + k, j + l), c * d);
        }
    }
    out
}

/// gcd in y is nonconstant iff the specialisations at many x share a root.
fn share_factor_oracle(p: &BiPoly, q: &BiPoly) -> bool {
    (0..6).all(|x| {
        let a = p.specialize(Var::X, &int(x * 7 + 3));
        let b = q.specialize(Var::X, &int(x * 7 + 3));
        a.gcd(&b).degree().unwrap_or(0) > 0
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn resultant_vanishes_iff_common_factor(
        a in 1i64..4, b in -3i64..4, c in -3i64..4,
        d in 1i64..4, e in -3i64..4, f in -3i64..4,
        g in 1i64..4, h in -3i64..4, k in -3i64..4,
        share in any::<bool>(),
    ) {
        let common = lin(a, b, c);
        let p = mul(&common, &lin(d, e, f));
        let q = if share { mul(&common, &lin(g, h, k)) } else { mul(&lin(g, h, k), &lin(d, e + 5, f - 7)) };
        let r = resultant(&p, &q, Var::Y).unwrap();
        prop_assert_eq!(r.is_zero(), share_factor_oracle(&p, &q));
    }
}

#[test]
fn resultant_degree_of_two_conics() {
    // res_y(y^2 - x, y^2 + x - 2) = (2x - 2)^2 = 4x^2 - 8x + 4
    let p = BiPoly::from_terms([((0, 2), int(1)), ((1, 0), int(-1))]);
    let q = BiPoly::from_terms([((0, 2), int(1)), ((1, 0), int(1)), ((0, 0), int(-2))]);
    let r = resultant(&p, &q, Var::Y).unwrap();
    assert_eq!(r, UniPoly::from_ints(&[4, -8, 4]));
}
