use fewroots_certify::{gamma_upper, SparsePoly, SparseSystem};
use fewroots_core::rational::{int, rat, to_f64};
use proptest::prelude::*;

proptest! {
    /// In one variable the tensor bound is exact, so it must dominate the
    /// hand formula `max_k |f^(k)(z) / (k! f'(z))|^(1/(k-1))`.
    #[test]
    fn gamma_bound_dominates_univariate_gamma(c in proptest::collection::vec(-9i64..=9, 4), zn in -30i64..=30) {
        prop_assume!(c[3] != 0 || c[2] != 0);
        let f = SparseSystem::new(1, vec![SparsePoly::new((0..4).map(|k| (vec![k as u32], int(c[k]))).collect())]).unwrap();
        let z = rat(zn, 7);
        let zf = to_f64(&z);
        let d1 = c[1] as f64 + 2.0 * c[2] as f64 * zf + 3.0 * c[3] as f64 * zf * zf;
        prop_assume!(d1.abs() > 1e-6);
        let t2 = (c[2] as f64 + 3.0 * c[3] as f64 * zf) / d1;
        let t3 = c[3] as f64 / d1;
        let g = t2.abs().max(t3.abs().sqrt());
        let ub = gamma_upper(&f, &[z]).unwrap();
        prop_assert!(ub >= g * (1.0 - 1e-12), "{} < {}", ub, g);
        prop_assert!(ub <= g * (1.0 + 1e-9) + 1e-300);
    }
}
