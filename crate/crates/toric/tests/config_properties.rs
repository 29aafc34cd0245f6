use fewroots_core::rational::int;
use fewroots_core::Rational;
use fewroots_toric::{
    find_odd_cell, hornkap::curve_for, is_odd_cell, nullspace_sum_zero, parametrize, SupportConfig, ToricError,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

/// Simplex vertices plus two random points: always affinely generating.
fn config_strategy() -> impl Strategy<Value = SupportConfig> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(proptest::collection::vec(-5i64..=5, n), 2)))
        .prop_filter_map("distinct", |(n, extra)| {
            let mut pts = vec![vec![0; n]];
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = 1;
                pts.push(e);
            }
            pts.extend(extra);
            SupportConfig::new(n, pts).ok()
        })
}

fn unimodular(n: usize, seed: &[i64]) -> Vec<Vec<i64>> {
    // product of an upper and a lower unitriangular matrix
    let mut u = vec![vec![0i64; n]; n];
    let mut l = vec![vec![0i64; n]; n];
    let mut k = 0;
    for i in 0..n {
        u[i][i] = 1;
        l[i][i] = 1;
        for j in 0..n {
            if j > i {
                u[i][j] = seed[k % seed.len()];
                k += 1;
            }
            if j < i {
                l[i][j] = seed[k % seed.len()];
                k += 1;
            }
        }
    }
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|t| u[i][t] * l[t][j]).sum()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn normalize_is_idempotent(c in config_strategy()) {
        let a = c.normalize().unwrap();
        let b = a.normalize().unwrap();
        prop_assert_eq!(&a.points, &b.points);
        prop_assert_eq!(&a.points[0], &vec![0; c.n]);
    }

    #[test]
    fn nullspace_identities(c in config_strategy()) {
        let a = c.normalize().unwrap();
        let basis = nullspace_sum_zero(&a).unwrap();
        prop_assert_eq!(basis.len(), a.len() - a.n - 1);
        for u in &basis {
            let total: BigInt = u.iter().sum();
            prop_assert!(total.is_zero());
            for r in 0..a.n {
                let s: BigInt = u.iter().zip(&a.points).map(|(x, p)| x * BigInt::from(p[r])).sum();
                prop_assert!(s.is_zero());
            }
        }
        let fam = match parametrize(&a) {
            Ok(f) => f,
            Err(ToricError::DegenerateForm { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        for r in 0..a.n {
            let slope: Rational = fam.forms.iter().zip(&a.points).map(|(f, p)| &f.slope * int(p[r])).sum();
            let cst: Rational = fam.forms.iter().zip(&a.points).map(|(f, p)| &f.constant * int(p[r])).sum();
            prop_assert!(slope.is_zero() && cst.is_zero());
        }
    }

    #[test]
    fn exponent_rows_balance_with_odd_denominators(c in config_strategy()) {
        let a = c.normalize().unwrap();
        let curve = match curve_for(&a, None) {
            Ok(cv) => cv,
            Err(ToricError::DegenerateForm { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert!(is_odd_cell(&a, &curve.cell.indices));
        for j in 0..2 {
            let s: Rational = (0..a.len()).map(|i| curve.exponents[(j, i)].clone()).sum();
            prop_assert!(s.is_zero());
            for i in 0..a.len() {
                prop_assert!(curve.exponents[(j, i)].denom().is_odd());
            }
        }
    }

    #[test]
    fn exponent_data_invariant_under_unimodular_maps(c in config_strategy(), seed in proptest::collection::vec(-2i64..=2, 3), shift in proptest::collection::vec(-7i64..=7, 3)) {
        let n = c.n;
        let u = unimodular(n, &seed);
        let moved: Vec<Vec<i64>> = c.points.iter()
            .map(|p| (0..n).map(|i| (0..n).map(|j| u[i][j] * p[j]).sum::<i64>() + shift[i]).collect())
            .collect();
        let d = SupportConfig::new(n, moved).unwrap();
        let a = c.with_origin(0).unwrap();
        let b = d.with_origin(0).unwrap();
        let ca = find_odd_cell(&a).unwrap();
        let cb = find_odd_cell(&b).unwrap();
        prop_assert_eq!(&ca.indices, &cb.indices);
        prop_assert_eq!(&ca.exponent_block, &cb.exponent_block);
        prop_assert_eq!(nullspace_sum_zero(&a).unwrap(), nullspace_sum_zero(&b).unwrap());
    }
}
