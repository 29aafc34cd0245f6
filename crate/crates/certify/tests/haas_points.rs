use fewroots_certify::alpha::{halving_holds, newton_iterates};
use fewroots_certify::{certify_distinct, certify_point, haas_fast_alpha, newton_step, SparsePoly, SparseSystem};
use fewroots_core::rational::{int, parse_rational, rat, to_f64};
use fewroots_core::Rational;

const POINTS: [(&str, &str); 5] = [
    ("0.584513273807", "0.818672114695"),
    ("0.721441819886", "0.757201442567"),
    ("0.740238978217", "0.740238978217"),
    ("0.757201442567", "0.721441819886"),
    ("0.818672114695", "0.584513273807"),
];

fn haas(a: Rational, b: Rational) -> SparseSystem {
    SparseSystem::new(
        2,
        vec![
            SparsePoly::new(vec![(vec![6, 0], int(1)), (vec![0, 3], a), (vec![0, 1], int(-1))]),
            SparsePoly::new(vec![(vec![0, 6], int(1)), (vec![3, 0], b), (vec![1, 0], int(-1))]),
        ],
    )
    .unwrap()
}

fn pt(x: &str, y: &str) -> Vec<Rational> {
    vec![parse_rational(x).unwrap(), parse_rational(y).unwrap()]
}

fn truncate6(s: &str) -> String {
    s[..8].to_string()
}

#[test]
fn five_points_certify_and_are_distinct() {
    let f = haas(rat(44, 31), rat(44, 31));
    let certs: Vec<_> = POINTS.iter().map(|(x, y)| certify_point(&f, &pt(x, y)).unwrap()).collect();
    for c in &certs {
        assert!(c.certified, "{c:?}");
        assert!(c.alpha_ub < 0.03);
        assert!(c.z0.iter().all(|v| v > &Rational::from_integer(0.into())));
    }
    assert!(certify_distinct(&certs));
}

#[test]
fn one_newton_step_stays_within_two_beta() {
    let f = haas(rat(44, 31), rat(44, 31));
    let z = pt("0.740238978217", "0.740238978217");
    let c = certify_point(&f, &z).unwrap();
    let z1 = newton_step(&f, &z).unwrap();
    let d: f64 = z.iter().zip(&z1).map(|(a, b)| to_f64(&(a - b)).powi(2)).sum::<f64>().sqrt();
    assert!(d <= c.root_distance_bound);
}

#[test]
fn halving_over_five_iterates() {
    let f = haas(rat(44, 31), rat(44, 31));
    for (x, y) in POINTS {
        let it = newton_iterates(&f, &pt(x, y), 5, 320).unwrap();
        assert!(halving_holds(&it, 320));
    }
}

#[test]
fn fast_path_implies_generic_path() {
    let f = haas(rat(44, 31), rat(44, 31));
    for (x, y) in POINTS {
        let z = pt(&truncate6(x), &truncate6(y));
        let zz = [z[0].clone(), z[1].clone()];
        assert!(haas_fast_alpha(&zz).unwrap(), "{x} {y}");
        assert!(certify_point(&f, &z).unwrap().certified, "{x} {y}");
    }
}

#[test]
fn more_digits_still_certify() {
    let f = haas(rat(44, 31), rat(44, 31));
    for (x, y) in POINTS {
        let z = pt(&truncate6(x), &truncate6(y));
        let z2 = newton_step(&f, &z).unwrap();
        assert!(certify_point(&f, &z).unwrap().certified);
        assert!(certify_point(&f, &z2).unwrap().certified);
    }
}
