use fewroots_core::rational::{f64_up, from_f64, int, pow2, rat, round_down, to_f64};
use fewroots_core::{RatMatrix, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::CertifyError;
use crate::system::SparseSystem;

/// Threshold on `alpha` below which a point is certified.
pub fn alpha_threshold() -> Rational {
    rat(3, 100)
}

fn inverse_jacobian(f: &SparseSystem, z: &[Rational]) -> Result<RatMatrix, CertifyError> {
    f.require_square()?;
    if z.len() != f.nvars {
        return Err(CertifyError::PointDimension { expected: f.nvars, found: z.len() });
    }
    f.jacobian(z).inverse().map_err(|_| CertifyError::SingularJacobian)
}

/// `F'(z)^{-1} F(z)`.
pub fn newton_correction(f: &SparseSystem, z: &[Rational]) -> Result<Vec<Rational>, CertifyError> {
    let jinv = inverse_jacobian(f, z)?;
    Ok(jinv.mul_vec(&f.eval(z)))
}

pub fn newton_step(f: &SparseSystem, z: &[Rational]) -> Result<Vec<Rational>, CertifyError> {
    let d = newton_correction(f, z)?;
    Ok(z.iter().zip(&d).map(|(a, b)| a - b).collect())
}

fn norm_sq(v: &[Rational]) -> Rational {
    v.iter().map(|x| x * x).sum()
}

/// Exact `beta^2`.
pub fn beta_squared(f: &SparseSystem, z: &[Rational]) -> Result<Rational, CertifyError> {
    Ok(norm_sq(&newton_correction(f, z)?))
}

fn sqrt_up(r: &Rational) -> f64 {
    let s = f64_up(r).sqrt();
    s.next_up()
}

/// Upper bound on `beta = |F'(z)^{-1} F(z)|`.
pub fn beta(f: &SparseSystem, z: &[Rational]) -> Result<f64, CertifyError> {
    Ok(sqrt_up(&beta_squared(f, z)?))
}

/// For each `k >= 2` up to the total degree, the square of a bound on the
/// norm of `F'(z)^{-1} F^(k)(z) / k!`: the sum over outputs and multi-indices
/// `a` with `|a| = k` of `(a!/k!) c^2`, where `c` is the Taylor coefficient of
/// `F'(z)^{-1} F(z + h)` at `h^a`. This is the squared Frobenius norm of the
/// symmetric tensor, which dominates the operator norm.
pub fn tensor_bounds(f: &SparseSystem, z: &[Rational]) -> Result<Vec<(u32, Rational)>, CertifyError> {
    let jinv = inverse_jacobian(f, z)?;
    let taylors: Vec<_> = f.polys.iter().map(|p| p.taylor_at(z)).collect();
    let dmax = f.max_degree();
    let mut out = Vec::new();
    for k in 2..=dmax {
        let mut total = Rational::zero();
        let mut seen: Vec<&Vec<u32>> =
            taylors.iter().flat_map(|t| t.keys()).filter(|idx| idx.iter().sum::<u32>() == k).collect();
        seen.sort();
        seen.dedup();
        let kfact = factorial(k);
        for idx in seen {
            let afact: Rational = idx.iter().map(|&a| factorial(a)).product();
            let weight = &afact / &kfact;
            for i in 0..f.nvars {
                let mut c = Rational::zero();
                for (l, t) in taylors.iter().enumerate() {
                    if let Some(v) = t.get(idx) {
                        c += &jinv[(i, l)] * v;
                    }
                }
                total += &weight * &c * &c;
            }
        }
        out.push((k, total));
    }
    Ok(out)
}

fn factorial(k: u32) -> Rational {
    (1..=k).map(|i| int(i64::from(i))).product::<Rational>().max(Rational::one())
}

/// Upper bound on `gamma`; zero for affine systems.
pub fn gamma_upper(f: &SparseSystem, z: &[Rational]) -> Result<f64, CertifyError> {
    let bounds = tensor_bounds(f, z)?;
    Ok(gamma_from_bounds(&bounds))
}

fn gamma_from_bounds(bounds: &[(u32, Rational)]) -> f64 {
    bounds
        .iter()
        .map(|(k, t2)| {
            if t2.is_zero() {
                0.0
            } else {
                let e = 1.0 / (2.0 * f64::from(k - 1));
                // relative slack covers the rounding of powf
                (f64_up(t2).powf(e) * (1.0 + 1e-12)).next_up()
            }
        })
        .fold(0.0, f64::max)
}

/// Alpha-theory certificate for one starting point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaCertificate {
    #[serde(with = "rational_vec")]
    pub z0: Vec<Rational>,
    pub beta: f64,
    pub gamma_ub: f64,
    pub alpha_ub: f64,
    pub basin_radius: f64,
    pub root_distance_bound: f64,
    pub certified: bool,
}

impl AlphaCertificate {
    pub fn z0_f64(&self) -> Vec<f64> {
        self.z0.iter().map(to_f64).collect()
    }
}

/// Certificate with `certified` decided exactly: for every `k`,
/// `beta^(2(k-1)) * T_k^2 < 0.03^(2(k-1))`, which is equivalent to
/// `beta * gamma_bound < 0.03`.
pub fn certify_point(f: &SparseSystem, z0: &[Rational]) -> Result<AlphaCertificate, CertifyError> {
    let b2 = beta_squared(f, z0)?;
    let bounds = tensor_bounds(f, z0)?;
    let c2 = &alpha_threshold() * &alpha_threshold();
    let certified = bounds.iter().all(|(k, t2)| {
        let e = (*k - 1) as i32;
        b2.pow(e) * t2 < c2.pow(e)
    });
    let beta = sqrt_up(&b2);
    let gamma_ub = gamma_from_bounds(&bounds);
    let alpha_ub = (beta * gamma_ub).next_up();
    let basin_radius = if gamma_ub > 0.0 { (0.05 / gamma_ub).next_down() } else { f64::INFINITY };
    Ok(AlphaCertificate {
        z0: z0.to_vec(),
        beta,
        gamma_ub,
        alpha_ub,
        basin_radius,
        root_distance_bound: (2.0 * beta).next_up(),
        certified,
    })
}

/// Pairwise disjointness of the `2 beta` balls, so that every certified
/// starting point converges to a different root.
pub fn certify_distinct(certs: &[AlphaCertificate]) -> bool {
    for i in 0..certs.len() {
        for j in i + 1..certs.len() {
            let d2: Rational = certs[i].z0.iter().zip(&certs[j].z0).map(|(a, b)| (a - b) * (a - b)).sum();
            let r = from_f64(certs[i].root_distance_bound) + from_f64(certs[j].root_distance_bound);
            if d2 <= &r * &r {
                return false;
            }
        }
    }
    true
}

/// Newton iterates from `z0`, each rounded to `bits` fractional bits.
pub fn newton_iterates(
    f: &SparseSystem,
    z0: &[Rational],
    count: usize,
    bits: u32,
) -> Result<Vec<Vec<Rational>>, CertifyError> {
    let mut out = vec![z0.to_vec()];
    for _ in 0..count {
        let next = newton_step(f, out.last().expect("nonempty"))?;
        out.push(next.iter().map(|x| round_fraction(x, bits)).collect());
    }
    Ok(out)
}

fn round_fraction(x: &Rational, bits: u32) -> Rational {
    let scale = pow2(i64::from(bits));
    Rational::from((x * &scale).round().to_integer()) / scale
}

/// Checks `|z_(i+1) - z_i| <= 2^(1 - 2^i) |z_1 - z_0|` along the iterates,
/// allowing for the rounding applied in [`newton_iterates`].
pub fn halving_holds(iterates: &[Vec<Rational>], bits: u32) -> bool {
    if iterates.len() < 2 {
        return true;
    }
    let dist2 = |a: &[Rational], b: &[Rational]| -> Rational { a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum() };
    let d0 = dist2(&iterates[1], &iterates[0]);
    let slack = pow2(-(i64::from(bits) - 4));
    for i in 1..iterates.len() - 1 {
        let di = dist2(&iterates[i + 1], &iterates[i]);
        let factor = pow2(-(2 * ((1i64 << i) - 1)));
        let bound = &factor * &d0 * rat(1_000_001, 1_000_000) + &slack * &slack;
        if di > bound {
            return false;
        }
    }
    true
}

/// Floating-point Newton iteration used for root discovery, never for
/// certification.
pub fn newton_f64(f: &SparseSystem, z: &[f64], iters: usize) -> Option<Vec<f64>> {
    let mut z = z.to_vec();
    for _ in 0..iters {
        let v = f.eval_f64(&z);
        let j = f.jacobian_f64(&z);
        let d = solve_f64(&j, &v)?;
        let mut done = true;
        for (zi, di) in z.iter_mut().zip(&d) {
            *zi -= di;
            if di.abs() > 1e-17 * zi.abs().max(1.0) {
                done = false;
            }
        }
        if !z.iter().all(|x| x.is_finite()) {
            return None;
        }
        if done {
            break;
        }
    }
    Some(z)
}

fn solve_f64(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &v)| r.iter().copied().chain([v]).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c] == 0.0 || !m[p][c].is_finite() {
            return None;
        }
        m.swap(c, p);
        let pivot = m[c].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != c {
                let f = row[c] / pivot[c];
                for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x -= f * y;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Rounds to a dyadic rational with `bits` significant bits; used to keep
/// exact certification inputs short.
pub fn short_rational(x: f64) -> Rational {
    round_down(&from_f64(x), 60)
}

/// True when every coordinate of the Newton correction is known to vanish;
/// a point that is an exact root.
pub fn is_exact_root(f: &SparseSystem, z: &[Rational]) -> bool {
    f.eval(z).iter().all(Zero::is_zero)
}

#[allow(clippy::ptr_arg)]
pub mod rational_vec {
    use fewroots_core::rational::parse_rational;
    use fewroots_core::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Vec<Rational>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::SparsePoly;
    use fewroots_core::rational::parse_rational;

    fn sqrt2() -> SparseSystem {
        SparseSystem::new(1, vec![SparsePoly::new(vec![(vec![2], int(1)), (vec![0], int(-2))])]).unwrap()
    }

    #[test]
    fn babylonian_step() {
        let z = newton_step(&sqrt2(), &[rat(3, 2)]).unwrap();
        assert_eq!(z[0], rat(17, 12));
    }

    #[test]
    fn beta_gamma_alpha_by_hand() {
        let f = sqrt2();
        let z = [rat(3, 2)];
        assert_eq!(beta_squared(&f, &z).unwrap(), rat(1, 144));
        let b = beta(&f, &z).unwrap();
        assert!((1.0 / 12.0..1.0 / 12.0 + 1e-15).contains(&b));
        let g = gamma_upper(&f, &z).unwrap();
        assert!((1.0 / 3.0..=0.34).contains(&g));
        let c = certify_point(&f, &z).unwrap();
        assert!(c.certified);
        assert!(c.alpha_ub >= 1.0 / 36.0 && c.alpha_ub < 0.03);
    }

    #[test]
    fn far_point_fails() {
        let c = certify_point(&sqrt2(), &[rat(1, 10)]).unwrap();
        assert!(!c.certified);
    }

    #[test]
    fn affine_system_has_zero_gamma() {
        let f = SparseSystem::new(
            2,
            vec![
                SparsePoly::new(vec![(vec![1, 0], int(2)), (vec![0, 1], int(1)), (vec![0, 0], int(-3))]),
                SparsePoly::new(vec![(vec![1, 0], int(1)), (vec![0, 1], int(-1))]),
            ],
        )
        .unwrap();
        assert_eq!(gamma_upper(&f, &[int(0), int(0)]).unwrap(), 0.0);
        let z = newton_step(&f, &[int(7), int(-2)]).unwrap();
        assert_eq!(z, vec![int(1), int(1)]);
        assert!(is_exact_root(&f, &z));
        assert_eq!(beta_squared(&f, &z).unwrap(), Rational::zero());
    }

    #[test]
    fn singular_jacobian() {
        assert_eq!(newton_step(&sqrt2(), &[int(0)]), Err(CertifyError::SingularJacobian));
    }

    #[test]
    fn distinctness() {
        let f = sqrt2();
        let a = certify_point(&f, &[rat(3, 2)]).unwrap();
        let b = certify_point(&f, &[rat(-3, 2)]).unwrap();
        assert!(certify_distinct(&[a.clone(), b]));
        assert!(!certify_distinct(&[a.clone(), a.clone()]));
        assert!(certify_distinct(&[a]));
    }

    #[test]
    fn halving_contract() {
        let it = newton_iterates(&sqrt2(), &[rat(3, 2)], 5, 256).unwrap();
        assert!(halving_holds(&it, 256));
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = certify_point(&sqrt2(), &[parse_rational("1.414").unwrap()]).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: AlphaCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
