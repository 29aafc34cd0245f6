//! Exponent arithmetic of the reduced coordinates for `d = 3`.
//!
//! A Laurent monomial in the six coefficients is invariant under the torus
//! action exactly when its exponent vector lies in the integer kernel of the
//! homogenized Cayley matrix. On the coefficient vector `(1, a, -1, 1, b, -1)`
//! such a monomial is `+-a^i b^j`, and the pairs `(i, j)` that occur form the
//! lattice of invariant monomials in `(a, b)`. The reduced curve itself uses
//! rational exponents with a common denominator.

use fewroots_core::matrix::hermite_normal_form;
use fewroots_core::IntMatrix;
use fewroots_toric::{integer_exponents, saturated_nullspace};
use num_bigint::BigInt;
use serde::Serialize;

use crate::error::HaasError;
use crate::system::HaasSystem;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialCheck {
    /// Common denominator of the reduced exponents.
    pub denominator: String,
    /// Denominator times the exponents of `a` and `b` in each reduced coordinate.
    pub scaled_ab_exponents: [[String; 2]; 2],
    /// Hermite basis of the invariant `(a, b)` exponent lattice.
    pub invariant_basis: [[String; 2]; 2],
    /// Hermite basis of the lattice spanned by `(6, -1)` and `(-1, 6)`.
    pub expected_basis: [[String; 2]; 2],
    /// Index of the invariant lattice in `Z^2`.
    pub index: String,
    pub matches: bool,
}

fn hnf2(rows: &[Vec<BigInt>]) -> Result<[[BigInt; 2]; 2], HaasError> {
    let (h, _) = hermite_normal_form(&IntMatrix::from_rows(rows)?);
    let nz: Vec<Vec<BigInt>> =
        (0..h.rows()).map(|i| h.row(i).to_vec()).filter(|r| r.iter().any(|x| *x != BigInt::from(0))).collect();
    if nz.len() != 2 {
        return Err(HaasError::DegenerateInput(format!("invariant lattice has rank {}", nz.len())));
    }
    Ok([[nz[0][0].clone(), nz[0][1].clone()], [nz[1][0].clone(), nz[1][1].clone()]])
}

fn strings(m: &[[BigInt; 2]; 2]) -> [[String; 2]; 2] {
    m.clone().map(|r| r.map(|x| x.to_string()))
}

pub fn monomial_check() -> Result<MonomialCheck, HaasError> {
    let cayley = HaasSystem::cayley(3)?.embedded;
    let kernel = saturated_nullspace(&cayley);
    let projected: Vec<Vec<BigInt>> = kernel.iter().map(|w| vec![w[1].clone(), w[4].clone()]).collect();
    let invariant = hnf2(&projected)?;
    let expected = hnf2(&[vec![6.into(), (-1).into()], vec![(-1).into(), 6.into()]])?;
    let index = (&invariant[0][0] * &invariant[1][1] - &invariant[0][1] * &invariant[1][0]).magnitude().clone();

    let curve = HaasSystem::curve(3)?;
    let (den, rows) = integer_exponents(&curve);
    let ab = [0, 1].map(|j| [rows[j][1].to_string(), rows[j][4].to_string()]);
    let diagonal =
        rows[0][1] == den && rows[0][4] == BigInt::from(0) && rows[1][1] == BigInt::from(0) && rows[1][4] == den;

    Ok(MonomialCheck {
        denominator: den.to_string(),
        scaled_ab_exponents: ab,
        matches: invariant == expected && diagonal,
        invariant_basis: strings(&invariant),
        expected_basis: strings(&expected),
        index: index.to_string(),
    })
}
