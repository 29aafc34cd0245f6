use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::CoreError;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"-44/31"`, `"7"`, `"1.4176759490"` or `"1e-8"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, CoreError> {
    let t = s.trim();
    let bad = || CoreError::Parse(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// Exact value of a finite double.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite double")
}

/// Nearest double (ties resolved by the underlying conversion).
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Largest double not above `r`.
pub fn f64_down(r: &Rational) -> f64 {
    let x = to_f64(r);
    if x.is_finite() && from_f64(x) > *r {
        x.next_down()
    } else if x == f64::INFINITY {
        f64::MAX
    } else {
        x
    }
}

/// Smallest double not below `r`.
pub fn f64_up(r: &Rational) -> f64 {
    let x = to_f64(r);
    if x.is_finite() && from_f64(x) < *r {
        x.next_up()
    } else if x == f64::NEG_INFINITY {
        f64::MIN
    } else {
        x
    }
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// `floor(log2 |r|)` for nonzero `r`.
pub fn ilog2(r: &Rational) -> i64 {
    debug_assert!(!r.is_zero());
    let n = r.numer().abs();
    let d = r.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= n/d < 2^(e+1) after at most one correction
    if e >= 0 {
        if n < (d << e as usize) {
            e -= 1;
        }
    } else if (n.clone() << (-e) as usize) < *d {
        e -= 1;
    }
    e
}

pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// Rounds `r` towards `-inf` to a dyadic with `bits` significant bits.
pub fn round_down(r: &Rational, bits: u32) -> Rational {
    round_dyadic(r, bits, false)
}

/// Rounds `r` towards `+inf` to a dyadic with `bits` significant bits.
pub fn round_up(r: &Rational, bits: u32) -> Rational {
    round_dyadic(r, bits, true)
}

fn round_dyadic(r: &Rational, bits: u32, up: bool) -> Rational {
    if r.is_zero() || r.denom().is_one() && r.numer().bits() <= bits as u64 {
        return r.clone();
    }
    let shift = bits as i64 - 1 - ilog2(r);
    let scaled = r * pow2(shift);
    let k = if up { ceil(&scaled) } else { floor(&scaled) };
    Rational::from_integer(k) * pow2(-shift)
}

/// Decimal rendering with `digits` digits after the point (truncated toward zero).
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let v = (r.abs() * Rational::from_integer(scale.clone())).to_integer();
    let (ip, fp) = v.div_rem(&scale);
    let sign = if r.is_negative() && !v.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
    }
}

pub fn sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("44/31").unwrap(), rat(44, 31));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("-.5").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn directed_conversion_brackets() {
        let third = rat(1, 3);
        let lo = f64_down(&third);
        let hi = f64_up(&third);
        assert!(from_f64(lo) < third && third < from_f64(hi));
        assert_eq!(f64_down(&rat(1, 2)), 0.5);
        assert_eq!(f64_up(&rat(1, 2)), 0.5);
    }

    #[test]
    fn log2_and_rounding() {
        assert_eq!(ilog2(&rat(1, 1)), 0);
        assert_eq!(ilog2(&rat(3, 1)), 1);
        assert_eq!(ilog2(&rat(1, 3)), -2);
        assert_eq!(ilog2(&rat(1, 4)), -2);
        let x = rat(1, 3);
        let lo = round_down(&x, 10);
        let hi = round_up(&x, 10);
        assert!(lo < x && x < hi);
        assert!(&hi - &lo <= pow2(-11));
        assert_eq!(round_up(&rat(-1, 3), 10), -round_down(&rat(1, 3), 10));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(-1, 3), 4), "-0.3333");
        assert_eq!(to_decimal(&rat(7, 2), 0), "3");
    }
}
