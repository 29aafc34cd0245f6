//! Enclosures of `f(z) = atanh(sqrt z) / sqrt z = sum_k z^k / (2k + 1)` and of
//! its derivative on `[0, 1]`. Both are increasing, so an interval argument
//! only needs its two endpoints.

use fewroots_core::Interval;

const TERMS: usize = 60;

fn f_point(z: f64) -> Interval {
    if z >= 1.0 {
        return Interval::new(f64::MAX, f64::INFINITY);
    }
    let zi = Interval::point(z);
    if z <= 0.5 {
        let mut sum = Interval::point(0.0);
        let mut pow = Interval::point(1.0);
        let mut n = 0;
        while n < TERMS && pow.hi() > 1e-18 {
            sum = sum + pow / Interval::point((2 * n + 1) as f64);
            pow = pow * zi;
            n += 1;
        }
        // tail: z^N/(2N+1) + ... <= z^N / ((2N+1)(1-z))
        let tail = pow.hi() / ((2 * n + 1) as f64 * (1.0 - z)) * 2.0;
        sum + Interval::new(0.0, tail)
    } else {
        let y = zi.sqrt();
        let one = Interval::point(1.0);
        let at = ((one + y) / (one - y)).ln().scale(0.5);
        at / y
    }
}

fn fp_point(z: f64) -> Interval {
    if z >= 1.0 {
        return Interval::new(f64::MAX, f64::INFINITY);
    }
    let zi = Interval::point(z);
    if z <= 0.5 {
        let mut sum = Interval::point(0.0);
        let mut pow = Interval::point(1.0);
        let mut k = 1;
        while k <= TERMS && pow.hi() > 1e-18 {
            sum = sum + pow * Interval::point(k as f64) / Interval::point((2 * k + 1) as f64);
            pow = pow * zi;
            k += 1;
        }
        // tail: sum_{k > N} k z^(k-1) / (2k+1) <= z^N / (2 (1 - z))
        let tail = pow.hi() / (2.0 * (1.0 - z)) * 2.0;
        sum + Interval::new(0.0, tail)
    } else {
        let one = Interval::point(1.0);
        (one / (one - zi) - f_point(z)) / zi.scale(2.0)
    }
}

/// `f(z)` over `z`, where `z` is clamped to `[0, 1]`; `f(1) = inf`.
pub fn atanh_ratio(z: Interval) -> Interval {
    let lo = f_point(z.lo().clamp(0.0, 1.0));
    let hi = f_point(z.hi().clamp(0.0, 1.0));
    Interval::new(lo.lo().max(1.0).min(hi.hi()), hi.hi())
}

/// `f'(z)` over `z`; `f'(0) = 1/3`.
pub fn atanh_ratio_prime(z: Interval) -> Interval {
    let lo = fp_point(z.lo().clamp(0.0, 1.0));
    let hi = fp_point(z.hi().clamp(0.0, 1.0));
    Interval::new(lo.lo().max(0.0).min(hi.hi()), hi.hi())
}
