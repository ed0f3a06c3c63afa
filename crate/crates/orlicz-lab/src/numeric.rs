//! Small numeric helpers shared across modules: compensated summation,
//! geometric probe grids, and exact f64 <-> rational conversions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational type used for breakpoints and measures.
pub type Rational = BigRational;

/// Neumaier-compensated sum; keeps tiny terms from being absorbed by large ones.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Geometric grid of `n` points over `(lo, hi]`: `lo * (hi/lo)^(k/n)` for k = 1..=n.
///
/// `lo` must be positive and strictly below `hi`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(lo > 0.0 && hi > lo && n >= 1);
    let ratio = (hi / lo).ln();
    let mut grid: Vec<f64> = (1..=n)
        .map(|k| lo * (ratio * k as f64 / n as f64).exp())
        .collect();
    // pin the last point so callers can rely on hi being probed exactly
    *grid.last_mut().unwrap() = hi;
    grid
}

/// Exact rational value of a finite f64 (every finite f64 is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::Domain(format!("cannot represent {x} as a rational")))
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn ratio_u64(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest rational with denominator `den` to the exact rational `x`.
pub fn round_to_denominator(x: &Rational, den: u64) -> Rational {
    let d = BigInt::from(den);
    let scaled = x * Rational::from_integer(d.clone());
    // round half away from zero
    let half = Rational::new(BigInt::one(), BigInt::from(2u32));
    let shifted = if scaled.is_negative() {
        scaled - half
    } else {
        scaled + half
    };
    let num = shifted.floor().to_integer();
    Rational::new(num, d)
}

/// Best rational approximation of `x ≥ 0` with denominator at most `cap`,
/// by continued fractions: exact whenever `x` already has a small enough
/// denominator, and within `1/cap` otherwise.
pub fn approx_with_denominator_cap(x: &Rational, cap: u64) -> Rational {
    debug_assert!(!x.is_negative());
    let cap = BigInt::from(cap);
    if *x.denom() <= cap {
        return x.clone();
    }
    // convergents h/k of the continued fraction expansion
    let (mut h_prev, mut h) = (BigInt::one(), x.floor().to_integer());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    let mut frac = x - Rational::from_integer(h.clone());
    while !frac.is_zero() {
        let inv = frac.recip();
        let a = inv.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if k_next > cap {
            // best semiconvergent still under the cap
            let a_cut = (&cap - &k_prev) / &k;
            let cand_num = &a_cut * &h + &h_prev;
            let cand_den = &a_cut * &k + &k_prev;
            let conv = Rational::new(h.clone(), k.clone());
            if cand_den.is_zero() {
                return conv;
            }
            let cand = Rational::new(cand_num, cand_den);
            return if (x - &cand).abs() < (x - &conv).abs() {
                cand
            } else {
                conv
            };
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        frac = inv - Rational::from_integer(a);
    }
    Rational::new(h, k)
}

pub fn rational_zero() -> Rational {
    Rational::zero()
}

pub fn rational_one() -> Rational {
    Rational::one()
}

pub fn rational_from_u64(x: u64) -> Rational {
    Rational::from_u64(x).expect("u64 always converts")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_handles_cancellation() {
        let s = neumaier_sum([1e16, 1.0, -1e16]);
        assert_eq!(s, 1.0);
    }

    #[test]
    fn geometric_grid_spans_range() {
        let g = geometric_grid(1.0, 1e6, 60);
        assert_eq!(g.len(), 60);
        assert!(g[0] > 1.0);
        assert_eq!(*g.last().unwrap(), 1e6);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn f64_round_trip_is_exact() {
        let r = rational_from_f64(0.1).unwrap();
        assert_eq!(rational_to_f64(&r), 0.1);
    }

    #[test]
    fn rounding_to_denominator() {
        let x = rational_from_f64(0.25).unwrap();
        assert_eq!(round_to_denominator(&x, 1_000_000_000), ratio_u64(1, 4));
        let third = Rational::new(BigInt::from(1), BigInt::from(3));
        let rounded = round_to_denominator(&third, 10);
        assert_eq!(rounded, Rational::new(BigInt::from(3), BigInt::from(10)));
    }

    #[test]
    fn best_approximation_under_cap() {
        // small denominators are preserved exactly
        let x = ratio_u64(1, 65536);
        assert_eq!(approx_with_denominator_cap(&x, 1_000_000_000), x);
        // irrational-ish targets land within 1/cap
        let pi = rational_from_f64(std::f64::consts::PI - 3.0).unwrap();
        let approx = approx_with_denominator_cap(&pi, 1000);
        assert!(*approx.denom() <= 1000.into());
        let err = (&pi - &approx).abs();
        assert!(err < ratio_u64(1, 1000));
        // the classic convergent 16/113 of π − 3 has denominator ≤ 120
        let approx = approx_with_denominator_cap(&pi, 120);
        assert_eq!(approx, ratio_u64(16, 113));
    }
}
