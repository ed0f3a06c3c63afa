//! Shared helpers for the integration suites: seeded random step functions
//! and the builtin Orlicz families.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orlicz_lab::{OrliczFunction, SimpleFunction};

pub fn builtin_families() -> Vec<OrliczFunction> {
    vec![
        OrliczFunction::power(1.5).unwrap(),
        OrliczFunction::power(2.0).unwrap(),
        OrliczFunction::power(3.0).unwrap(),
        OrliczFunction::power_log(1.0).unwrap(),
        OrliczFunction::exp_minus_linear(),
        OrliczFunction::linear(),
    ]
}

pub fn frac(k: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(d))
}

/// Random step function with dyadic breakpoints (denominator 2^12) and
/// values uniform in ±`scale`.
pub fn random_function(rng: &mut ChaCha8Rng, max_pieces: usize, scale: f64) -> SimpleFunction {
    let denom: i64 = 1 << 12;
    let pieces = rng.gen_range(1..=max_pieces.max(1));
    let mut cuts: Vec<i64> = (0..pieces - 1).map(|_| rng.gen_range(1..denom)).collect();
    cuts.sort_unstable();
    cuts.dedup();
    cuts.push(denom);
    let entries = cuts
        .into_iter()
        .map(|c| (frac(c, denom), scale * rng.gen_range(-1.0..1.0)))
        .collect();
    SimpleFunction::new(entries).unwrap()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
