//! Decreasing rearrangement: the nonincreasing equimeasurable profile of |f|,
//! its exact distribution data, and norm invariance.
//!
//! ```bash
//! cargo run -p orlicz-lab --example rearrangement
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use orlicz_lab::{OrliczFunction, SimpleFunction};

fn frac(k: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(d))
}

fn show(label: &str, f: &SimpleFunction) {
    let mut cursor = BigRational::new(0.into(), 1.into());
    print!("{label}:");
    for p in f.pieces() {
        print!("  {} on [{}, {})", p.value, cursor, p.end);
        cursor = p.end.clone();
    }
    println!();
}

fn main() -> orlicz_lab::Result<()> {
    // -2 on [0, 1/4), 1 on [1/4, 1)
    let f = SimpleFunction::new(vec![(frac(1, 4), -2.0), (frac(1, 1), 1.0)])?;
    let r = f.rearrange();
    show("f ", &f);
    show("f*", &r);

    let d = f.distribution();
    println!("\ndistribution of |f| (exact measures):");
    for (lambda, measure) in d.thresholds.iter().zip(&d.measures) {
        println!("  |{{ |f| > {lambda} }}| = {measure}");
    }
    assert_eq!(d, r.distribution(), "equimeasurability is exact");

    println!("\nnorm invariance under rearrangement:");
    for phi in [
        OrliczFunction::power(2.0)?,
        OrliczFunction::power_log(1.0)?,
        OrliczFunction::linear(),
    ] {
        let nf = f.luxemburg_norm(&phi, 1e-9)?;
        let nr = r.luxemburg_norm(&phi, 1e-9)?;
        println!("  {:<12} ‖f‖ = {nf:.9}  ‖f*‖ = {nr:.9}", phi.family_name());
    }
    Ok(())
}
