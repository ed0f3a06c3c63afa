//! Step functions on [0,1]: modulars and Luxemburg norms, with the
//! indicator closed form ‖χ_A‖ = |A|^(1/p) as a cross-check.
//!
//! ```bash
//! cargo run -p orlicz-lab --example luxemburg_norms
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use orlicz_lab::{OrliczFunction, SimpleFunction};

fn frac(k: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(k), BigInt::from(d))
}

fn main() -> orlicz_lab::Result<()> {
    let p2 = OrliczFunction::power(2.0)?;

    // 2 on [0, 1/2), 0 after: modular ∫φ(|f|) = 4·(1/2) = 2
    let f = SimpleFunction::indicator(frac(0, 1), frac(1, 2))?.scale(2.0);
    println!("modular of 2·χ[0,1/2) under t²: {}", f.modular(&p2));

    println!("\nindicator norms against |A|^(1/p):");
    for &p in &[1.5, 2.0, 3.0] {
        let phi = OrliczFunction::power(p)?;
        for (num, den) in [(1i64, 4i64), (3, 8), (9, 10)] {
            let chi = SimpleFunction::indicator(frac(0, 1), frac(num, den))?;
            let norm = chi.luxemburg_norm(&phi, 1e-9)?;
            let closed = (num as f64 / den as f64).powf(1.0 / p);
            println!("  p = {p}, |A| = {num}/{den}: norm = {norm:.9} closed form = {closed:.9}");
        }
    }

    // homogeneity and the modular-norm link
    let g = SimpleFunction::new(vec![
        (frac(1, 3), -1.5),
        (frac(2, 3), 0.25),
        (frac(1, 1), 2.0),
    ])?;
    let norm = g.luxemburg_norm(&p2, 1e-9)?;
    println!(
        "\nmixed-sign g: ‖g‖ = {norm:.9}, ‖2g‖ = {:.9}",
        g.scale(2.0).luxemburg_norm(&p2, 1e-9)?
    );
    println!(
        "modular at the norm (should be ≈ 1): {:.9}",
        g.scale(1.0 / norm).modular(&p2)
    );

    // every step function lies in the Orlicz heart: finite modular at every scale
    for k in [1.0, 10.0, 100.0] {
        println!(
            "modular of {k}·g under e^t − t − 1: {:.6e}",
            g.scale(k).modular(&OrliczFunction::exp_minus_linear())
        );
    }
    Ok(())
}
