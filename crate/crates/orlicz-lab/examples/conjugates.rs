//! Legendre-Fenchel conjugation: closed-form cross-checks, the infinite
//! branch, and Young's inequality.
//!
//! ```bash
//! cargo run -p orlicz-lab --example conjugates
//! ```

use orlicz_lab::orlicz::{conjugate, Conjugate, OrliczFunction};

fn main() -> orlicz_lab::Result<()> {
    let p2 = OrliczFunction::power(2.0)?;
    println!("conjugate of t² against the closed form s²/4:");
    for s in [0.0, 1.0, 2.0, 5.0, 10.0] {
        let got = conjugate(&p2, s, 1e-9)?.finite().unwrap();
        println!(
            "  s = {s:>4}: {got:>12.9}  (closed form {:.9})",
            s * s / 4.0
        );
    }

    let exp = OrliczFunction::exp_minus_linear();
    let got = conjugate(&exp, 1.0, 1e-9)?.finite().unwrap();
    println!(
        "\nconjugate of e^t − t − 1 at s = 1: {got:.9}  (closed form 2·ln2 − 1 = {:.9})",
        2.0 * 2.0f64.ln() - 1.0
    );

    // linear growth: finite below the asymptotic slope, +inf above it
    let lin = OrliczFunction::linear();
    for s in [0.5, 1.0, 2.0] {
        match conjugate(&lin, s, 1e-9)? {
            Conjugate::Finite(v) => println!("conjugate of t at s = {s}: {v}"),
            Conjugate::Infinite => println!("conjugate of t at s = {s}: +inf"),
        }
    }

    println!("\nYoung's inequality s·t ≤ φ(t) + φ*(s) on a grid (worst slack):");
    for phi in [p2, exp, OrliczFunction::power_log(1.0)?] {
        let mut worst = f64::INFINITY;
        for i in 0..=20 {
            let s = 0.25 * i as f64;
            let conj = match conjugate(&phi, s, 1e-9)? {
                Conjugate::Finite(v) => v,
                Conjugate::Infinite => continue,
            };
            for j in 0..=20 {
                let t = 0.4 * j as f64;
                worst = worst.min(phi.evaluate(t)? + conj - s * t);
            }
        }
        println!(
            "  {:<16} min(φ(t) + φ*(s) − s·t) = {worst:.3e}",
            phi.family_name()
        );
    }
    Ok(())
}
