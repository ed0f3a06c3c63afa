//! Order-boundedness diagnostics for Cesàro averages: running-supremum norms
//! `‖∨_{i≤n}|A_i|‖` and Cauchy gaps, with a trend verdict at finite depth.
//!
//! ```bash
//! cargo run -p orlicz-lab --example cesaro_diagnostics
//! ```

use orlicz_lab::cesaro::{diagnose_order_boundedness, DiagnosticsConfig, FunctionSequence};
use orlicz_lab::counterexample::{build_certificate, SearchConfig};
use orlicz_lab::{OrliczFunction, SimpleFunction};

fn main() -> orlicz_lab::Result<()> {
    let cfg = DiagnosticsConfig::default();

    // a geometrically shrinking sequence stabilizes immediately
    let p2 = OrliczFunction::power(2.0)?;
    let fs: Vec<SimpleFunction> = (1..=24)
        .map(|k| SimpleFunction::constant(0.5f64.powi(k)).unwrap())
        .collect();
    let seq = FunctionSequence::explicit(fs, false);
    let report = diagnose_order_boundedness(&p2, &seq, 24, &cfg)?;
    println!(
        "geometric sequence under t²: verdict = {:?}, sup_norms end at {:.6}",
        report.verdict,
        report.sup_norms.last().unwrap()
    );

    // disjoint unit-norm dilates of a divergence certificate's step function:
    // the running sup norms are harmonic sums, an unbounded trend
    let lin = OrliczFunction::linear();
    let cert = build_certificate(&lin, 60, &SearchConfig::default())?;
    let seq = FunctionSequence::disjoint_dilates(cert.f.clone(), lin.clone());
    let report = diagnose_order_boundedness(&lin, &seq, 24, &cfg)?;
    println!(
        "\ncertificate dilates under t: verdict = {:?}",
        report.verdict
    );
    println!("  n : sup_norm (harmonic number)");
    for n in [1usize, 2, 4, 8, 16, 24] {
        let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
        println!("  {n:>2}: {:>9.6} ({h:.6})", report.sup_norms[n - 1]);
    }

    // seeded random sequences are reproducible: same seed, same report
    let seq = FunctionSequence::seeded_random(7, 4, 2.0);
    let a = diagnose_order_boundedness(&p2, &seq, 16, &cfg)?;
    let b = diagnose_order_boundedness(&p2, &seq, 16, &cfg)?;
    assert_eq!(a.sup_norms, b.sup_norms);
    println!(
        "\nseeded random sequence: verdict = {:?} (reproducible)",
        a.verdict
    );
    Ok(())
}
