//! Build, verify and exploit a norm-divergence certificate: certified lower
//! bounds for the Cesàro maxima of an i.i.d. realization of the constructed
//! step function, growing like sqrt of the harmonic numbers.
//!
//! ```bash
//! cargo run -p orlicz-lab --example divergence_certificate
//! ```

use orlicz_lab::counterexample::{
    build_certificate, certify_modular_lower_bound, mc_sanity_check, norm_lower_bound,
    verify_certificate, SearchConfig,
};
use orlicz_lab::{Error, OrliczFunction};

fn main() -> orlicz_lab::Result<()> {
    let lin = OrliczFunction::linear();
    let cert = build_certificate(&lin, 200, &SearchConfig::default())?;
    println!(
        "linear construction at depth 200: d ∈ [{:.9}, {:.9}], tail measure {:.3e}",
        cert.d_bracket.0, cert.d_bracket.1, cert.tail_measure
    );

    let verification = verify_certificate(&cert)?;
    println!(
        "independent re-verification: all_pass = {}",
        verification.all_pass
    );
    for check in &verification.checks {
        println!(
            "  [{}] {}",
            if check.pass { "ok" } else { "FAIL" },
            check.name
        );
    }

    println!("\ncertified bounds (modular for h_n/C_n, norm for h_n):");
    for n in [1usize, 5, 10, 20, 50, 100] {
        let modular = certify_modular_lower_bound(&cert, n)?;
        let norm = norm_lower_bound(&cert, n)?;
        println!(
            "  n = {n:>3}: modular ≥ {:.6} (chain {:.6}, integral {:.6})  norm ≥ {:.6}",
            modular.value, modular.chain, modular.exact_integral, norm.value
        );
    }
    println!("  the norm bounds grow like sqrt(H_n): unbounded in the limit");

    let mc = mc_sanity_check(&cert, 2, 100_000, 7)?;
    println!(
        "\nMonte Carlo at n = 2: estimate {:.6} ± {:.2e} vs certified ≥ {:.6} (consistent = {})",
        mc.estimate, mc.stderr, mc.certified_lower_bound, mc.consistent
    );

    // the same search run against t² exhausts immediately: the scaled-value
    // inequality needs n·C_n ≤ 2, which fails at n = 2 independent of height
    match build_certificate(&OrliczFunction::power(2.0)?, 10, &SearchConfig::default()) {
        Err(Error::SearchExhausted { n, detail }) => {
            println!("\nnegative control (t²): search exhausted at n = {n}");
            println!("  {detail}");
        }
        other => println!("unexpected outcome for t²: {other:?}"),
    }

    // t·log(1+t) admits the construction (its conjugate fails Δ2)
    let cert = build_certificate(
        &OrliczFunction::power_log(1.0)?,
        50,
        &SearchConfig::default(),
    )?;
    let bounds: Vec<f64> = cert.bounds.iter().map(|b| b.norm_lower).collect();
    println!("\nt·log(1+t) at depth 50: norm bounds {bounds:?}");
    Ok(())
}
