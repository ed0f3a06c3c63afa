//! The deterministic running-supremum inequality
//! `(N/2)·∨_{n=N}^{K}|A_n| ≤ Σ_ℓ ∨ |class-ℓ prefix averages|`,
//! its modular consequence for disjoint sequences, and the disjoint
//! p-convexity bound.
//!
//! ```bash
//! cargo run -p orlicz-lab --example sup_cesaro_inequality
//! ```

use orlicz_lab::cesaro::{
    closed_cesaro_modular_check, disjoint_p_convex_bound_check, sup_ces_inequality_check,
    FunctionSequence,
};
use orlicz_lab::OrliczFunction;

fn main() -> orlicz_lab::Result<()> {
    // the inequality is a theorem: no random sequence can violate it
    println!("running-supremum inequality on 100 seeded random sequences:");
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..100u64 {
        let window = 1 + (seed % 8) as usize;
        let k_total = (window * 6).min(48);
        let seq = FunctionSequence::seeded_random(seed, 4, 2.0);
        let report = sup_ces_inequality_check(&seq, k_total, window, 1e-12)?;
        assert!(report.holds);
        worst = worst.max(report.max_violation);
    }
    println!("  zero violations; max over all refinements of LHS − RHS = {worst:.4e}");

    // modular consequence for a disjoint sequence satisfying the per-class premise
    let p2 = OrliczFunction::power(2.0)?;
    let seq = FunctionSequence::seeded_disjoint_blocks(3, 3, 0.5);
    let report = closed_cesaro_modular_check(&p2, &seq, 32, 4, 1e-9)?;
    println!("\nmodular bound for a disjoint sequence (K = 32, N = 4):");
    println!("  per-class modulars: {:?}", report.class_modulars);
    println!("  premise met = {}", report.premise_met);
    if let (Some(value), Some(holds)) = (report.conclusion_value, report.holds) {
        println!(
            "  ∫φ((N/2)·∨|A_n|) = {value:.6} ≤ N = {} : {holds}",
            report.bound
        );
        println!(
            "  disjoint additivity deviation = {:.3e}",
            report.additivity_dev.unwrap()
        );
    }

    // disjoint p-convexity: ‖g_m − g_n‖ ≤ (Σ k^(−p))^(1/p) · sup ‖f_k‖
    let seq = FunctionSequence::seeded_disjoint_blocks(7, 3, 1.5);
    let report = disjoint_p_convex_bound_check(&p2, &seq, 2, 5, 1e-9)?;
    println!("\ndisjoint p-convexity bound (p = 2, n = 2, m = 5):");
    println!(
        "  lhs = {:.9}  rhs = {:.9}  slack = {:.9}",
        report.lhs, report.rhs, report.slack
    );
    println!(
        "  running-sup identity exact = {}",
        report.sup_identity_exact
    );
    println!(
        "  p-th-root identity max deviation = {:.3e}",
        report.proot_identity_dev
    );
    Ok(())
}
