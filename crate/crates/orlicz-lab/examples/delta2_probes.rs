//! Δ2 growth diagnostics: the direct ratio probe and the dual criterion
//! (a witness of φ(t) > φ(Lt)/(2L) past every floor means the conjugate
//! fails the Δ2-condition).
//!
//! ```bash
//! cargo run -p orlicz-lab --example delta2_probes
//! ```

use orlicz_lab::orlicz::{delta2_check, kr_dual_delta2_probe, OrliczFunction};

fn main() -> orlicz_lab::Result<()> {
    let families = [
        OrliczFunction::power(3.0)?,
        OrliczFunction::power_log(1.0)?,
        OrliczFunction::exp_minus_linear(),
        OrliczFunction::linear(),
    ];

    println!("Δ2 probe φ(2t) ≤ C·φ(t) on (1, 1e6] (exp is capped at 100):");
    for phi in &families {
        let t_max = if phi.family_name() == "exp-minus-linear" {
            100.0
        } else {
            1e6
        };
        let report = delta2_check(phi, 1.0, t_max, 200, 1e6)?;
        println!(
            "  {:<16} verdict = {:<13?} C_est = {:.6e} witness = {:?}",
            phi.family_name(),
            report.verdict,
            report.c_est,
            report.witness_t,
        );
    }

    println!("\ndual-Δ2 probe with L = 3 over (0, 1e6]:");
    for phi in &families {
        let probe = kr_dual_delta2_probe(phi, 3.0, 0.0, 1e6)?;
        match probe.witness {
            Some(w) => println!("  {:<16} witness at t = {w:.6e}", phi.family_name()),
            None => println!(
                "  {:<16} absent over {} grid points (inconclusive at this cap)",
                phi.family_name(),
                probe.grid_points
            ),
        }
    }

    // escalating floors: repeated witnesses are the evidence pattern for a
    // conjugate failing Δ2
    println!("\nescalating floors for t·log(1+t) with L = 4:");
    for floor in [1.0, 1e2, 1e4] {
        let probe = kr_dual_delta2_probe(&OrliczFunction::power_log(1.0)?, 4.0, floor, 1e8)?;
        println!("  floor {floor:>8.0e}: witness = {:?}", probe.witness);
    }
    Ok(())
}
