//! Builtin Orlicz function families, evaluation, and axiom validation.
//!
//! ```bash
//! cargo run -p orlicz-lab --example orlicz_functions
//! ```

use orlicz_lab::orlicz::{validate, OrliczFunction};

fn main() -> orlicz_lab::Result<()> {
    let families = [
        OrliczFunction::power(2.0)?,
        OrliczFunction::power_log(1.0)?,
        OrliczFunction::exp_minus_linear(),
        OrliczFunction::linear(),
    ];

    println!("values at t = 0, 1, 2:");
    for phi in &families {
        println!(
            "  {:<16} {:>10.6} {:>10.6} {:>10.6}",
            phi.family_name(),
            phi.evaluate(0.0)?,
            phi.evaluate(1.0)?,
            phi.evaluate(2.0)?,
        );
    }

    println!("\naxiom validation on a geometric grid over (0, 10]:");
    for phi in &families {
        let report = validate(phi, 100, 10.0)?;
        println!("  {:<16} pass = {}", phi.family_name(), report.pass);
    }

    // piecewise-linear data is validated, not silently repaired: a knot
    // sequence with a slope drop is reported as a convexity violation
    let concave = OrliczFunction::piecewise_linear(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 3.0)])?;
    let report = validate(&concave, 50, 3.0)?;
    println!(
        "\nknots (0,0)-(1,2)-(2,3): pass = {}, violation = {:?}",
        report.pass, report.violation
    );

    let convex = OrliczFunction::piecewise_linear(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)])?;
    let report = validate(&convex, 50, 3.0)?;
    println!("knots (0,0)-(1,1)-(2,3): pass = {}", report.pass);
    Ok(())
}
