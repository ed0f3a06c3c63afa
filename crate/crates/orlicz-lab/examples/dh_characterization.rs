//! Eligible block sequences: the convexity-ratio table b_{n,m}, the
//! weak-null criterion, the series test Σ b_m/m, realization as disjoint
//! unit-norm step functions, and the series identity cross-check.
//!
//! ```bash
//! cargo run -p orlicz-lab --example dh_characterization
//! ```

use orlicz_lab::dhtest::{
    b_table, cross_check_series_identity, dh_series_test, realize, weak_null_criterion,
    EligibleSequence, DEFAULT_DENOM_CAP,
};
use orlicz_lab::OrliczFunction;

fn main() -> orlicz_lab::Result<()> {
    let seq = EligibleSequence::singleton_powers(2.0, 8)?;

    // for φ = t^p the table collapses to m^(1−p) independent of the blocks
    let p2 = OrliczFunction::power(2.0)?;
    let table = b_table(&p2, &seq, 8, 8, 1e-9)?;
    println!(
        "b-table for t² on singleton blocks (row n = 3): {:?}",
        table.entries[2]
    );

    let rep = weak_null_criterion(&table, 0.3)?;
    println!("weak-null criterion at ε = 0.3: {:?}", rep.verdict);

    let lin = OrliczFunction::linear();
    let table = b_table(&lin, &seq, 8, 8, 1e-9)?;
    let rep = weak_null_criterion(&table, 0.3)?;
    println!("same for t (b ≡ 1): {:?}", rep.verdict);

    println!("\nseries test Σ b_m/m at M = 10000:");
    for phi in [p2.clone(), OrliczFunction::power(3.0)?, lin.clone()] {
        let rep = dh_series_test(&phi, &seq, 8, 10_000, 1e-9)?;
        println!(
            "  {:<8} verdict = {:<16?} partial sum = {:.6}",
            phi.family_name(),
            rep.verdict,
            rep.partial_sums.last().unwrap()
        );
    }

    // realization: |A_t| = w_t/φ(t) packed left to right, unit Luxemburg norms
    let real = realize(&p2, &seq, 8, DEFAULT_DENOM_CAP)?;
    println!(
        "\nrealized 8 disjoint functions, capacity used = {:.6}",
        real.capacity_used
    );
    for (i, f) in real.functions.iter().enumerate().take(3) {
        println!(
            "  f_{}: support measure = {}, norm = {:.9}",
            i + 1,
            f.support_measure(),
            f.luxemburg_norm(&p2, 1e-10)?
        );
    }

    let rep = cross_check_series_identity(&p2, &seq, 8)?;
    println!(
        "\nseries identity ∫φ(Σ f_n/n) = Σ b_(n,n)/n: lhs = {:.9}, rhs = {:.9}, diff = {:.2e}",
        rep.lhs, rep.rhs, rep.diff
    );
    Ok(())
}
