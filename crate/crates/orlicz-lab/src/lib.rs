//! Numerical laboratory for Orlicz function spaces on the unit interval.
//!
//! The crate is organized around exact step functions ([`simplefn::SimpleFunction`])
//! and validated Orlicz functions ([`orlicz::OrliczFunction`]). On top of those it
//! provides:
//!
//! - Luxemburg norms, modulars, decreasing rearrangements and distribution
//!   profiles ([`simplefn`]);
//! - convex conjugation and Δ2 growth probes ([`orlicz`]);
//! - Cesàro averaging with order-boundedness diagnostics and deterministic
//!   running-supremum inequalities ([`cesaro`]);
//! - a quantitative norm-divergence certificate built from a recursive step
//!   construction, with exact lower bounds and a Monte Carlo sanity check
//!   ([`counterexample`]);
//! - the eligible-block-sequence machinery: convexity-ratio tables, the
//!   weak-null criterion and the averaging series test ([`dhtest`]);
//! - a batch front end with JSON/CSV reports ([`cli`]).
//!
//! Breakpoints and measures are exact rationals throughout; function values
//! are `f64`. Every operation is pure, so everything here is safe to call
//! concurrently.
//!
//! See the `examples/` directory for one runnable walkthrough per capability.

// `!(x > 0.0)` guards are deliberate: they reject NaN, `x <= 0.0` would not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cesaro;
pub mod cli;
pub mod counterexample;
pub mod dhtest;
pub mod error;
pub mod numeric;
pub mod orlicz;
pub mod simplefn;

pub use error::{Error, Result};
pub use orlicz::OrliczFunction;
pub use simplefn::SimpleFunction;
