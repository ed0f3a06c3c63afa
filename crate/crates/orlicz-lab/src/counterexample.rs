//! Quantitative norm-divergence certificate.
//!
//! The construction picks step heights `a_n` so that a two-sided recursion on
//! gap lengths `d_n` converges geometrically, then packages the resulting step
//! function together with exact lower bounds for the modulars of the running
//! Cesàro maxima of an i.i.d. realization. The certified norm lower bounds
//! grow like `sqrt(H_n)` (`H_n` the harmonic numbers), so they are unbounded:
//! a finite certificate for a divergence statement.
//!
//! Everything needed to re-check a certificate is stored in it; `verify`
//! re-derives every invariant from the stored sequences without trusting the
//! builder. Increments of `d` are stored separately because they span many
//! orders of magnitude and would vanish below the resolution of the partial
//! sums.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{neumaier_sum, rational_from_f64, Rational};
use crate::orlicz::{OrliczFunction, PhiSpec};
use crate::simplefn::SimpleFunction;

/// Geometric search grid for the step heights.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Ratio of the geometric grid of candidate heights.
    pub ratio: f64,
    /// Number of grid points probed above the previous height.
    pub max_steps: usize,
    /// Starting point `a_0` of the grid (the first height exceeds it).
    pub a_start: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            ratio: 1.05,
            max_steps: 2000,
            a_start: 1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundRecord {
    pub n: usize,
    /// Certified lower bound for `∫φ(h_n / C_n)`.
    pub modular_lower: f64,
    /// Certified lower bound for `‖h_n‖_φ`.
    pub norm_lower: f64,
}

/// All data of the construction at truncation depth `n_max`, sufficient for
/// independent re-verification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CounterexampleCertificate {
    pub phi: PhiSpec,
    pub n_max: usize,
    /// `C_n = sqrt(Σ_{m≤n} 1/m)` for n = 1..=n_max+1.
    pub c_seq: Vec<f64>,
    /// `S_n = 1/C_n` for n = 1..=n_max+1.
    pub s_seq: Vec<f64>,
    /// Step heights `a_n`, strictly increasing, n = 1..=n_max.
    pub a_seq: Vec<f64>,
    /// Gap increments `Δ_n = d_n − d_{n−1} = (S_n − S_{n+1})/φ(a_n)`.
    pub d_increments: Vec<f64>,
    /// Partial sums `d_0..d_{n_max}` with `d_0 = 1/4`.
    pub d_seq: Vec<f64>,
    /// Certified bracket for the limit `d`: `[d_{n_max}, 2^(1/n_max)·d_{n_max}]`.
    pub d_bracket: (f64, f64),
    /// Breakpoints `β_n = d_n / d_upper`, n = 0..=n_max.
    pub beta: Vec<f64>,
    /// Truncated step function `Σ a_i·χ[β_{i−1}, β_i)`; pieces whose f64
    /// breakpoints coincide are merged, the dropped heights remain in `a_seq`.
    pub f: SimpleFunction,
    /// Measure of the unrealized tail `[β_{n_max}, 1)`, reported not dropped.
    pub tail_measure: f64,
    /// Grid index accepted for each height (reproducibility log).
    pub search_steps: Vec<u32>,
    pub search: SearchConfig,
    /// Certified bounds for n = 1..=n_max/10.
    pub bounds: Vec<BoundRecord>,
}

impl CounterexampleCertificate {
    pub fn d_upper(&self) -> f64 {
        self.d_bracket.1
    }

    pub fn phi_fn(&self) -> Result<OrliczFunction> {
        self.phi.build()
    }
}

// ---------------------------------------------------------------------------
// construction
// ---------------------------------------------------------------------------

/// The two admissibility conditions for a candidate height at step `n`:
/// the scaled-value inequality `φ(a/(n·C_n)) ≥ φ(a)/(2·n·C_n)` and, from the
/// second step on, the geometric-decay cap on the induced gap increment.
fn admissible(
    phi: &OrliczFunction,
    a: f64,
    n: usize,
    c_n: f64,
    s_gap: f64,
    d_prev: f64,
) -> (bool, f64, f64) {
    let nc = n as f64 * c_n;
    let lhs = phi.eval_raw(a / nc);
    let rhs = phi.eval_raw(a) / (2.0 * nc);
    let lphi1 = lhs >= rhs && lhs.is_finite();
    let increment = s_gap / phi.eval_raw(a);
    let cap = if n >= 2 {
        let m = n - 1;
        (d_prev / (2f64).powi(m as i32)) * (1.0 - (2f64).powf(-1.0 / m as f64))
    } else {
        f64::INFINITY
    };
    (lphi1 && increment <= cap, lhs / rhs, increment)
}

/// Build a certificate of depth `n_max` for `φ`, or report that the height
/// search exhausted its grid (the construction's premise — the conjugate of
/// `φ` failing the Δ2-condition — then plausibly does not hold).
pub fn build_certificate(
    phi: &OrliczFunction,
    n_max: usize,
    search: &SearchConfig,
) -> Result<CounterexampleCertificate> {
    if n_max < 2 {
        return Err(Error::Input("build_certificate requires n_max >= 2".into()));
    }
    if !(search.ratio > 1.0) || search.max_steps == 0 || !(search.a_start > 0.0) {
        return Err(Error::Input(
            "search config requires ratio > 1, max_steps >= 1, a_start > 0".into(),
        ));
    }
    let validation = crate::orlicz::validate(phi, 64, 100.0)?;
    if !validation.pass {
        return Err(Error::Input(format!(
            "phi fails the Orlicz-function axioms: {:?}",
            validation.violation
        )));
    }

    // harmonic partial sums, C and S
    let mut c_seq = Vec::with_capacity(n_max + 1);
    let mut s_seq = Vec::with_capacity(n_max + 1);
    let mut harmonic = 0.0f64;
    for n in 1..=(n_max + 1) {
        harmonic += 1.0 / n as f64;
        let c = harmonic.sqrt();
        c_seq.push(c);
        s_seq.push(1.0 / c);
    }

    let mut a_seq: Vec<f64> = Vec::with_capacity(n_max);
    let mut d_increments: Vec<f64> = Vec::with_capacity(n_max);
    let mut d_seq: Vec<f64> = Vec::with_capacity(n_max + 1);
    let mut search_steps: Vec<u32> = Vec::with_capacity(n_max);
    d_seq.push(0.25);

    let mut a_prev = search.a_start;
    for n in 1..=n_max {
        let c_n = c_seq[n - 1];
        let s_gap = s_seq[n - 1] - s_seq[n];
        let d_prev = *d_seq.last().unwrap();
        let mut found: Option<(f64, f64, u32)> = None;
        let mut best_ratio = f64::NEG_INFINITY;
        let mut a = a_prev;
        for step in 1..=search.max_steps {
            a *= search.ratio;
            if !a.is_finite() || !phi.eval_raw(a).is_finite() {
                break;
            }
            let (ok, lphi1_ratio, increment) = admissible(phi, a, n, c_n, s_gap, d_prev);
            best_ratio = best_ratio.max(lphi1_ratio);
            if ok {
                found = Some((a, increment, step as u32));
                break;
            }
        }
        let (a_n, increment, step) = found.ok_or_else(|| Error::SearchExhausted {
            n,
            detail: format!(
                "no admissible height in ({:.6e}, {:.6e}]; best φ(a/(nC_n))·2nC_n/φ(a) = {:.6}; \
                 the conjugate of φ plausibly satisfies the Δ2-condition",
                a_prev,
                a_prev * search.ratio.powi(search.max_steps as i32),
                best_ratio
            ),
        })?;
        a_seq.push(a_n);
        d_increments.push(increment);
        d_seq.push(d_prev + increment);
        search_steps.push(step);
        a_prev = a_n;
    }

    let d_lower = *d_seq.last().unwrap();
    let d_upper = (2f64).powf(1.0 / n_max as f64) * d_lower;
    let beta: Vec<f64> = d_seq.iter().map(|d| d / d_upper).collect();

    let f = materialize_step_function(&beta, &a_seq)?;
    let tail_measure = 1.0 - beta[n_max];

    let mut cert = CounterexampleCertificate {
        phi: PhiSpec::of(phi),
        n_max,
        c_seq,
        s_seq,
        a_seq,
        d_increments,
        d_seq,
        d_bracket: (d_lower, d_upper),
        beta,
        f,
        tail_measure,
        search_steps,
        search: *search,
        bounds: Vec::new(),
    };
    let mut bounds = Vec::new();
    for n in 1..=(n_max / 10) {
        let modular = certify_modular_lower_bound(&cert, n)?;
        let norm = norm_lower_bound_inner(&cert, n, &modular)?;
        bounds.push(BoundRecord {
            n,
            modular_lower: modular.value,
            norm_lower: norm.value,
        });
    }
    cert.bounds = bounds;
    Ok(cert)
}

/// Step function with breakpoints `β` (exact f64 dyadic rationals) and heights
/// `a`; value 0 on `[0, β_0)` and on the tail `[β_{n_max}, 1)`. Breakpoints
/// stalled below f64 resolution collapse to zero-measure pieces and are merged.
fn materialize_step_function(beta: &[f64], a_seq: &[f64]) -> Result<SimpleFunction> {
    let mut pieces: Vec<(Rational, f64)> = Vec::with_capacity(a_seq.len() + 2);
    let beta0 = rational_from_f64(beta[0])?;
    pieces.push((beta0, 0.0));
    let mut prev = beta[0];
    for (i, &a) in a_seq.iter().enumerate() {
        let b = beta[i + 1];
        if b > prev {
            pieces.push((rational_from_f64(b)?, a));
            prev = b;
        }
    }
    if prev < 1.0 {
        pieces.push((rational_from_f64(1.0)?, 0.0));
    }
    SimpleFunction::new(pieces)
}

// ---------------------------------------------------------------------------
// exact 1-D reduction
// ---------------------------------------------------------------------------

/// `∫₀¹ yⁿ⁻¹ φ(f(y)/scale) dy = Σᵢ φ(|vᵢ|/scale)·(eᵢⁿ − eᵢ₋₁ⁿ)/n` in closed
/// form over the pieces of `f`, with compensated summation.
pub fn exact_power_integral(
    f: &SimpleFunction,
    n: usize,
    scale: f64,
    phi: &OrliczFunction,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::Input("exact_power_integral requires n >= 1".into()));
    }
    if !(scale > 0.0) {
        return Err(Error::Input(
            "exact_power_integral requires scale > 0".into(),
        ));
    }
    let mut prev_end = 0.0f64;
    let terms: Vec<f64> = f
        .pieces()
        .iter()
        .map(|p| {
            let end = crate::numeric::rational_to_f64(&p.end);
            let weight = (end.powi(n as i32) - prev_end.powi(n as i32)) / n as f64;
            prev_end = end;
            if p.value == 0.0 {
                0.0
            } else {
                phi.eval_raw(p.value.abs() / scale) * weight
            }
        })
        .collect();
    Ok(neumaier_sum(terms))
}

// ---------------------------------------------------------------------------
// certified bounds
// ---------------------------------------------------------------------------

/// Certified lower bound for `∫φ(h_n/C_n)`, where `h_n` is the running
/// Cesàro maximum of `n` i.i.d. copies of the certificate's step function.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularBound {
    pub n: usize,
    /// Telescoped convexity chain: `H_n·(S_n − S_{n_max+1})/(4·C_n·d_upper)`.
    pub chain: f64,
    /// Exact evaluation of the first inequality of the chain,
    /// `Σ_{m≤n} ∫ yⁿ⁻¹ φ(f(y)/(m·C_n)) dy`, from the stored sequences.
    pub exact_integral: f64,
    /// The certified bound: max of the two routes.
    pub value: f64,
    /// `value·4·d_upper`, the fraction of the asymptotic target `1/(4·d_upper)`.
    pub fraction_of_target: f64,
    /// `S_{n_max+1}/S_n`, the share of the telescoped mass lost to truncation.
    pub tail_fraction: f64,
}

/// Assemble the certified modular lower bound at depth `n ≤ n_max/2` (closer
/// to the truncation the discarded tail dominates and the bound goes vacuous).
///
/// Both routes are true lower bounds given the certificate invariants; the
/// chain instantiates the telescoped form exactly, while the integral route
/// evaluates `Σ_m Σ_i φ(aᵢ/(m·C_n))·(βᵢⁿ − βᵢ₋₁ⁿ)/n` with the increment
/// factored as `Δᵢ/d_upper` so that sub-resolution gaps are not lost.
pub fn certify_modular_lower_bound(
    cert: &CounterexampleCertificate,
    n: usize,
) -> Result<ModularBound> {
    if n < 1 {
        return Err(Error::Input("bound depth must be >= 1".into()));
    }
    if n > cert.n_max / 2 {
        return Err(Error::TailDominated {
            n,
            detail: format!(
                "requires n <= n_max/2 = {}; the truncated tail S_{}/S_{} = {:.3} would dominate",
                cert.n_max / 2,
                cert.n_max + 1,
                n,
                cert.s_seq[cert.n_max] / cert.s_seq[n - 1]
            ),
        });
    }
    let phi = cert.phi_fn()?;
    let d_upper = cert.d_upper();
    let c_n = cert.c_seq[n - 1];
    let s_n = cert.s_seq[n - 1];
    let s_tail = cert.s_seq[cert.n_max];
    let h_n = c_n * c_n;

    // Both routes certify the materialized step function, so each piece
    // enters with its realized measure β_i − β_{i−1}. Adjacent β are within a
    // factor of 2, so the f64 subtraction is exact; gaps that stalled below
    // f64 resolution carry measure 0 here and were merged away in `f`.
    let measures: Vec<f64> = (0..cert.n_max)
        .map(|i| cert.beta[i + 1] - cert.beta[i])
        .collect();

    let chain_tail =
        neumaier_sum((n..=cert.n_max).map(|i| phi.eval_raw(cert.a_seq[i - 1]) * measures[i - 1]));
    let chain = h_n * chain_tail / (4.0 * c_n);

    // exact integral route, m = 1..=n summed over the materialized pieces
    let mut total = 0.0f64;
    for m in 1..=n {
        let scale = m as f64 * c_n;
        let terms: Vec<f64> = (0..cert.n_max)
            .map(|i| {
                if measures[i] == 0.0 {
                    return 0.0;
                }
                let beta_lo = cert.beta[i];
                let beta_hi = cert.beta[i + 1];
                // (β_hi^n − β_lo^n)/n = (β_hi − β_lo)·(Σ_k β_hi^k β_lo^(n−1−k))/n
                let mut geom = 0.0f64;
                for k in 0..n {
                    geom += beta_hi.powi(k as i32) * beta_lo.powi((n - 1 - k) as i32);
                }
                phi.eval_raw(cert.a_seq[i] / scale) * measures[i] * geom / n as f64
            })
            .collect();
        total += neumaier_sum(terms);
    }

    let value = chain.max(total);
    Ok(ModularBound {
        n,
        chain,
        exact_integral: total,
        value,
        fraction_of_target: value * 4.0 * d_upper,
        tail_fraction: s_tail / s_n,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormBound {
    pub n: usize,
    /// Certified lower bound for `‖h_n‖_φ`.
    pub value: f64,
    /// Fraction of the target modular level actually achieved, capped at 1;
    /// the bound is `fraction·C_n/(4·d_upper)`.
    pub fraction: f64,
    /// Shortfall `1 − fraction` before capping (0 when the target is met).
    pub epsilon: f64,
}

fn norm_lower_bound_inner(
    cert: &CounterexampleCertificate,
    n: usize,
    modular: &ModularBound,
) -> Result<NormBound> {
    let rho = modular.fraction_of_target;
    let epsilon = (1.0 - rho).max(0.0);
    if rho < 0.5 {
        return Err(Error::PremiseNotMet(format!(
            "modular bound at n = {n} reaches only {:.3} of the 1/(4·d_upper) target",
            rho
        )));
    }
    let fraction = rho.min(1.0);
    Ok(NormBound {
        n,
        value: fraction * cert.c_seq[n - 1] / (4.0 * cert.d_upper()),
        fraction,
        epsilon,
    })
}

/// Certified lower bound `‖h_n‖_φ ≥ fraction·C_n/(4·d_upper)`: scaling the
/// modular bound by convexity until the modular reaches 1. Requires the
/// modular bound to achieve at least half the target level; the shortfall is
/// logged in the record.
pub fn norm_lower_bound(cert: &CounterexampleCertificate, n: usize) -> Result<NormBound> {
    let modular = certify_modular_lower_bound(cert, n)?;
    norm_lower_bound_inner(cert, n, &modular)
}

// ---------------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub all_pass: bool,
    pub checks: Vec<CheckResult>,
}

fn check(checks: &mut Vec<CheckResult>, name: &str, pass: bool, detail: String) {
    checks.push(CheckResult {
        name: name.into(),
        pass,
        detail,
    });
}

/// Re-verify every certificate invariant from the stored sequences alone.
pub fn verify_certificate(cert: &CounterexampleCertificate) -> Result<VerificationReport> {
    let phi = cert.phi_fn()?;
    let n_max = cert.n_max;
    let mut checks = Vec::new();

    let lengths_ok = cert.c_seq.len() == n_max + 1
        && cert.s_seq.len() == n_max + 1
        && cert.a_seq.len() == n_max
        && cert.d_increments.len() == n_max
        && cert.d_seq.len() == n_max + 1
        && cert.beta.len() == n_max + 1;
    check(&mut checks, "shape", lengths_ok, format!("n_max = {n_max}"));
    if !lengths_ok {
        return Ok(VerificationReport {
            all_pass: false,
            checks,
        });
    }

    // closed forms of C and S
    let mut harmonic = 0.0f64;
    let mut cs_ok = true;
    let mut cs_detail = String::new();
    for n in 1..=(n_max + 1) {
        harmonic += 1.0 / n as f64;
        let c = harmonic.sqrt();
        let dc = (cert.c_seq[n - 1] - c).abs();
        let ds = (cert.s_seq[n - 1] - 1.0 / c).abs();
        if dc > 1e-12 * c || ds > 1e-12 {
            cs_ok = false;
            cs_detail = format!("mismatch at n = {n}: ΔC = {dc:.3e}, ΔS = {ds:.3e}");
            break;
        }
    }
    let monotone =
        cert.c_seq.windows(2).all(|w| w[1] > w[0]) && cert.s_seq.windows(2).all(|w| w[1] < w[0]);
    check(
        &mut checks,
        "c-and-s-closed-forms",
        cs_ok && monotone,
        if cs_detail.is_empty() {
            "C strictly increasing, S strictly decreasing".into()
        } else {
            cs_detail
        },
    );

    let a_ok = cert.a_seq.windows(2).all(|w| w[1] > w[0])
        && cert.a_seq.iter().all(|a| a.is_finite() && *a > 0.0);
    check(
        &mut checks,
        "heights-strictly-increasing",
        a_ok,
        String::new(),
    );

    // d recursion against the stored increments
    let mut rec_ok = true;
    let mut rec_detail = String::new();
    for n in 1..=n_max {
        let want = (cert.s_seq[n - 1] - cert.s_seq[n]) / phi.eval_raw(cert.a_seq[n - 1]);
        let got = cert.d_increments[n - 1];
        if (got - want).abs() > 1e-9 * want.abs() {
            rec_ok = false;
            rec_detail = format!("increment {n}: stored {got:.6e}, recomputed {want:.6e}");
            break;
        }
        let cum = cert.d_seq[n - 1] + got;
        if (cert.d_seq[n] - cum).abs() > 1e-12 * cum {
            rec_ok = false;
            rec_detail = format!("partial sum {n} inconsistent");
            break;
        }
    }
    check(
        &mut checks,
        "d-recursion",
        rec_ok && cert.d_seq[0] == 0.25,
        rec_detail,
    );

    // (scaled-value inequality) at every n
    let mut lphi1_ok = true;
    let mut lphi1_detail = String::new();
    for n in 1..=n_max {
        let nc = n as f64 * cert.c_seq[n - 1];
        let lhs = phi.eval_raw(cert.a_seq[n - 1] / nc);
        let rhs = phi.eval_raw(cert.a_seq[n - 1]) / (2.0 * nc);
        if !(lhs >= rhs) {
            lphi1_ok = false;
            lphi1_detail = format!("fails at n = {n}: {lhs:.6e} < {rhs:.6e}");
            break;
        }
    }
    check(
        &mut checks,
        "scaled-value-inequality",
        lphi1_ok,
        lphi1_detail,
    );

    // geometric-decay condition on the increments
    let mut decay_ok = true;
    let mut decay_detail = String::new();
    for n in 1..n_max {
        let cap = (cert.d_seq[n] / (2f64).powi(n as i32)) * (1.0 - (2f64).powf(-1.0 / n as f64));
        if !(cert.d_increments[n] <= cap) {
            decay_ok = false;
            decay_detail = format!(
                "fails at n = {n}: increment {:.6e} > cap {:.6e}",
                cert.d_increments[n], cap
            );
            break;
        }
    }
    check(&mut checks, "geometric-decay", decay_ok, decay_detail);

    // bracket and the power condition it certifies
    let (d_lo, d_up) = cert.d_bracket;
    let bracket_ok = d_lo == cert.d_seq[n_max]
        && (d_up - (2f64).powf(1.0 / n_max as f64) * d_lo).abs() <= 1e-15 * d_up;
    check(
        &mut checks,
        "d-bracket",
        bracket_ok,
        format!("[{d_lo:.12}, {d_up:.12}]"),
    );

    // (d_n/d_upper)^n ≥ 1/2, equivalently d_n ≥ 2^(−1/n)·d_upper: the bracket
    // validity condition that the downstream bounds lean on
    let mut power_ok = true;
    let mut power_detail = String::new();
    for n in 1..=n_max {
        let val = (cert.d_seq[n] / d_up).powi(n as i32);
        if val < 0.5 - 1e-12 {
            power_ok = false;
            power_detail = format!("(d_{n}/d_upper)^{n} = {val:.15} < 1/2");
            break;
        }
    }
    check(
        &mut checks,
        "bracket-power-condition",
        power_ok,
        power_detail,
    );

    // β and the materialized step function
    let beta_ok = cert
        .beta
        .iter()
        .zip(&cert.d_seq)
        .all(|(b, d)| *b == d / d_up)
        && cert.beta.windows(2).all(|w| w[1] >= w[0]);
    let f_ok = match materialize_step_function(&cert.beta, &cert.a_seq) {
        Ok(f) => f == cert.f,
        Err(_) => false,
    };
    let tail_ok = (cert.tail_measure - (1.0 - cert.beta[n_max])).abs() <= 1e-15;
    check(
        &mut checks,
        "breakpoints-and-step-function",
        beta_ok && f_ok && tail_ok,
        format!("tail measure {:.6e}", cert.tail_measure),
    );

    // stored bounds reproducible
    let mut bounds_ok = true;
    let mut bounds_detail = String::new();
    for rec in &cert.bounds {
        match (
            certify_modular_lower_bound(cert, rec.n),
            norm_lower_bound(cert, rec.n),
        ) {
            (Ok(m), Ok(nb)) => {
                if (m.value - rec.modular_lower).abs() > 1e-12 * m.value.abs().max(1e-300)
                    || (nb.value - rec.norm_lower).abs() > 1e-12 * nb.value.abs().max(1e-300)
                {
                    bounds_ok = false;
                    bounds_detail = format!("bound record at n = {} not reproducible", rec.n);
                    break;
                }
            }
            _ => {
                bounds_ok = false;
                bounds_detail = format!("bound at n = {} not recomputable", rec.n);
                break;
            }
        }
    }
    check(&mut checks, "bounds-reproducible", bounds_ok, bounds_detail);

    let all_pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport { all_pass, checks })
}

// ---------------------------------------------------------------------------
// Monte Carlo sanity check
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct McReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub certified_lower_bound: f64,
    /// One-sided consistency: `estimate + 3·stderr ≥ certified bound`.
    pub consistent: bool,
}

/// Monte Carlo estimate of `∫ φ(h_n/c_scale)` over `[0,1]ⁿ`, where
/// `h_n = max_{m≤n} (f(x_1)+…+f(x_m))/m`.
///
/// Each coordinate is drawn from an equal mixture of the uniform law and a
/// piece-uniform proposal (pick a piece of `f`, then a uniform point in it),
/// with the exact importance weight applied. Step functions of this kind pair
/// huge values with tiny measures; plain uniform sampling would never see
/// those pieces and would bias the estimate low with a deceptively small
/// standard error. The weighted estimator is unbiased with bounded weights.
/// Sampling is counter-based (one ChaCha stream per sample) so results do not
/// depend on worker count.
pub fn mc_modular_estimate(
    f: &SimpleFunction,
    c_scale: f64,
    n: usize,
    samples: usize,
    seed: u64,
    phi: &OrliczFunction,
) -> (f64, f64) {
    let mut prev = 0.0f64;
    let mut starts: Vec<f64> = Vec::with_capacity(f.pieces().len());
    let mut ends: Vec<f64> = Vec::with_capacity(f.pieces().len());
    let mut values: Vec<f64> = Vec::with_capacity(f.pieces().len());
    for p in f.pieces() {
        let end = crate::numeric::rational_to_f64(&p.end);
        starts.push(prev);
        ends.push(end);
        values.push(p.value);
        prev = end;
    }
    // proposal support: pieces with positive f64 length
    let proposal: Vec<usize> = (0..values.len()).filter(|&i| ends[i] > starts[i]).collect();
    let p_count = proposal.len() as f64;
    let piece_of = |x: f64| -> usize {
        let idx = ends.partition_point(|&b| b <= x);
        idx.min(values.len() - 1)
    };
    let density = |x: f64| -> f64 {
        let i = piece_of(x);
        let len = ends[i] - starts[i];
        if len > 0.0 {
            0.5 + 0.5 / (p_count * len)
        } else {
            f64::INFINITY
        }
    };

    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for s in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(s as u64);
        let mut running = 0.0f64;
        let mut h = f64::NEG_INFINITY;
        let mut weight = 1.0f64;
        for m in 1..=n {
            let x: f64 = if rng.gen::<f64>() < 0.5 {
                rng.gen()
            } else {
                let i = proposal[rng.gen_range(0..proposal.len())];
                starts[i] + rng.gen::<f64>() * (ends[i] - starts[i])
            };
            weight /= density(x);
            running += values[piece_of(x)];
            h = h.max(running / m as f64);
        }
        let y = phi.eval_raw((h / c_scale).abs()) * weight;
        sum += y;
        sum_sq += y * y;
    }
    let mean = sum / samples as f64;
    let var = (sum_sq / samples as f64 - mean * mean).max(0.0);
    let stderr = (var / samples as f64).sqrt();
    (mean, stderr)
}

/// One-sided Monte Carlo consistency check of the certified modular bound at
/// depth `n ≤ 20`: the estimate plus three standard errors must dominate the
/// bound. Never an equality claim.
pub fn mc_sanity_check(
    cert: &CounterexampleCertificate,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<McReport> {
    if n > 20 {
        return Err(Error::Input(
            "mc_sanity_check caps the dimension at n = 20".into(),
        ));
    }
    if samples < 10_000 {
        return Err(Error::Input(
            "mc_sanity_check requires at least 10^4 samples".into(),
        ));
    }
    let phi = cert.phi_fn()?;
    let bound = certify_modular_lower_bound(cert, n)?.value;
    let (estimate, stderr) =
        mc_modular_estimate(&cert.f, cert.c_seq[n - 1], n, samples, seed, &phi);
    Ok(McReport {
        n,
        samples,
        seed,
        estimate,
        stderr,
        certified_lower_bound: bound,
        consistent: estimate + 3.0 * stderr >= bound,
    })
}
