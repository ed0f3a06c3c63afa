//! Cesàro averaging of function sequences, order-boundedness diagnostics at
//! finite truncation, and the deterministic running-supremum inequalities
//! that drive them.
//!
//! Everything here is finite-truncation: verdicts about limits are labeled
//! trend-only, while the pointwise inequalities are theorems and any reported
//! violation is a bug.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{neumaier_sum, ratio_u64, Rational};
use crate::orlicz::OrliczFunction;
use crate::simplefn::SimpleFunction;

/// Deterministic rule producing the k-th function of a sequence on demand.
#[derive(Clone, Debug)]
pub enum Generator {
    /// A stored prefix.
    Explicit(Vec<SimpleFunction>),
    /// Seeded random step functions with dyadic breakpoints anywhere in [0,1].
    SeededRandom {
        seed: u64,
        max_pieces: usize,
        value_scale: f64,
    },
    /// Seeded random functions, the k-th supported on the k-th dyadic block
    /// `[1 − 2^(1−k), 1 − 2^(−k))`; pairwise disjoint by construction.
    SeededDisjointBlocks {
        seed: u64,
        max_pieces: usize,
        value_scale: f64,
    },
    /// Normalized copies of a base function squeezed into consecutive dyadic
    /// blocks (`‖f_k‖_φ = 1`); disjoint by construction. This is how a
    /// divergence certificate's step function is turned into a sequence.
    DisjointDilates {
        base: SimpleFunction,
        phi: OrliczFunction,
    },
}

/// A lazily generated sequence with a disjointness declaration that can be
/// verified exactly on any prefix.
#[derive(Clone, Debug)]
pub struct FunctionSequence {
    generator: Generator,
    declared_disjoint: bool,
}

fn per_index_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

/// Random step function with `pieces` pieces, dyadic breakpoints of
/// denominator 2^12 inside `[0,1)` and values uniform in ±`value_scale`.
fn random_function(rng: &mut ChaCha8Rng, max_pieces: usize, value_scale: f64) -> SimpleFunction {
    let denom: u64 = 1 << 12;
    let pieces = rng.gen_range(1..=max_pieces.max(1));
    let mut cuts: Vec<u64> = (0..pieces - 1).map(|_| rng.gen_range(1..denom)).collect();
    cuts.sort_unstable();
    cuts.dedup();
    cuts.push(denom);
    let ends: Vec<Rational> = cuts.iter().map(|&c| ratio_u64(c, denom)).collect();
    let values: Vec<f64> = ends
        .iter()
        .map(|_| {
            let v: f64 = rng.gen_range(-1.0..1.0);
            v * value_scale
        })
        .collect();
    SimpleFunction::new(ends.into_iter().zip(values).collect())
        .expect("generated breakpoints are valid")
}

/// `[1 − 2^(1−k), 1 − 2^(−k))` as exact rationals, k ≥ 1.
fn dyadic_block(k: usize) -> (Rational, Rational) {
    let den: Rational = ratio_u64(1, 1 << k.min(62)) * pow2_correction(k);
    let start = Rational::one() - &den * Rational::from_integer(2.into());
    (start, den)
}

// blocks beyond 2^62 need big integers; build 2^-k exactly for any k
fn pow2_correction(k: usize) -> Rational {
    if k <= 62 {
        Rational::one()
    } else {
        let mut r = Rational::one();
        let half = ratio_u64(1, 2);
        for _ in 62..k {
            r *= &half;
        }
        r
    }
}

impl FunctionSequence {
    pub fn explicit(functions: Vec<SimpleFunction>, declared_disjoint: bool) -> Self {
        FunctionSequence {
            generator: Generator::Explicit(functions),
            declared_disjoint,
        }
    }

    pub fn seeded_random(seed: u64, max_pieces: usize, value_scale: f64) -> Self {
        FunctionSequence {
            generator: Generator::SeededRandom {
                seed,
                max_pieces,
                value_scale,
            },
            declared_disjoint: false,
        }
    }

    pub fn seeded_disjoint_blocks(seed: u64, max_pieces: usize, value_scale: f64) -> Self {
        FunctionSequence {
            generator: Generator::SeededDisjointBlocks {
                seed,
                max_pieces,
                value_scale,
            },
            declared_disjoint: true,
        }
    }

    pub fn disjoint_dilates(base: SimpleFunction, phi: OrliczFunction) -> Self {
        FunctionSequence {
            generator: Generator::DisjointDilates { base, phi },
            declared_disjoint: true,
        }
    }

    pub fn declared_disjoint(&self) -> bool {
        self.declared_disjoint
    }

    /// The k-th function, 1-based.
    pub fn generate(&self, k: usize) -> Result<SimpleFunction> {
        if k == 0 {
            return Err(Error::Input("sequence indices are 1-based".into()));
        }
        match &self.generator {
            Generator::Explicit(fs) => fs
                .get(k - 1)
                .cloned()
                .ok_or_else(|| Error::Input(format!("explicit sequence has no term {k}"))),
            Generator::SeededRandom {
                seed,
                max_pieces,
                value_scale,
            } => {
                let mut rng = per_index_rng(*seed, k);
                Ok(random_function(&mut rng, *max_pieces, *value_scale))
            }
            Generator::SeededDisjointBlocks {
                seed,
                max_pieces,
                value_scale,
            } => {
                let mut rng = per_index_rng(*seed, k);
                let inner = random_function(&mut rng, *max_pieces, *value_scale);
                let (start, len) = dyadic_block(k);
                inner.affine_embed(&start, &len)
            }
            Generator::DisjointDilates { base, phi } => {
                if base.is_zero() {
                    return Ok(SimpleFunction::zero());
                }
                let (start, len) = dyadic_block(k);
                let embedded = base.affine_embed(&start, &len)?;
                let norm = embedded.luxemburg_norm(phi, 1e-12)?;
                if norm == 0.0 {
                    return Ok(embedded);
                }
                Ok(embedded.scale(1.0 / norm))
            }
        }
    }

    pub fn prefix(&self, k: usize) -> Result<Vec<SimpleFunction>> {
        (1..=k).map(|i| self.generate(i)).collect()
    }

    /// Pairwise disjointness of the first `k` terms, checked with exact
    /// rational interval arithmetic.
    pub fn verify_disjoint_prefix(&self, k: usize) -> Result<()> {
        let fs = self.prefix(k)?;
        // fold the supports: overlap shows up as a piece where the running
        // union and the next function are both nonzero
        let mut union = SimpleFunction::zero();
        for (i, f) in fs.iter().enumerate() {
            if !union.supports_disjoint(f) {
                return Err(Error::Input(format!(
                    "sequence is not disjoint: term {} overlaps an earlier term",
                    i + 1
                )));
            }
            union = union.zip_with(f, |a, b| if a != 0.0 || b != 0.0 { 1.0 } else { 0.0 });
        }
        Ok(())
    }
}

/// `(1/n)·Σ_{k≤n} f_k` on the exact common refinement.
pub fn cesaro_average(seq: &FunctionSequence, n: usize) -> Result<SimpleFunction> {
    if n < 1 {
        return Err(Error::Input("cesaro_average requires n >= 1".into()));
    }
    let mut sum = SimpleFunction::zero();
    for k in 1..=n {
        sum = sum.add(&seq.generate(k)?);
    }
    Ok(sum.scale(1.0 / n as f64))
}

// ---------------------------------------------------------------------------
// order-boundedness diagnostics
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendVerdict {
    BoundedTrend,
    UnboundedTrend,
    Inconclusive,
}

#[derive(Clone, Copy, Debug)]
pub struct DiagnosticsConfig {
    pub norm_tol: f64,
    /// Growth ratio over the last decade below which the trend counts as flat.
    pub growth_eps: f64,
    /// Slope of `sup_norms` against `sqrt(log n)` above which the trend counts
    /// as divergent. The certified divergence rate of the counterexample
    /// construction is exactly of that order.
    pub divergence_slope: f64,
    /// Late gaps must fall below this fraction of the earliest gap for the
    /// Cauchy criterion to count as satisfied.
    pub gap_shrink: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            norm_tol: 1e-9,
            growth_eps: 0.01,
            divergence_slope: 0.05,
            gap_shrink: 0.5,
        }
    }
}

/// Running-supremum report for the Cesàro averages `A_n` of a sequence:
/// `sup_norms[n−1] = ‖∨_{i≤n} |A_i|‖_φ` and
/// `cauchy_gaps[r−1] = max_{r<s≤N} ‖∨_s − ∨_r‖_φ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CesaroDiagnostics {
    pub depth: usize,
    pub sup_norms: Vec<f64>,
    pub cauchy_gaps: Vec<f64>,
    pub verdict: TrendVerdict,
    pub note: String,
}

/// Compute running-supremum norms and Cauchy gaps up to depth `N` and
/// classify the trend. Finite truncation can refute nothing about the
/// infinite statement; the note says so.
pub fn diagnose_order_boundedness(
    phi: &OrliczFunction,
    seq: &FunctionSequence,
    depth: usize,
    cfg: &DiagnosticsConfig,
) -> Result<CesaroDiagnostics> {
    if depth < 2 {
        return Err(Error::Input("diagnose requires depth >= 2".into()));
    }
    let mut sum = SimpleFunction::zero();
    let mut running = SimpleFunction::zero();
    let mut snapshots: Vec<SimpleFunction> = Vec::with_capacity(depth);
    let mut sup_norms = Vec::with_capacity(depth);
    for n in 1..=depth {
        sum = sum.add(&seq.generate(n)?);
        let avg_abs = sum.scale(1.0 / n as f64).abs();
        running = running.sup(&avg_abs);
        snapshots.push(running.clone());
        sup_norms.push(running.luxemburg_norm(phi, cfg.norm_tol)?);
    }
    for w in sup_norms.windows(2) {
        if w[1] < w[0] - 2.0 * cfg.norm_tol {
            return Err(Error::CheckFailed(format!(
                "sup_norms must be nondecreasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }

    let mut cauchy_gaps = Vec::with_capacity(depth.saturating_sub(1));
    for r in 1..depth {
        let mut gap = 0.0f64;
        for s in (r + 1)..=depth {
            let diff = snapshots[s - 1].sub(&snapshots[r - 1]);
            gap = gap.max(diff.luxemburg_norm(phi, cfg.norm_tol)?);
        }
        cauchy_gaps.push(gap);
    }
    for w in cauchy_gaps.windows(2) {
        if w[1] > w[0] + 2.0 * cfg.norm_tol {
            return Err(Error::CheckFailed(format!(
                "cauchy_gaps must be nonincreasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }

    let last = sup_norms[depth - 1];
    let half = sup_norms[depth / 2 - 1];
    let verdict = if last <= 1e-12 {
        TrendVerdict::BoundedTrend
    } else {
        let slope = (last - half) / ((depth as f64).ln().sqrt() - (depth as f64 / 2.0).ln().sqrt());
        let growth_flat = last <= half * (1.0 + cfg.growth_eps) + 1e-15;
        let first_gap = cauchy_gaps.first().copied().unwrap_or(0.0);
        let late_gap = cauchy_gaps.get(depth / 2 - 1).copied().unwrap_or(0.0);
        let gaps_shrink = late_gap <= cfg.gap_shrink * first_gap + 2.0 * cfg.norm_tol;
        if slope > cfg.divergence_slope && last > half {
            TrendVerdict::UnboundedTrend
        } else if growth_flat && gaps_shrink {
            TrendVerdict::BoundedTrend
        } else {
            TrendVerdict::Inconclusive
        }
    };

    Ok(CesaroDiagnostics {
        depth,
        sup_norms,
        cauchy_gaps,
        verdict,
        note: "trend verdict at finite truncation; the infinite statement is \
               neither proved nor refuted by a finite prefix"
            .into(),
    })
}

// ---------------------------------------------------------------------------
// disjoint p-convexity bound
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PConvexReport {
    pub n: usize,
    pub m: usize,
    pub p: f64,
    /// `‖g_m − g_n‖_φ` with `g_n = Σ_{k≤n} |f_k|/k`.
    pub lhs: f64,
    /// `(Σ_{k=n+1}^m k^(−p))^(1/p) · sup_{k≤m} ‖f_k‖_φ` (constant M = 1).
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    /// `∨_{k≤m} |A_k|` equals `Σ_{k≤m} |f_k|/k` exactly for disjoint input.
    pub sup_identity_exact: bool,
    /// Max pointwise deviation of `g_m` from `(Σ |f_k|^p / k^p)^(1/p)`.
    pub proot_identity_dev: f64,
}

/// Check the disjoint p-convexity bound
/// `‖g_m − g_n‖ ≤ (Σ_{k=n+1}^m k^(−p))^(1/p) · sup_k ‖f_k‖` for `φ = t^p`,
/// along with the two disjointness identities it rests on.
pub fn disjoint_p_convex_bound_check(
    phi: &OrliczFunction,
    seq: &FunctionSequence,
    n: usize,
    m: usize,
    tol: f64,
) -> Result<PConvexReport> {
    let p = match phi {
        OrliczFunction::Power { p } if *p > 1.0 => *p,
        _ => {
            return Err(Error::Input(
                "disjoint_p_convex_bound_check requires the power family with p > 1".into(),
            ))
        }
    };
    if !(n >= 1 && n < m) {
        return Err(Error::Input("requires 1 <= n < m".into()));
    }
    if !seq.declared_disjoint() {
        return Err(Error::Input("sequence is not declared disjoint".into()));
    }
    seq.verify_disjoint_prefix(m)?;

    let fs = seq.prefix(m)?;
    let weighted = |upto: usize| -> SimpleFunction {
        let mut g = SimpleFunction::zero();
        for (k, f) in fs.iter().take(upto).enumerate() {
            g = g.add(&f.abs().scale(1.0 / (k + 1) as f64));
        }
        g
    };
    let g_n = weighted(n);
    let g_m = weighted(m);

    // identity 1: the running Cesàro supremum collapses to the weighted sum
    let mut sum = SimpleFunction::zero();
    let mut sup = SimpleFunction::zero();
    for (k, f) in fs.iter().enumerate() {
        sum = sum.add(f);
        sup = sup.sup(&sum.scale(1.0 / (k + 1) as f64).abs());
    }
    let sup_identity_exact = sup == g_m;

    // identity 2: pointwise p-th-root form
    let mut power_sum = SimpleFunction::zero();
    for (k, f) in fs.iter().enumerate() {
        let k1 = (k + 1) as f64;
        power_sum = power_sum.add(&f.map_values(|v| (v.abs() / k1).powf(p)));
    }
    let proot = power_sum.map_values(|v| v.powf(1.0 / p));
    let proot_identity_dev = proot.zip_with(&g_m, |a, b| (a - b).abs()).max_abs_value();

    let lhs = g_m.sub(&g_n).luxemburg_norm(phi, 1e-12)?;
    let mut sup_norm = 0.0f64;
    for f in &fs {
        sup_norm = sup_norm.max(f.luxemburg_norm(phi, 1e-12)?);
    }
    let tail: f64 = neumaier_sum(((n + 1)..=m).map(|k| (k as f64).powf(-p)));
    let rhs = tail.powf(1.0 / p) * sup_norm;

    Ok(PConvexReport {
        n,
        m,
        p,
        lhs,
        rhs,
        slack: rhs - lhs,
        holds: lhs <= rhs + tol,
        sup_identity_exact,
        proot_identity_dev,
    })
}

// ---------------------------------------------------------------------------
// running-supremum inequality and its modular consequence
// ---------------------------------------------------------------------------

/// Prefix averages of the index class `≡ ℓ (mod N)` inside `{1..K}`, averaged
/// by class cardinality, and their running supremum of absolute values.
fn class_sup(fs: &[SimpleFunction], class: usize, modulus: usize) -> SimpleFunction {
    let mut sup = SimpleFunction::zero();
    let mut sum = SimpleFunction::zero();
    let mut count = 0usize;
    for (idx, f) in fs.iter().enumerate() {
        let i = idx + 1;
        if i % modulus == class % modulus {
            sum = sum.add(f);
            count += 1;
            sup = sup.sup(&sum.scale(1.0 / count as f64).abs());
        }
    }
    sup
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupCesReport {
    pub k_total: usize,
    pub window: usize,
    pub holds: bool,
    /// Max of `LHS − RHS` over the common refinement (negative when the
    /// inequality holds strictly).
    pub max_violation: f64,
    pub lhs_pieces: usize,
    pub rhs_pieces: usize,
}

/// Pointwise check of the running-supremum inequality
/// `(N/2)·∨_{n=N}^{K} |A_n| ≤ Σ_{ℓ=0}^{N−1} ∨ |class-ℓ prefix averages|`.
/// This is a theorem for every sequence; a reported violation beyond the
/// value tolerance indicates a bug, and tests treat it as fatal.
pub fn sup_ces_inequality_check(
    seq: &FunctionSequence,
    k_total: usize,
    window: usize,
    value_tol: f64,
) -> Result<SupCesReport> {
    if !(window >= 1 && k_total >= window) {
        return Err(Error::Input("requires K >= N >= 1".into()));
    }
    let fs = seq.prefix(k_total)?;

    let mut sum = SimpleFunction::zero();
    let mut lhs_sup = SimpleFunction::zero();
    for (idx, f) in fs.iter().enumerate() {
        let n = idx + 1;
        sum = sum.add(f);
        if n >= window {
            lhs_sup = lhs_sup.sup(&sum.scale(1.0 / n as f64).abs());
        }
    }
    let lhs = lhs_sup.scale(window as f64 / 2.0);

    let mut rhs = SimpleFunction::zero();
    for class in 0..window {
        rhs = rhs.add(&class_sup(&fs, class, window));
    }

    let diff = lhs.zip_with(&rhs, |a, b| a - b);
    let max_violation = diff
        .pieces()
        .iter()
        .map(|p| p.value)
        .fold(f64::NEG_INFINITY, f64::max);

    Ok(SupCesReport {
        k_total,
        window,
        holds: max_violation <= value_tol,
        max_violation,
        lhs_pieces: lhs.pieces().len(),
        rhs_pieces: rhs.pieces().len(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClosedCesaroReport {
    pub k_total: usize,
    pub window: usize,
    /// Per-class modulars `∫φ(∨ class prefix averages)`; the premise is that
    /// each is ≤ 1.
    pub class_modulars: Vec<f64>,
    pub premise_met: bool,
    /// `∫φ((N/2)·∨_{n=N}^{K} |A_n|)`, asserted ≤ N when the premise holds.
    pub conclusion_value: Option<f64>,
    pub bound: f64,
    pub holds: Option<bool>,
    /// |∫φ(Σ_ℓ h_ℓ) − Σ_ℓ ∫φ(h_ℓ)| for the disjoint class sups.
    pub additivity_dev: Option<f64>,
}

/// Modular consequence of the running-supremum inequality for disjoint
/// sequences: when every congruence class satisfies
/// `∫φ(∨ class prefix averages) ≤ 1`, then
/// `∫φ((N/2)·∨_{n=N}^{K}|A_n|) ≤ N`. The premise is checked, not assumed;
/// when it fails the conclusion is not asserted.
pub fn closed_cesaro_modular_check(
    phi: &OrliczFunction,
    seq: &FunctionSequence,
    k_total: usize,
    window: usize,
    tol: f64,
) -> Result<ClosedCesaroReport> {
    if !(window >= 1 && k_total >= window) {
        return Err(Error::Input("requires K >= N >= 1".into()));
    }
    if !seq.declared_disjoint() {
        return Err(Error::Input("sequence is not declared disjoint".into()));
    }
    seq.verify_disjoint_prefix(k_total)?;
    let fs = seq.prefix(k_total)?;

    let class_sups: Vec<SimpleFunction> = (0..window)
        .map(|class| class_sup(&fs, class, window))
        .collect();
    let class_modulars: Vec<f64> = class_sups.iter().map(|h| h.modular(phi)).collect();
    let premise_met = class_modulars.iter().all(|&m| m <= 1.0 + 1e-12);

    if !premise_met {
        return Ok(ClosedCesaroReport {
            k_total,
            window,
            class_modulars,
            premise_met: false,
            conclusion_value: None,
            bound: window as f64,
            holds: None,
            additivity_dev: None,
        });
    }

    let mut sum = SimpleFunction::zero();
    let mut lhs_sup = SimpleFunction::zero();
    for (idx, f) in fs.iter().enumerate() {
        let n = idx + 1;
        sum = sum.add(f);
        if n >= window {
            lhs_sup = lhs_sup.sup(&sum.scale(1.0 / n as f64).abs());
        }
    }
    let conclusion = lhs_sup.scale(window as f64 / 2.0).modular(phi);

    // disjoint additivity of the modular over the class sups
    let mut total = SimpleFunction::zero();
    for h in &class_sups {
        total = total.add(h);
    }
    let additivity_dev = (total.modular(phi) - neumaier_sum(class_modulars.iter().copied())).abs();

    Ok(ClosedCesaroReport {
        k_total,
        window,
        class_modulars,
        premise_met: true,
        conclusion_value: Some(conclusion),
        bound: window as f64,
        holds: Some(conclusion <= window as f64 + tol),
        additivity_dev: Some(additivity_dev),
    })
}
