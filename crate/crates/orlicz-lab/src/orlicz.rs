//! Orlicz functions: parametric families, validation probes, Legendre-Fenchel
//! conjugation, and Δ2 growth diagnostics.
//!
//! An Orlicz function is convex, increasing, non-constant on `[0, ∞)` with
//! `φ(0) = 0`. The builtin families cover the standard behaviors: power growth,
//! power-times-log, exponential, linear, and piecewise-linear data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::geometric_grid;

/// Probe point for the asymptotic-slope estimate used by [`conjugate`].
/// A power of two so that linear growth yields the slope exactly.
const SLOPE_PROBE_T: f64 = 1.0995116277760e12; // 2^40
/// Relative margin above the estimated asymptotic slope before the conjugate
/// is declared infinite.
const SLOPE_MARGIN: f64 = 1e-6;
/// Hard ceiling for bracket expansion when maximizing `s·t − φ(t)`.
const BRACKET_CAP: f64 = 1e300;
/// Default ratio of the geometric probe grids.
pub const DEFAULT_GRID_RATIO: f64 = 1.05;

/// A validated Orlicz function given by a named parametric family or by
/// piecewise-linear knot data.
#[derive(Clone, Debug, PartialEq)]
pub enum OrliczFunction {
    /// `t ↦ t^p`, `p ≥ 1`.
    Power { p: f64 },
    /// `t ↦ t^p · log(1 + t)`, `p ≥ 1`.
    PowerLog { p: f64 },
    /// `t ↦ e^t − t − 1`.
    ExpMinusLinear,
    /// `t ↦ t`.
    Linear,
    /// Piecewise-linear interpolation through `knots`, extended linearly
    /// beyond the last knot. First knot must be `(0, 0)`.
    PiecewiseLinear { knots: Vec<(f64, f64)> },
}

impl OrliczFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::Input(format!(
                "power family requires p >= 1, got {p}"
            )));
        }
        Ok(OrliczFunction::Power { p })
    }

    pub fn power_log(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::Input(format!(
                "power-log family requires p >= 1, got {p}"
            )));
        }
        Ok(OrliczFunction::PowerLog { p })
    }

    pub fn exp_minus_linear() -> Self {
        OrliczFunction::ExpMinusLinear
    }

    pub fn linear() -> Self {
        OrliczFunction::Linear
    }

    /// Piecewise-linear data. Requires at least two knots, strictly increasing
    /// abscissae starting at 0, value 0 at 0 and finite nonnegative values.
    /// Monotonicity and convexity are checked by [`validate`], not here:
    /// a malformed slope sequence is reportable data, not a constructor panic.
    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Input(
                "piecewise-linear needs at least 2 knots".into(),
            ));
        }
        if knots[0] != (0.0, 0.0) {
            return Err(Error::Input("first knot must be (0, 0)".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0.is_finite() && w[1].0 > w[0].0) {
                return Err(Error::Input(
                    "knot abscissae must be strictly increasing".into(),
                ));
            }
        }
        if knots.iter().any(|&(_, v)| !v.is_finite() || v < 0.0) {
            return Err(Error::Input(
                "knot values must be finite and nonnegative".into(),
            ));
        }
        Ok(OrliczFunction::PiecewiseLinear { knots })
    }

    /// Short family name for reports.
    pub fn family_name(&self) -> &'static str {
        match self {
            OrliczFunction::Power { .. } => "power",
            OrliczFunction::PowerLog { .. } => "power-log",
            OrliczFunction::ExpMinusLinear => "exp-minus-linear",
            OrliczFunction::Linear => "linear",
            OrliczFunction::PiecewiseLinear { .. } => "piecewise-linear",
        }
    }

    /// Evaluate at `t ≥ 0`. Negative or non-finite arguments are a domain error.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::Domain(format!(
                "Orlicz functions are defined on [0, ∞); got t = {t}"
            )));
        }
        Ok(self.eval_raw(t))
    }

    /// Evaluation without the domain check; callers guarantee `t ≥ 0`.
    /// `t = +∞` propagates to `+∞`, which keeps modular comparisons total.
    pub(crate) fn eval_raw(&self, t: f64) -> f64 {
        match self {
            OrliczFunction::Power { p } => t.powf(*p),
            OrliczFunction::PowerLog { p } => t.powf(*p) * t.ln_1p(),
            OrliczFunction::ExpMinusLinear => t.exp_m1() - t,
            OrliczFunction::Linear => t,
            OrliczFunction::PiecewiseLinear { knots } => {
                if t == 0.0 {
                    return 0.0;
                }
                let last = knots.len() - 1;
                if t >= knots[last].0 {
                    let (x0, y0) = knots[last - 1];
                    let (x1, y1) = knots[last];
                    return y1 + (t - x1) * (y1 - y0) / (x1 - x0);
                }
                // partition point: first knot with abscissa > t
                let hi = knots.partition_point(|&(x, _)| x <= t);
                let (x0, y0) = knots[hi - 1];
                let (x1, y1) = knots[hi];
                y0 + (t - x0) * (y1 - y0) / (x1 - x0)
            }
        }
    }

    /// Estimated slope of `φ` at infinity (finite difference at a large probe).
    pub fn asymptotic_slope_estimate(&self) -> f64 {
        let t = SLOPE_PROBE_T;
        (self.eval_raw(2.0 * t) - self.eval_raw(t)) / t
    }
}

/// Serializable description of an Orlicz function:
/// `{family, params, knots?}`. This is the schema consumed by the CLI and
/// embedded in certificates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knots: Option<Vec<[f64; 2]>>,
}

impl PhiSpec {
    pub fn build(&self) -> Result<OrliczFunction> {
        let want = |n: usize| -> Result<()> {
            if self.params.len() != n {
                Err(Error::Input(format!(
                    "family '{}' takes {} parameter(s), got {}",
                    self.family,
                    n,
                    self.params.len()
                )))
            } else {
                Ok(())
            }
        };
        match self.family.as_str() {
            "power" => {
                want(1)?;
                OrliczFunction::power(self.params[0])
            }
            "power-log" => {
                want(1)?;
                OrliczFunction::power_log(self.params[0])
            }
            "exp-minus-linear" => {
                want(0)?;
                Ok(OrliczFunction::exp_minus_linear())
            }
            "linear" => {
                want(0)?;
                Ok(OrliczFunction::linear())
            }
            "piecewise-linear" => {
                want(0)?;
                let knots = self
                    .knots
                    .as_ref()
                    .ok_or_else(|| Error::Input("piecewise-linear requires knots".into()))?;
                OrliczFunction::piecewise_linear(knots.iter().map(|k| (k[0], k[1])).collect())
            }
            other => Err(Error::Input(format!("unknown family '{other}'"))),
        }
    }

    pub fn of(phi: &OrliczFunction) -> PhiSpec {
        match phi {
            OrliczFunction::Power { p } => PhiSpec {
                family: "power".into(),
                params: vec![*p],
                knots: None,
            },
            OrliczFunction::PowerLog { p } => PhiSpec {
                family: "power-log".into(),
                params: vec![*p],
                knots: None,
            },
            OrliczFunction::ExpMinusLinear => PhiSpec {
                family: "exp-minus-linear".into(),
                params: vec![],
                knots: None,
            },
            OrliczFunction::Linear => PhiSpec {
                family: "linear".into(),
                params: vec![],
                knots: None,
            },
            OrliczFunction::PiecewiseLinear { knots } => PhiSpec {
                family: "piecewise-linear".into(),
                params: vec![],
                knots: Some(knots.iter().map(|&(x, y)| [x, y]).collect()),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

/// First violation found by [`validate`], if any.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    NonzeroAtZero {
        value: f64,
    },
    SlopeDecrease {
        knot: usize,
        left_slope: f64,
        right_slope: f64,
    },
    NotMonotone {
        t1: f64,
        t2: f64,
        v1: f64,
        v2: f64,
    },
    NotMidpointConvex {
        t1: f64,
        t2: f64,
        midpoint_value: f64,
        average: f64,
    },
    Constant,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub pass: bool,
    pub violation: Option<Violation>,
    pub grid_size: usize,
    pub t_max: f64,
}

/// Check the Orlicz-function invariants on a geometric grid over `(0, t_max]`:
/// `φ(0) = 0`, monotone, midpoint-convex, non-constant. Piecewise-linear data
/// additionally gets an exact knot-slope check. Violations are report content,
/// not errors; the first one found is returned.
pub fn validate(phi: &OrliczFunction, grid_size: usize, t_max: f64) -> Result<ValidationReport> {
    if grid_size < 3 {
        return Err(Error::Input("validate requires grid_size >= 3".into()));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::Input("validate requires t_max > 0".into()));
    }
    let report = |violation: Option<Violation>| ValidationReport {
        pass: violation.is_none(),
        violation,
        grid_size,
        t_max,
    };

    let at_zero = phi.eval_raw(0.0);
    if at_zero != 0.0 {
        return Ok(report(Some(Violation::NonzeroAtZero { value: at_zero })));
    }

    if let OrliczFunction::PiecewiseLinear { knots } = phi {
        let slopes: Vec<f64> = knots
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect();
        for (i, w) in slopes.windows(2).enumerate() {
            if w[1] < w[0] {
                return Ok(report(Some(Violation::SlopeDecrease {
                    knot: i + 1,
                    left_slope: w[0],
                    right_slope: w[1],
                })));
            }
        }
    }

    let lo = t_max * 1e-9;
    let grid = geometric_grid(lo, t_max, grid_size);
    let values: Vec<f64> = grid.iter().map(|&t| phi.eval_raw(t)).collect();

    let rel = 1e-12;
    for i in 1..grid.len() {
        if values[i] < values[i - 1] * (1.0 - rel) - rel {
            return Ok(report(Some(Violation::NotMonotone {
                t1: grid[i - 1],
                t2: grid[i],
                v1: values[i - 1],
                v2: values[i],
            })));
        }
    }

    for i in 0..grid.len() {
        for j in (i + 1)..grid.len() {
            let avg = 0.5 * (values[i] + values[j]);
            let mid = phi.eval_raw(0.5 * (grid[i] + grid[j]));
            if mid > avg + 1e-9 + rel * avg.abs() {
                return Ok(report(Some(Violation::NotMidpointConvex {
                    t1: grid[i],
                    t2: grid[j],
                    midpoint_value: mid,
                    average: avg,
                })));
            }
        }
    }

    if values.iter().all(|&v| v <= 0.0) {
        return Ok(report(Some(Violation::Constant)));
    }

    Ok(report(None))
}

// ---------------------------------------------------------------------------
// conjugation
// ---------------------------------------------------------------------------

/// Value of the conjugate `φ*(s) = sup { s·t − φ(t) : t ≥ 0 }`; the supremum
/// may be infinite, which is an in-band flag rather than an error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Conjugate {
    Finite(f64),
    Infinite,
}

impl Conjugate {
    pub fn finite(self) -> Option<f64> {
        match self {
            Conjugate::Finite(v) => Some(v),
            Conjugate::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Conjugate::Infinite)
    }
}

/// Legendre-Fenchel conjugate at `s ≥ 0`.
///
/// The asymptotic slope of `φ` is estimated by a finite difference at a large
/// probe point; `+∞` is declared only when `s` exceeds that estimate by a
/// relative margin (or when bracket expansion exhausts the f64 range). In the
/// finite regime the concave map `t ↦ s·t − φ(t)` is maximized by bracket
/// expansion followed by ternary search; the result is always `≥ 0` because
/// `t = 0` contributes 0.
pub fn conjugate(phi: &OrliczFunction, s: f64, tol: f64) -> Result<Conjugate> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::Domain(format!("conjugate requires s >= 0, got {s}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Input("conjugate requires tol > 0".into()));
    }
    let slope = phi.asymptotic_slope_estimate();
    if slope.is_finite() && s > slope * (1.0 + SLOPE_MARGIN) {
        return Ok(Conjugate::Infinite);
    }

    let g = |t: f64| s * t - phi.eval_raw(t);

    // bracket the maximum: expand until g stops improving under doubling
    let mut hi = 1.0;
    while hi < BRACKET_CAP && g(2.0 * hi) > g(hi) {
        hi *= 2.0;
    }
    if hi >= BRACKET_CAP {
        return Ok(Conjugate::Infinite);
    }
    let mut lo = 0.0;
    let mut hi = 2.0 * hi;

    let width_tol = (tol * 1e-3).min(1e-12) * (1.0 + hi.abs());
    for _ in 0..600 {
        if hi - lo <= width_tol {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) <= g(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let mid = 0.5 * (lo + hi);
    let best = [0.0, lo, mid, hi]
        .iter()
        .map(|&t| g(t))
        .fold(0.0f64, f64::max);
    Ok(Conjugate::Finite(best))
}

// ---------------------------------------------------------------------------
// Δ2 diagnostics
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Delta2Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// Finite-truncation Δ2 probe result: the condition quantifies over all large
/// `t`, so a grid can refute it (a ratio blowing past the threshold) or
/// heuristically support it (a flat or shrinking ratio trend), never prove it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Delta2Report {
    pub verdict: Delta2Verdict,
    /// Max of `φ(2t)/φ(t)` over the probed grid (restricted to `φ(t) > 0`).
    pub c_est: f64,
    pub t_range: (f64, f64),
    pub max_ratio: f64,
    pub witness_t: Option<f64>,
    pub samples: usize,
    pub note: String,
}

/// Probe the Δ2-condition `φ(2t) ≤ C·φ(t)` on a geometric grid in `(t0, t_max]`.
pub fn delta2_check(
    phi: &OrliczFunction,
    t0: f64,
    t_max: f64,
    grid_size: usize,
    fail_threshold: f64,
) -> Result<Delta2Report> {
    if !(t0 >= 0.0 && t0 < t_max && t_max.is_finite()) {
        return Err(Error::Input(format!(
            "delta2_check requires 0 <= t0 < t_max, got t0 = {t0}, t_max = {t_max}"
        )));
    }
    if grid_size < 2 {
        return Err(Error::Input("delta2_check requires grid_size >= 2".into()));
    }
    if !(fail_threshold > 1.0) {
        return Err(Error::Input(
            "delta2_check requires fail_threshold > 1".into(),
        ));
    }

    let lo = if t0 > 0.0 { t0 } else { t_max * 1e-12 };
    let grid = geometric_grid(lo, t_max, grid_size);

    let mut ratios: Vec<(f64, f64)> = Vec::new();
    let mut max_ratio = 0.0f64;
    let mut witness: Option<f64> = None;
    for &t in &grid {
        let v = phi.eval_raw(t);
        if !(v > 0.0) || !v.is_finite() {
            continue;
        }
        let ratio = phi.eval_raw(2.0 * t) / v;
        max_ratio = max_ratio.max(ratio);
        if witness.is_none() && ratio > fail_threshold {
            witness = Some(t);
        }
        ratios.push((t, ratio));
    }
    if ratios.is_empty() {
        return Err(Error::Degenerate(
            "phi vanishes on the entire probe grid".into(),
        ));
    }

    let note = "finite-truncation heuristic: a grid can refute the Δ2-condition or \
                support it on the probed range, never prove it"
        .to_string();

    if let Some(w) = witness {
        return Ok(Delta2Report {
            verdict: Delta2Verdict::Fails,
            c_est: max_ratio,
            t_range: (t0, t_max),
            max_ratio,
            witness_t: Some(w),
            samples: ratios.len(),
            note,
        });
    }

    // trend over the top decade
    let top: Vec<f64> = ratios
        .iter()
        .filter(|(t, _)| *t > t_max / 10.0)
        .map(|(_, r)| *r)
        .collect();
    let verdict = if top.len() < 2 {
        Delta2Verdict::Inconclusive
    } else {
        let non_increasing = top.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));
        let top_max = top.iter().cloned().fold(f64::MIN, f64::max);
        let top_min = top.iter().cloned().fold(f64::MAX, f64::min);
        let bounded = top_max <= top_min * 1.05;
        if non_increasing || bounded {
            Delta2Verdict::Holds
        } else {
            Delta2Verdict::Inconclusive
        }
    };

    Ok(Delta2Report {
        verdict,
        c_est: max_ratio,
        t_range: (t0, t_max),
        max_ratio,
        witness_t: None,
        samples: ratios.len(),
        note,
    })
}

/// Outcome of the dual-Δ2 probe: the Krasnosel'skii-Rutickii criterion says
/// `φ*` fails Δ2 iff for every `L > 1` and floor there is `t` past the floor
/// with `φ(t) > φ(Lt)/(2L)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KrProbeOutcome {
    /// First grid point satisfying the strict inequality, if any.
    pub witness: Option<f64>,
    /// Grid points where the two sides were exactly equal. Boundary ties are
    /// reported rather than counted as witnesses.
    pub ties: Vec<f64>,
    pub grid_points: usize,
    pub inconclusive_note: Option<String>,
}

/// Search `(t_floor, t_cap]` geometrically for a witness of
/// `φ(t) > φ(Lt)/(2L)`. A miss at one cap is inconclusive and labeled so;
/// repeated witnesses across escalating `(L, t_floor)` pairs are evidence that
/// the conjugate fails Δ2.
pub fn kr_dual_delta2_probe(
    phi: &OrliczFunction,
    l: f64,
    t_floor: f64,
    t_cap: f64,
) -> Result<KrProbeOutcome> {
    if !(l > 1.0) {
        return Err(Error::Input(format!("kr probe requires L > 1, got {l}")));
    }
    if !(t_floor >= 0.0 && t_floor < t_cap && t_cap.is_finite()) {
        return Err(Error::Input(format!(
            "kr probe requires 0 <= t_floor < t_cap, got [{t_floor}, {t_cap}]"
        )));
    }
    let lo = if t_floor > 0.0 {
        t_floor
    } else {
        t_cap * 1e-12
    };
    let steps = ((t_cap / lo).ln() / DEFAULT_GRID_RATIO.ln())
        .ceil()
        .max(2.0) as usize;
    let grid = geometric_grid(lo, t_cap, steps);

    let mut ties = Vec::new();
    for &t in &grid {
        let lhs = phi.eval_raw(t);
        let rhs = phi.eval_raw(l * t) / (2.0 * l);
        if lhs > rhs {
            return Ok(KrProbeOutcome {
                witness: Some(t),
                ties,
                grid_points: grid.len(),
                inconclusive_note: None,
            });
        }
        if lhs == rhs && ties.len() < 16 {
            ties.push(t);
        }
    }
    Ok(KrProbeOutcome {
        witness: None,
        ties,
        grid_points: grid.len(),
        inconclusive_note: Some(format!(
            "no witness up to t_cap = {t_cap}; absence at one cap is inconclusive"
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin_families() -> Vec<OrliczFunction> {
        vec![
            OrliczFunction::power(1.5).unwrap(),
            OrliczFunction::power(2.0).unwrap(),
            OrliczFunction::power(3.0).unwrap(),
            OrliczFunction::power_log(1.0).unwrap(),
            OrliczFunction::exp_minus_linear(),
            OrliczFunction::linear(),
        ]
    }

    #[test]
    fn evaluate_examples() {
        let p2 = OrliczFunction::power(2.0).unwrap();
        assert_eq!(p2.evaluate(0.0).unwrap(), 0.0);
        let lin = OrliczFunction::linear();
        assert_eq!(lin.evaluate(7.5).unwrap(), 7.5);
        let pl = OrliczFunction::power_log(1.0).unwrap();
        let v = pl.evaluate(1.0).unwrap();
        assert!((v - 2.0f64.ln()).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn evaluate_rejects_bad_arguments() {
        let p2 = OrliczFunction::power(2.0).unwrap();
        assert!(matches!(p2.evaluate(-1.0), Err(Error::Domain(_))));
        assert!(matches!(p2.evaluate(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(p2.evaluate(f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!(conjugate(&p2, -0.5, 1e-9), Err(Error::Domain(_))));
        assert!(matches!(conjugate(&p2, 1.0, 0.0), Err(Error::Input(_))));
    }

    #[test]
    fn piecewise_interpolates_and_extrapolates() {
        let pl =
            OrliczFunction::piecewise_linear(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)]).unwrap();
        assert_eq!(pl.evaluate(0.5).unwrap(), 0.5);
        assert_eq!(pl.evaluate(1.5).unwrap(), 2.0);
        // linear extension past the last knot with slope 2
        assert_eq!(pl.evaluate(4.0).unwrap(), 7.0);
    }

    #[test]
    fn validate_examples() {
        let p2 = OrliczFunction::power(2.0).unwrap();
        assert!(validate(&p2, 100, 10.0).unwrap().pass);

        let bad =
            OrliczFunction::piecewise_linear(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 3.0)]).unwrap();
        let rep = validate(&bad, 50, 3.0).unwrap();
        assert!(!rep.pass);
        assert!(matches!(
            rep.violation,
            Some(Violation::SlopeDecrease { knot: 1, .. })
        ));

        let good =
            OrliczFunction::piecewise_linear(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)]).unwrap();
        assert!(validate(&good, 50, 3.0).unwrap().pass);
    }

    #[test]
    fn validate_flags_constant_zero() {
        let flat = OrliczFunction::piecewise_linear(vec![(0.0, 0.0), (1.0, 0.0)]).unwrap();
        let rep = validate(&flat, 10, 5.0).unwrap();
        assert_eq!(rep.violation, Some(Violation::Constant));
    }

    #[test]
    fn conjugate_examples() {
        let p2 = OrliczFunction::power(2.0).unwrap();
        let v = conjugate(&p2, 2.0, 1e-9).unwrap().finite().unwrap();
        assert!((v - 1.0).abs() < 1e-9, "sup(2t - t^2) should be 1, got {v}");

        let lin = OrliczFunction::linear();
        assert_eq!(conjugate(&lin, 0.5, 1e-9).unwrap(), Conjugate::Finite(0.0));
        assert!(conjugate(&lin, 2.0, 1e-9).unwrap().is_infinite());
        // boundary slope: still finite (sup is 0 at every t)
        assert_eq!(conjugate(&lin, 1.0, 1e-9).unwrap(), Conjugate::Finite(0.0));

        let exp = OrliczFunction::exp_minus_linear();
        let v = conjugate(&exp, 1.0, 1e-9).unwrap().finite().unwrap();
        let expected = 2.0 * 2.0f64.ln() - 1.0;
        assert!((v - expected).abs() < 1e-9, "got {v}, want {expected}");
    }

    #[test]
    fn conjugate_matches_brute_force() {
        // independent oracle: dense grid maximization of s·t − φ(t)
        let brute = |phi: &OrliczFunction, s: f64, t_hi: f64| -> f64 {
            let mut best = 0.0f64;
            let n = 400_000;
            for k in 0..=n {
                let t = t_hi * k as f64 / n as f64;
                best = best.max(s * t - phi.eval_raw(t));
            }
            best
        };
        let p2 = OrliczFunction::power(2.0).unwrap();
        for s in [0.0, 0.7, 2.0, 5.0] {
            let got = conjugate(&p2, s, 1e-9).unwrap().finite().unwrap();
            let want = brute(&p2, s, 6.0);
            assert!((got - want).abs() < 1e-6, "s = {s}: got {got}, want {want}");
        }
        let exp = OrliczFunction::exp_minus_linear();
        let got = conjugate(&exp, 1.0, 1e-9).unwrap().finite().unwrap();
        let want = brute(&exp, 1.0, 3.0);
        assert!((got - want).abs() < 1e-6);
    }

    #[test]
    fn conjugate_monotone_in_s() {
        for phi in builtin_families() {
            let slope = phi.asymptotic_slope_estimate();
            let mut prev = -1.0f64;
            for k in 0..30 {
                let s = 0.2 * k as f64;
                if s > slope {
                    break;
                }
                match conjugate(&phi, s, 1e-9).unwrap() {
                    Conjugate::Finite(v) => {
                        assert!(
                            v >= prev - 1e-9,
                            "{}: conjugate not monotone at s = {s}",
                            phi.family_name()
                        );
                        prev = v;
                    }
                    Conjugate::Infinite => break,
                }
            }
        }
    }

    #[test]
    fn delta2_examples() {
        let p3 = OrliczFunction::power(3.0).unwrap();
        let rep = delta2_check(&p3, 1.0, 1e6, 200, 1e6).unwrap();
        assert_eq!(rep.verdict, Delta2Verdict::Holds);
        assert!((rep.c_est - 8.0).abs() < 1e-9, "c_est = {}", rep.c_est);

        let exp = OrliczFunction::exp_minus_linear();
        let rep = delta2_check(&exp, 1.0, 100.0, 200, 1e6).unwrap();
        assert_eq!(rep.verdict, Delta2Verdict::Fails);
        assert!(rep.witness_t.is_some());

        let pl = OrliczFunction::power_log(1.0).unwrap();
        let rep = delta2_check(&pl, 1.0, 1e6, 200, 1e6).unwrap();
        assert_eq!(rep.verdict, Delta2Verdict::Holds);
        assert!(rep.c_est <= 4.0, "c_est = {}", rep.c_est);
    }

    #[test]
    fn delta2_degenerate_input() {
        let flat = OrliczFunction::piecewise_linear(vec![(0.0, 0.0), (1e9, 0.0)]).unwrap();
        assert!(matches!(
            delta2_check(&flat, 1.0, 100.0, 50, 10.0),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn kr_probe_examples() {
        let lin = OrliczFunction::linear();
        let out = kr_dual_delta2_probe(&lin, 3.0, 1.0, 1e4).unwrap();
        // linear φ gives φ(Lt)/(2L) = t/2, so the first grid point qualifies
        assert!(out.witness.is_some());

        let p2 = OrliczFunction::power(2.0).unwrap();
        let out = kr_dual_delta2_probe(&p2, 3.0, 0.0, 1e6).unwrap();
        assert!(out.witness.is_none());
        assert!(out.inconclusive_note.is_some());

        let pl = OrliczFunction::power_log(1.0).unwrap();
        let out = kr_dual_delta2_probe(&pl, 4.0, 10.0, 1e6).unwrap();
        let w = out.witness.expect("witness exists for t > 2");
        assert!(w > 10.0 && w < 12.0);
    }

    #[test]
    fn kr_probe_power_family_characterization() {
        // for φ = t^p a witness exists iff L^(p−1) < 2, independent of t
        for &(p, l) in &[(2.0, 3.0), (2.0, 2.0), (3.0, 2.0), (1.5, 4.0)] {
            let phi = OrliczFunction::power(p).unwrap();
            let out = kr_dual_delta2_probe(&phi, l, 0.0, 1e6).unwrap();
            let witness_expected = l.powf(p - 1.0) < 2.0;
            assert_eq!(out.witness.is_some(), witness_expected, "p = {p}, L = {l}");
        }
        // near p = 1 the single-L probe does find witnesses
        let phi = OrliczFunction::power(1.1).unwrap();
        let out = kr_dual_delta2_probe(&phi, 2.0, 0.0, 1e6).unwrap();
        assert!(out.witness.is_some());
    }

    #[test]
    fn youngs_inequality_on_probe_grid() {
        for phi in builtin_families() {
            let slope = phi.asymptotic_slope_estimate();
            for i in 0..12 {
                let s = 0.4 * i as f64;
                if s > slope {
                    continue;
                }
                let conj = match conjugate(&phi, s, 1e-9).unwrap() {
                    Conjugate::Finite(v) => v,
                    Conjugate::Infinite => continue,
                };
                for j in 0..12 {
                    let t = 0.9 * j as f64;
                    let lhs = s * t;
                    let rhs = phi.eval_raw(t) + conj;
                    assert!(
                        lhs <= rhs + 1e-9,
                        "{}: Young violated at s={s}, t={t}: {lhs} > {rhs}",
                        phi.family_name()
                    );
                }
            }
        }
    }

    #[test]
    fn double_conjugate_recovers_phi() {
        // outer conjugate by brute force over samples of the inner one
        for phi in [
            OrliczFunction::power(2.0).unwrap(),
            OrliczFunction::exp_minus_linear(),
            OrliczFunction::linear(),
        ] {
            let slope = phi.asymptotic_slope_estimate();
            let s_hi = if slope.is_finite() {
                slope.min(200.0)
            } else {
                200.0
            };
            let n = 8000;
            let samples: Vec<(f64, f64)> = (0..=n)
                .filter_map(|k| {
                    let s = s_hi * k as f64 / n as f64;
                    conjugate(&phi, s, 1e-9).ok()?.finite().map(|v| (s, v))
                })
                .collect();
            for j in 0..=10 {
                let t = 0.5 * j as f64;
                let f_tt = samples
                    .iter()
                    .map(|&(s, v)| s * t - v)
                    .fold(0.0f64, f64::max);
                let f_t = phi.eval_raw(t);
                let tol = 1e-2 * (1.0 + f_t);
                assert!(
                    (f_tt - f_t).abs() <= tol,
                    "{}: φ**({t}) = {f_tt}, φ({t}) = {f_t}",
                    phi.family_name()
                );
            }
        }
    }

    #[test]
    fn power_family_b_ratio_homogeneity() {
        for &p in &[1.5, 2.0, 3.0] {
            let phi = OrliczFunction::power(p).unwrap();
            for &t in &[0.3, 1.0, 7.0, 512.0] {
                for m in 1..=20u32 {
                    let m = m as f64;
                    let ratio = m * phi.eval_raw(t / m) / phi.eval_raw(t);
                    let want = m.powf(1.0 - p);
                    assert!(
                        (ratio - want).abs() <= 1e-12,
                        "p={p}, t={t}, m={m}: {ratio} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn phi_spec_round_trip() {
        for phi in builtin_families() {
            let spec = PhiSpec::of(&phi);
            let back = spec.build().unwrap();
            assert_eq!(phi, back);
        }
        let spec: PhiSpec = serde_json::from_str(r#"{"family":"power","params":[2.0]}"#).unwrap();
        assert_eq!(spec.build().unwrap(), OrliczFunction::Power { p: 2.0 });
        assert!(serde_json::from_str::<PhiSpec>(r#"{"family":"power","p":2}"#).is_err());
    }
}
