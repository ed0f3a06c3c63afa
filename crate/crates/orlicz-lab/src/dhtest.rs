//! Eligible block sequences and the averaging diagnostics built on them:
//! the weighted convexity-ratio table `b_{n,m} = Σ_t w_t·m·φ(t/m)/φ(t)`, the
//! weak-null criterion (`b_{n,m} → 0` jointly), the series test
//! `Σ_m b_m/m < ∞`, and realization as disjoint unit-norm step functions.

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{approx_with_denominator_cap, neumaier_sum, rational_from_f64, Rational};
use crate::orlicz::OrliczFunction;
use crate::simplefn::SimpleFunction;

/// One block: a finite set of positive values with positive weights summing
/// to exactly 1.
#[derive(Clone, Debug)]
pub struct Block {
    pub values: Vec<f64>,
    pub weights: Vec<Rational>,
}

/// Blocks with strictly separated value ranges: `max F_n < min F_{n+1}`.
/// Divergence of the block minima is a limit property; finite data only
/// witnesses strict increase, which is all this type claims.
#[derive(Clone, Debug)]
pub struct EligibleSequence {
    blocks: Vec<Block>,
}

impl EligibleSequence {
    pub fn new(blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Input(
                "an eligible sequence needs at least one block".into(),
            ));
        }
        let mut prev_max: Option<f64> = None;
        for (i, block) in blocks.iter().enumerate() {
            if block.values.is_empty() || block.values.len() != block.weights.len() {
                return Err(Error::Input(format!(
                    "block {} must pair each value with a weight",
                    i + 1
                )));
            }
            if block.values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                return Err(Error::Input(format!(
                    "block {} has a nonpositive value",
                    i + 1
                )));
            }
            if block.values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Input(format!(
                    "block {} values must be strictly increasing",
                    i + 1
                )));
            }
            if block.weights.iter().any(|w| *w <= Rational::zero()) {
                return Err(Error::Input(format!(
                    "block {} has a nonpositive weight",
                    i + 1
                )));
            }
            let total: Rational = block.weights.iter().cloned().sum();
            if total != Rational::one() {
                return Err(Error::Input(format!(
                    "block {} weights must sum to exactly 1, got {}",
                    i + 1,
                    total
                )));
            }
            let min = block.values[0];
            if let Some(pm) = prev_max {
                if min <= pm {
                    return Err(Error::Input(format!(
                        "blocks must be separated: max of block {} is {} but min of block {} is {}",
                        i,
                        pm,
                        i + 1,
                        min
                    )));
                }
            }
            prev_max = Some(*block.values.last().unwrap());
        }
        Ok(EligibleSequence { blocks })
    }

    /// Singleton blocks `F_n = {base^n}` with unit weight.
    pub fn singleton_powers(base: f64, count: usize) -> Result<Self> {
        if !(base > 1.0) || count == 0 {
            return Err(Error::Input(
                "singleton_powers requires base > 1, count >= 1".into(),
            ));
        }
        let blocks = (1..=count)
            .map(|n| Block {
                values: vec![base.powi(n as i32)],
                weights: vec![Rational::one()],
            })
            .collect();
        Self::new(blocks)
    }

    /// Blocks of `size` equally weighted values in `[base^n, 1.5·base^n)`.
    pub fn geometric_blocks(base: f64, size: usize, count: usize) -> Result<Self> {
        if !(base >= 2.0) || size == 0 || count == 0 {
            return Err(Error::Input(
                "geometric_blocks requires base >= 2, size >= 1, count >= 1".into(),
            ));
        }
        let weight = Rational::new(1.into(), (size as i64).into());
        let blocks = (1..=count)
            .map(|n| {
                let lead = base.powi(n as i32);
                Block {
                    values: (0..size)
                        .map(|j| lead * (1.0 + j as f64 / (2.0 * size as f64)))
                        .collect(),
                    weights: vec![weight.clone(); size],
                }
            })
            .collect();
        Self::new(blocks)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// External input format: weights as exact `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSpec {
    pub values: Vec<f64>,
    pub weights: Vec<String>,
}

impl BlockSpec {
    pub fn build(&self) -> Result<Block> {
        let weights = self
            .weights
            .iter()
            .map(|s| {
                s.parse::<Rational>()
                    .map_err(|e| Error::Input(format!("bad weight '{s}': {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Block {
            values: self.values.clone(),
            weights,
        })
    }
}

pub fn sequence_from_specs(specs: &[BlockSpec]) -> Result<EligibleSequence> {
    EligibleSequence::new(
        specs
            .iter()
            .map(|s| s.build())
            .collect::<Result<Vec<_>>>()?,
    )
}

// ---------------------------------------------------------------------------
// the convexity-ratio table
// ---------------------------------------------------------------------------

/// Table of `b_{n,m}` for `n ≤ rows`, `m ≤ cols`, with per-column limit
/// estimates `b_m = b_{rows,m}` and stabilization flags
/// `|b_{rows,m} − b_{rows/2,m}| < stab_tol`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BnmTable {
    pub rows: usize,
    pub cols: usize,
    /// `entries[n−1][m−1] = b_{n,m}`.
    pub entries: Vec<Vec<f64>>,
    pub b_m: Vec<f64>,
    pub stabilized: Vec<bool>,
    pub stab_tol: f64,
}

/// Build the full table. Each entry is accumulated as an exact rational
/// combination of the floating-point per-value ratios, so `b_{n,1} = Σ w_t`
/// comes out exactly 1 and row monotonicity is preserved whenever the
/// per-value ratios are monotone.
pub fn b_table(
    phi: &OrliczFunction,
    seq: &EligibleSequence,
    rows: usize,
    cols: usize,
    stab_tol: f64,
) -> Result<BnmTable> {
    if rows == 0 || cols == 0 {
        return Err(Error::Input(
            "b_table requires rows >= 1 and cols >= 1".into(),
        ));
    }
    if rows > seq.len() {
        return Err(Error::Input(format!(
            "b_table requires rows <= number of blocks ({})",
            seq.len()
        )));
    }
    let mut entries = Vec::with_capacity(rows);
    for n in 1..=rows {
        let block = &seq.blocks()[n - 1];
        let denominators: Vec<f64> = block.values.iter().map(|&t| phi.eval_raw(t)).collect();
        if denominators.iter().any(|&d| !(d > 0.0) || !d.is_finite()) {
            return Err(Error::Degenerate(format!(
                "phi must be positive and finite on every block value (block {n})"
            )));
        }
        let mut row = Vec::with_capacity(cols);
        for m in 1..=cols {
            let mut acc = Rational::zero();
            for ((&t, w), &d) in block.values.iter().zip(&block.weights).zip(&denominators) {
                let ratio = m as f64 * phi.eval_raw(t / m as f64) / d;
                acc += w * rational_from_f64(ratio)?;
            }
            row.push(acc.to_f64().unwrap_or(f64::NAN));
        }
        entries.push(row);
    }

    // m ↦ b_{n,m} is nonincreasing by convexity; allow a few ulps of slack
    // because families with a zero gap (linear: b ≡ 1) wiggle at f64 rounding
    for (n, row) in entries.iter().enumerate() {
        for m in 1..row.len() {
            if row[m] > row[m - 1] * (1.0 + 1e-14) {
                return Err(Error::CheckFailed(format!(
                    "row monotonicity b_{{n,m}} >= b_{{n,m+1}} violated at n = {}, m = {}",
                    n + 1,
                    m
                )));
            }
        }
    }

    let half = (rows / 2).max(1);
    let b_m: Vec<f64> = (0..cols).map(|m| entries[rows - 1][m]).collect();
    let stabilized: Vec<bool> = (0..cols)
        .map(|m| rows >= 2 && (entries[rows - 1][m] - entries[half - 1][m]).abs() < stab_tol)
        .collect();

    Ok(BnmTable {
        rows,
        cols,
        entries,
        b_m,
        stabilized,
        stab_tol,
    })
}

// ---------------------------------------------------------------------------
// weak-null criterion
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeakNullVerdict {
    ConsistentWithWeaklyNull,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeakNullReport {
    pub verdict: WeakNullVerdict,
    pub epsilon: f64,
    pub quadrant_max: Option<f64>,
    pub quadrant_min: Option<f64>,
    pub note: String,
}

/// Judge `b_{n,m} → 0` (jointly) from the top-right quadrant of the table
/// (`n > rows/2`, `m > cols/2`). Finite truncation semantics: entries below
/// `epsilon` are consistent with the joint limit being 0; entries stuck above
/// `epsilon` with a flat column trend refute it at this depth; anything else
/// is inconclusive.
pub fn weak_null_criterion(table: &BnmTable, epsilon: f64) -> Result<WeakNullReport> {
    if !(epsilon > 0.0) {
        return Err(Error::Input(
            "weak_null_criterion requires epsilon > 0".into(),
        ));
    }
    let note = "finite-truncation verdict on the stored table; weak nullity itself is \
                not finitely checkable"
        .to_string();
    if table.rows < 2 || table.cols < 2 {
        return Ok(WeakNullReport {
            verdict: WeakNullVerdict::Inconclusive,
            epsilon,
            quadrant_max: None,
            quadrant_min: None,
            note,
        });
    }
    let mut q_max = f64::NEG_INFINITY;
    let mut q_min = f64::INFINITY;
    for n in (table.rows / 2)..table.rows {
        for m in (table.cols / 2)..table.cols {
            let v = table.entries[n][m];
            q_max = q_max.max(v);
            q_min = q_min.min(v);
        }
    }
    let flat = table.entries[table.rows - 1][table.cols - 1]
        >= 0.9 * table.entries[table.rows - 1][table.cols / 2];
    let verdict = if q_max < epsilon {
        WeakNullVerdict::ConsistentWithWeaklyNull
    } else if q_min >= epsilon && flat {
        WeakNullVerdict::Refuted
    } else {
        WeakNullVerdict::Inconclusive
    };
    Ok(WeakNullReport {
        verdict,
        epsilon,
        quadrant_max: Some(q_max),
        quadrant_min: Some(q_min),
        note,
    })
}

// ---------------------------------------------------------------------------
// series test
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesVerdict {
    ConvergentTrend,
    DivergentTrend,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesReport {
    pub verdict: SeriesVerdict,
    /// Partial sums of `Σ_{m≤M} b_m/m`.
    pub partial_sums: Vec<f64>,
    /// Ratio of the last two dyadic block sums; harmonic-like tails give ≈ 1,
    /// geometric decay gives a ratio bounded away from 1.
    pub dyadic_block_ratio: Option<f64>,
    /// Max relative deviation of `b_m` from `b_M` over the top half: small
    /// means the increments track `c/m`.
    pub flatness_dev: Option<f64>,
}

/// Partial sums of `Σ b_m/m` with a trend verdict: convergent when dyadic
/// block sums decay geometrically, divergent when increments track `c/m`
/// (compared against harmonic behavior). Requires the per-column limit
/// estimates to be stabilized.
pub fn dh_series_test(
    phi: &OrliczFunction,
    seq: &EligibleSequence,
    rows: usize,
    cols: usize,
    stab_tol: f64,
) -> Result<SeriesReport> {
    let table = b_table(phi, seq, rows, cols, stab_tol)?;
    if let Some(m) = table.stabilized.iter().position(|s| !s) {
        return Err(Error::Unstabilized(format!(
            "b_{} estimate has not stabilized at {} rows; increase the block count",
            m + 1,
            rows
        )));
    }
    let increments: Vec<f64> = table
        .b_m
        .iter()
        .enumerate()
        .map(|(m, b)| b / (m + 1) as f64)
        .collect();
    let mut partial_sums = Vec::with_capacity(cols);
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for &inc in &increments {
        let t = acc + inc;
        if acc.abs() >= inc.abs() {
            comp += (acc - t) + inc;
        } else {
            comp += (inc - t) + acc;
        }
        acc = t;
        partial_sums.push(acc + comp);
    }

    if cols < 8 {
        return Ok(SeriesReport {
            verdict: SeriesVerdict::Inconclusive,
            partial_sums,
            dyadic_block_ratio: None,
            flatness_dev: None,
        });
    }
    let s = |m: usize| partial_sums[m - 1];
    let upper = s(cols) - s(cols / 2);
    let lower = s(cols / 2) - s(cols / 4);
    let ratio = if lower > 0.0 { upper / lower } else { 0.0 };

    let b_last = table.b_m[cols - 1];
    let flatness = table.b_m[cols / 2..]
        .iter()
        .map(|&b| {
            if b_last != 0.0 {
                (b - b_last).abs() / b_last.abs()
            } else {
                0.0
            }
        })
        .fold(0.0f64, f64::max);

    let verdict = if lower <= 0.0 || ratio <= 0.9 {
        SeriesVerdict::ConvergentTrend
    } else if ratio >= 0.97 && flatness <= 0.1 {
        SeriesVerdict::DivergentTrend
    } else {
        SeriesVerdict::Inconclusive
    };
    Ok(SeriesReport {
        verdict,
        partial_sums,
        dyadic_block_ratio: Some(ratio),
        flatness_dev: Some(flatness),
    })
}

// ---------------------------------------------------------------------------
// realization
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Realization {
    pub functions: Vec<SimpleFunction>,
    /// Rounded exact measures `|A_t| ≈ w_t/φ(t)` per block.
    #[serde(skip)]
    pub measures: Vec<Vec<Rational>>,
    /// Per-block bound on the modular distortion `Σ_t φ(t)·|rounding_t|`.
    pub modular_rounding: Vec<f64>,
    pub capacity_used: f64,
}

/// Realize the first `K` blocks as disjoint step functions
/// `f_n = Σ_{t∈F_n} t·χ_{A_t}` with `|A_t| = w_t/φ(t)`, packed left to right.
/// Measures are rounded to rationals with denominator at most `denom_cap`
/// (default 10^9) and the induced modular distortion is logged, so the unit
/// Luxemburg norm of each `f_n` holds up to that logged tolerance.
pub fn realize(
    phi: &OrliczFunction,
    seq: &EligibleSequence,
    k: usize,
    denom_cap: u64,
) -> Result<Realization> {
    if k > seq.len() {
        return Err(Error::Input(format!(
            "realize requires K <= number of blocks ({})",
            seq.len()
        )));
    }
    if denom_cap == 0 {
        return Err(Error::Input("denominator cap must be positive".into()));
    }
    let mut functions = Vec::with_capacity(k);
    let mut measures = Vec::with_capacity(k);
    let mut roundings = Vec::with_capacity(k);
    let mut cursor = Rational::zero();
    for (n, block) in seq.blocks().iter().take(k).enumerate() {
        let mut spans = Vec::with_capacity(block.values.len());
        let mut block_measures = Vec::with_capacity(block.values.len());
        let mut rounding = 0.0f64;
        for (&t, w) in block.values.iter().zip(&block.weights) {
            let phi_t = phi.eval_raw(t);
            if !(phi_t > 0.0) || !phi_t.is_finite() {
                return Err(Error::Degenerate(format!(
                    "phi({t}) must be positive and finite to size the carrier set"
                )));
            }
            let exact = w / rational_from_f64(phi_t)?;
            let measure = approx_with_denominator_cap(&exact, denom_cap);
            if measure <= Rational::zero() {
                return Err(Error::Degenerate(format!(
                    "measure w/φ(t) at t = {t} rounds to zero at denominator cap {denom_cap}"
                )));
            }
            rounding += phi_t * (&measure - &exact).to_f64().unwrap_or(0.0).abs();
            let start = cursor.clone();
            cursor = &cursor + &measure;
            if cursor > Rational::one() {
                return Err(Error::CapacityExceeded {
                    block: n + 1,
                    detail: format!(
                        "packed measure reaches {} > 1 at value t = {t}",
                        cursor.to_f64().unwrap_or(f64::NAN)
                    ),
                });
            }
            spans.push((start, cursor.clone(), t));
            block_measures.push(measure);
        }
        functions.push(SimpleFunction::from_spans(&spans)?);
        measures.push(block_measures);
        roundings.push(rounding);
    }
    Ok(Realization {
        functions,
        measures,
        modular_rounding: roundings,
        capacity_used: cursor.to_f64().unwrap_or(f64::NAN),
    })
}

pub const DEFAULT_DENOM_CAP: u64 = 1_000_000_000;

// ---------------------------------------------------------------------------
// series identity cross-check
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub k: usize,
    /// `∫₀¹ φ(Σ_{n≤K} f_n/n)` over the realized disjoint pieces.
    pub lhs: f64,
    /// `Σ_{n≤K} b_{n,n}/n` from exact weights.
    pub rhs: f64,
    pub diff: f64,
    /// Tolerance actually allowed: 1e−9 plus the logged measure-rounding error.
    pub allowed: f64,
    pub within: bool,
}

/// Verify `∫φ(Σ_{n≤K} f_n/n) = Σ_{n≤K} b_{n,n}/n` on a realization, up to the
/// logged measure rounding.
pub fn cross_check_series_identity(
    phi: &OrliczFunction,
    seq: &EligibleSequence,
    k: usize,
) -> Result<CrossCheckReport> {
    if k == 0 {
        return Err(Error::Input("cross-check requires K >= 1".into()));
    }
    let real = realize(phi, seq, k, DEFAULT_DENOM_CAP)?;
    let mut g = SimpleFunction::zero();
    for (n, f) in real.functions.iter().enumerate() {
        g = g.add(&f.scale(1.0 / (n + 1) as f64));
    }
    let lhs = g.modular(phi);

    let mut rhs_terms = Vec::with_capacity(k);
    for (n, block) in seq.blocks().iter().take(k).enumerate() {
        let m = (n + 1) as f64;
        let mut acc = Rational::zero();
        for (&t, w) in block.values.iter().zip(&block.weights) {
            let ratio = phi.eval_raw(t / m) / phi.eval_raw(t);
            acc += w * rational_from_f64(ratio)?;
        }
        rhs_terms.push(acc.to_f64().unwrap_or(f64::NAN));
    }
    let rhs = neumaier_sum(rhs_terms);

    // rounding enters scaled by φ(t/n)/φ(t) ≤ 1, so the per-block logs bound it
    let rounding: f64 = real.modular_rounding.iter().sum();
    let allowed = 1e-9 + rounding;
    let diff = (lhs - rhs).abs();
    Ok(CrossCheckReport {
        k,
        lhs,
        rhs,
        diff,
        allowed,
        within: diff <= allowed,
    })
}
