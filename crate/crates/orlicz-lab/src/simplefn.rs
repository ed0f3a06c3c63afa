//! Exact step functions on `[0,1]`: lattice operations on the common
//! refinement, decreasing rearrangement, distribution profiles, modulars and
//! the Luxemburg norm.
//!
//! Breakpoints and measures are exact rationals so that equimeasurability and
//! capacity checks hold with zero tolerance; values are `f64`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{neumaier_sum, Rational};
use crate::orlicz::OrliczFunction;

/// Hard cap for Luxemburg bracket expansion.
const NORM_BRACKET_CAP: f64 = 1e300;

/// One constant piece: the function equals `value` on `[previous end, end)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub end: Rational,
    pub value: f64,
}

/// A measurable step function on `[0,1]` in canonical form: breakpoints are
/// strictly increasing exact rationals ending at 1, and no two adjacent
/// pieces share a value. The zero function is a single piece of value 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleFunction {
    pieces: Vec<Piece>,
}

impl SimpleFunction {
    /// Build from `(breakpoint_end, value)` pairs. Ends must be strictly
    /// increasing rationals in `(0, 1]` with the final one exactly 1; values
    /// must be finite. Adjacent equal values are merged.
    pub fn new(pieces: Vec<(Rational, f64)>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Input(
                "a step function needs at least one piece".into(),
            ));
        }
        let one = Rational::one();
        let mut prev = Rational::zero();
        for (end, value) in &pieces {
            if *end <= prev {
                return Err(Error::Input(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
            if *end > one {
                return Err(Error::Input("breakpoints must lie in (0, 1]".into()));
            }
            if !value.is_finite() {
                return Err(Error::Input("piece values must be finite".into()));
            }
            prev = end.clone();
        }
        if prev != one {
            return Err(Error::Input("final breakpoint must be exactly 1".into()));
        }
        let mut f = SimpleFunction {
            pieces: pieces
                .into_iter()
                .map(|(end, value)| Piece { end, value })
                .collect(),
        };
        f.canonicalize();
        Ok(f)
    }

    /// The zero function.
    pub fn zero() -> Self {
        SimpleFunction {
            pieces: vec![Piece {
                end: Rational::one(),
                value: 0.0,
            }],
        }
    }

    /// Constant function `c` on `[0,1]`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![(Rational::one(), c)])
    }

    /// Indicator of `[a, b)` with `0 <= a < b <= 1`.
    pub fn indicator(a: Rational, b: Rational) -> Result<Self> {
        if a < Rational::zero() || b <= a || b > Rational::one() {
            return Err(Error::Input("indicator requires 0 <= a < b <= 1".into()));
        }
        let mut pieces = Vec::new();
        if a > Rational::zero() {
            pieces.push((a, 0.0));
        }
        pieces.push((b.clone(), 1.0));
        if b < Rational::one() {
            pieces.push((Rational::one(), 0.0));
        }
        Self::new(pieces)
    }

    /// Build from disjoint `(start, end, value)` spans sorted by start;
    /// everything not covered is 0.
    pub fn from_spans(spans: &[(Rational, Rational, f64)]) -> Result<Self> {
        let mut pieces: Vec<(Rational, f64)> = Vec::new();
        let mut cursor = Rational::zero();
        for (start, end, value) in spans {
            if *start < cursor {
                return Err(Error::Input("spans must be sorted and disjoint".into()));
            }
            if *end <= *start || *end > Rational::one() {
                return Err(Error::Input(
                    "span endpoints must satisfy start < end <= 1".into(),
                ));
            }
            if *start > cursor {
                pieces.push((start.clone(), 0.0));
            }
            pieces.push((end.clone(), *value));
            cursor = end.clone();
        }
        if cursor < Rational::one() {
            pieces.push((Rational::one(), 0.0));
        }
        if pieces.is_empty() {
            return Ok(Self::zero());
        }
        Self::new(pieces)
    }

    fn canonicalize(&mut self) {
        let mut merged: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for piece in self.pieces.drain(..) {
            match merged.last_mut() {
                Some(last) if last.value == piece.value => last.end = piece.end,
                _ => merged.push(piece),
            }
        }
        self.pieces = merged;
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// `(measure, value)` of each piece, measures exact.
    pub fn piece_measures(&self) -> Vec<(Rational, f64)> {
        let mut out = Vec::with_capacity(self.pieces.len());
        let mut prev = Rational::zero();
        for p in &self.pieces {
            out.push((&p.end - &prev, p.value));
            prev = p.end.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|p| p.value == 0.0)
    }

    /// Exact measure of `{ |f| > 0 }`.
    pub fn support_measure(&self) -> Rational {
        self.piece_measures()
            .into_iter()
            .filter(|(_, v)| *v != 0.0)
            .fold(Rational::zero(), |acc, (m, _)| acc + m)
    }

    pub fn max_abs_value(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.value.abs())
            .fold(0.0, f64::max)
    }

    /// Value at a point (pieces are right-open).
    pub fn eval_at(&self, x: &Rational) -> f64 {
        for p in &self.pieces {
            if *x < p.end {
                return p.value;
            }
        }
        self.pieces.last().map(|p| p.value).unwrap_or(0.0)
    }

    /// Pointwise combination of two functions on their common refinement.
    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &Self, op: F) -> Self {
        let mut pieces: Vec<Piece> = Vec::with_capacity(self.pieces.len() + other.pieces.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.pieces.len() && j < other.pieces.len() {
            let a = &self.pieces[i];
            let b = &other.pieces[j];
            let (end, advance_i, advance_j) = match a.end.cmp(&b.end) {
                std::cmp::Ordering::Less => (a.end.clone(), true, false),
                std::cmp::Ordering::Greater => (b.end.clone(), false, true),
                std::cmp::Ordering::Equal => (a.end.clone(), true, true),
            };
            pieces.push(Piece {
                end,
                value: op(a.value, b.value),
            });
            if advance_i {
                i += 1;
            }
            if advance_j {
                j += 1;
            }
        }
        let mut f = SimpleFunction { pieces };
        f.canonicalize();
        f
    }

    pub fn map_values<F: Fn(f64) -> f64>(&self, op: F) -> Self {
        let mut f = SimpleFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    end: p.end.clone(),
                    value: op(p.value),
                })
                .collect(),
        };
        f.canonicalize();
        f
    }

    pub fn abs(&self) -> Self {
        self.map_values(f64::abs)
    }

    /// Pointwise scaling; `c` must be finite.
    pub fn scale(&self, c: f64) -> Self {
        assert!(c.is_finite(), "scale factor must be finite");
        self.map_values(|v| c * v)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn sup(&self, other: &Self) -> Self {
        self.zip_with(other, f64::max)
    }

    pub fn inf(&self, other: &Self) -> Self {
        self.zip_with(other, f64::min)
    }

    /// Exact disjointness of supports.
    pub fn supports_disjoint(&self, other: &Self) -> bool {
        let overlap = self.zip_with(other, |a, b| if a != 0.0 && b != 0.0 { 1.0 } else { 0.0 });
        overlap.is_zero()
    }

    /// Squeeze `[0,1]` affinely onto `[start, start + len)` and pad with zeros.
    pub fn affine_embed(&self, start: &Rational, len: &Rational) -> Result<Self> {
        if *start < Rational::zero() || len <= &Rational::zero() || start + len > Rational::one() {
            return Err(Error::Input(
                "affine_embed target must lie inside [0,1]".into(),
            ));
        }
        let mut pieces: Vec<(Rational, f64)> = Vec::new();
        if *start > Rational::zero() {
            pieces.push((start.clone(), 0.0));
        }
        for p in &self.pieces {
            pieces.push((start + &p.end * len, p.value));
        }
        let covered = start + len;
        if covered < Rational::one() {
            pieces.push((Rational::one(), 0.0));
        }
        Self::new(pieces)
    }

    // -----------------------------------------------------------------------
    // rearrangement and distribution
    // -----------------------------------------------------------------------

    /// Decreasing rearrangement: `|values|` sorted nonincreasing with their
    /// exact measures accumulated from 0. Equimeasurable with `|f|`.
    pub fn rearrange(&self) -> Self {
        let mut entries = self.piece_measures();
        for e in &mut entries {
            e.1 = e.1.abs();
        }
        entries.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("values are finite"));
        let mut pieces: Vec<Piece> = Vec::with_capacity(entries.len());
        let mut acc = Rational::zero();
        for (measure, value) in entries {
            acc += &measure;
            match pieces.last_mut() {
                Some(last) if last.value == value => last.end = acc.clone(),
                _ => pieces.push(Piece {
                    end: acc.clone(),
                    value,
                }),
            }
        }
        SimpleFunction { pieces }
    }

    /// Exact distribution profile of `|f|`: measures of `{ |f| > λ }` at
    /// `λ = 0` and at every distinct nonzero `|value|`.
    pub fn distribution(&self) -> DistributionProfile {
        let entries = self.piece_measures();
        let mut thresholds: Vec<f64> = entries.iter().map(|(_, v)| v.abs()).collect();
        thresholds.push(0.0);
        thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
        thresholds.dedup();
        let measures = thresholds
            .iter()
            .map(|&lambda| {
                entries
                    .iter()
                    .filter(|(_, v)| v.abs() > lambda)
                    .fold(Rational::zero(), |acc, (m, _)| acc + m)
            })
            .collect();
        DistributionProfile {
            thresholds,
            measures,
        }
    }

    // -----------------------------------------------------------------------
    // modular and norm
    // -----------------------------------------------------------------------

    /// The modular `∫₀¹ φ(|f|) = Σᵢ φ(|vᵢ|)·μᵢ`, exact in measure.
    pub fn modular(&self, phi: &OrliczFunction) -> f64 {
        neumaier_sum(self.piece_measures().into_iter().map(|(m, v)| {
            let mv = m.to_f64().unwrap_or(0.0);
            if mv == 0.0 {
                0.0
            } else {
                phi.eval_raw(v.abs()) * mv
            }
        }))
    }

    fn modular_scaled(&self, phi: &OrliczFunction, lambda: f64) -> f64 {
        neumaier_sum(self.piece_measures().into_iter().map(|(m, v)| {
            let mv = m.to_f64().unwrap_or(0.0);
            if mv == 0.0 || v == 0.0 {
                0.0
            } else {
                phi.eval_raw(v.abs() / lambda) * mv
            }
        }))
    }

    /// Luxemburg norm `inf { λ > 0 : ∫ φ(|f|/λ) ≤ 1 }`.
    ///
    /// For step functions and continuous `φ` the infimum sits where the
    /// modular equals 1; since `λ ↦ ∫φ(|f|/λ)` is nonincreasing we bracket
    /// that level geometrically and bisect, returning the midpoint of the
    /// final bracket (within `tol` of the infimum).
    pub fn luxemburg_norm(&self, phi: &OrliczFunction, tol: f64) -> Result<f64> {
        if !(tol > 0.0) {
            return Err(Error::Input("luxemburg_norm requires tol > 0".into()));
        }
        if self.is_zero() {
            return Ok(0.0);
        }
        let m1 = self.modular_scaled(phi, 1.0);
        let (mut lo, mut hi);
        if m1 > 1.0 {
            // norm above 1: grow hi
            hi = 1.0;
            loop {
                hi *= 2.0;
                if hi > NORM_BRACKET_CAP {
                    return Err(Error::Overflow(
                        "Luxemburg bracket expansion exceeded 1e300".into(),
                    ));
                }
                if self.modular_scaled(phi, hi) <= 1.0 {
                    break;
                }
            }
            lo = hi / 2.0;
        } else if m1 < 1.0 {
            lo = 1.0;
            loop {
                lo /= 2.0;
                if lo < 1e-300 {
                    // φ too flat to push the modular up to 1: the infimum is 0
                    return Ok(0.0);
                }
                if self.modular_scaled(phi, lo) > 1.0 {
                    break;
                }
            }
            hi = lo * 2.0;
        } else {
            return Ok(1.0);
        }

        for _ in 0..4000 {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let m = self.modular_scaled(phi, mid);
            if m > 1.0 {
                lo = mid;
            } else if m < 1.0 {
                hi = mid;
            } else {
                return Ok(mid);
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Exact distribution data of `|f|`: `measures[i] = |{ |f| > thresholds[i] }|`.
/// `thresholds[0]` is always 0, so the first measure is the support measure.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionProfile {
    pub thresholds: Vec<f64>,
    pub measures: Vec<Rational>,
}

// reports need the exact measures; emit them as "p/q" strings
impl Serialize for DistributionProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("DistributionProfile", 2)?;
        s.serialize_field("thresholds", &self.thresholds)?;
        let measures: Vec<String> = self.measures.iter().map(|m| m.to_string()).collect();
        s.serialize_field("measures", &measures)?;
        s.end()
    }
}

impl DistributionProfile {
    /// Exact measure of `{ |f| > λ }` for arbitrary `λ ≥ 0`.
    pub fn measure_above(&self, lambda: f64) -> Rational {
        // measures are taken at thresholds; between thresholds the profile is flat
        let idx = self.thresholds.partition_point(|&t| t <= lambda);
        if idx == 0 {
            // lambda below every threshold (only possible for negative lambda)
            return self
                .measures
                .first()
                .cloned()
                .unwrap_or_else(Rational::zero);
        }
        self.measures[idx - 1].clone()
    }
}

// ---------------------------------------------------------------------------
// serialization: list of [numerator, denominator, value] triples
// ---------------------------------------------------------------------------

// Numerator/denominator are decimal strings: exact dyadic breakpoints routinely
// exceed u64 and JSON numbers would silently lose precision.
impl Serialize for SimpleFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let triples: Vec<(String, String, f64)> = self
            .pieces
            .iter()
            .map(|p| {
                (
                    p.end.numer().to_string(),
                    p.end.denom().to_string(),
                    p.value,
                )
            })
            .collect();
        triples.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimpleFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let triples: Vec<(String, String, f64)> = Vec::deserialize(deserializer)?;
        let mut pieces = Vec::with_capacity(triples.len());
        for (num, den, value) in triples {
            let n = BigInt::from_str(&num).map_err(D::Error::custom)?;
            let d = BigInt::from_str(&den).map_err(D::Error::custom)?;
            if d.is_zero() {
                return Err(D::Error::custom("zero denominator in breakpoint"));
            }
            pieces.push((Rational::new(n, d), value));
        }
        SimpleFunction::new(pieces).map_err(D::Error::custom)
    }
}

/// Convenience: `k/d` as an exact rational.
pub fn frac(k: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(k), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_one;

    fn chi(a: Rational, b: Rational) -> SimpleFunction {
        SimpleFunction::indicator(a, b).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(SimpleFunction::new(vec![]).is_err());
        assert!(SimpleFunction::new(vec![(frac(1, 2), 1.0)]).is_err()); // doesn't end at 1
        assert!(SimpleFunction::new(vec![(frac(1, 2), 1.0), (frac(1, 2), 2.0)]).is_err());
        assert!(SimpleFunction::new(vec![(rational_one(), f64::NAN)]).is_err());
        let f = SimpleFunction::new(vec![(frac(1, 2), 1.0), (rational_one(), 1.0)]).unwrap();
        assert_eq!(f.pieces().len(), 1, "adjacent equal values merge");
    }

    #[test]
    fn rearrange_examples() {
        // already nonnegative nonincreasing: fixed point
        let f = SimpleFunction::new(vec![(frac(1, 3), 3.0), (rational_one(), 1.0)]).unwrap();
        assert_eq!(f.rearrange(), f);

        let f = SimpleFunction::new(vec![(frac(1, 2), 1.0), (rational_one(), 3.0)]).unwrap();
        let want = SimpleFunction::new(vec![(frac(1, 2), 3.0), (rational_one(), 1.0)]).unwrap();
        assert_eq!(f.rearrange(), want);

        let f = SimpleFunction::new(vec![(frac(1, 4), -2.0), (rational_one(), 1.0)]).unwrap();
        let want = SimpleFunction::new(vec![(frac(1, 4), 2.0), (rational_one(), 1.0)]).unwrap();
        assert_eq!(f.rearrange(), want);
    }

    #[test]
    fn lattice_examples() {
        let f = SimpleFunction::new(vec![(frac(1, 2), 1.0), (rational_one(), 0.0)]).unwrap();
        assert_eq!(f.sup(&f), f, "idempotence");
        assert!(f.add(&f.scale(-1.0)).is_zero(), "additive inverse");

        let g = SimpleFunction::new(vec![(frac(1, 4), 0.0), (rational_one(), 2.0)]).unwrap();
        let want = SimpleFunction::new(vec![(frac(1, 4), 1.0), (rational_one(), 2.0)]).unwrap();
        assert_eq!(f.sup(&g), want);
    }

    #[test]
    fn modular_examples() {
        let p2 = OrliczFunction::power(2.0).unwrap();
        let one = chi(frac(0, 1), rational_one());
        assert_eq!(one.modular(&p2), 1.0);

        let f = chi(frac(0, 1), frac(1, 2)).scale(2.0);
        assert_eq!(f.modular(&p2), 2.0);

        assert_eq!(SimpleFunction::zero().modular(&p2), 0.0);
    }

    #[test]
    fn luxemburg_examples() {
        let p2 = OrliczFunction::power(2.0).unwrap();
        let f = chi(frac(0, 1), frac(1, 4));
        let norm = f.luxemburg_norm(&p2, 1e-9).unwrap();
        assert!(
            (norm - 0.5).abs() < 1e-8,
            "norm of χ over 1/4 is 1/2, got {norm}"
        );

        assert_eq!(
            SimpleFunction::zero().luxemburg_norm(&p2, 1e-9).unwrap(),
            0.0
        );

        let g = chi(frac(0, 1), frac(1, 2));
        let n1 = g.luxemburg_norm(&p2, 1e-9).unwrap();
        let n2 = g.scale(2.0).luxemburg_norm(&p2, 1e-9).unwrap();
        assert!((n1 - 0.5f64.sqrt()).abs() < 1e-8);
        assert!((n2 - 2.0 * n1).abs() < 2e-9, "homogeneity witness");
    }

    #[test]
    fn luxemburg_overflow_is_reported() {
        // linear φ with an astronomically large value needs λ ≈ 1e308, past
        // the bracket cap
        let lin = OrliczFunction::linear();
        let f = SimpleFunction::constant(1e308).unwrap();
        assert!(matches!(
            f.luxemburg_norm(&lin, 1e-9),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn luxemburg_closed_form_cross_check() {
        // oracle: ‖χ_A‖ = |A|^(1/p) solves |A|·(1/λ)^p = 1
        for &p in &[1.5, 2.0, 3.0] {
            let phi = OrliczFunction::power(p).unwrap();
            for &(num, den) in &[(1i64, 4i64), (3, 7), (9, 10), (1, 97)] {
                let a = frac(num, den);
                let f = chi(frac(0, 1), a.clone());
                let norm = f.luxemburg_norm(&phi, 1e-9).unwrap();
                let want = (num as f64 / den as f64).powf(1.0 / p);
                assert!((norm - want).abs() < 1e-8, "p={p}, |A|={num}/{den}");
            }
        }
    }

    #[test]
    fn distribution_examples() {
        let one = chi(frac(0, 1), rational_one());
        let d = one.distribution();
        assert_eq!(d.thresholds, vec![0.0, 1.0]);
        assert_eq!(d.measures, vec![rational_one(), Rational::zero()]);
        assert_eq!(d.measure_above(0.5), rational_one());
        assert_eq!(d.measure_above(1.0), Rational::zero());

        let f = SimpleFunction::new(vec![
            (frac(1, 5), 3.0),
            (frac(1, 2), 0.0),
            (rational_one(), 1.0),
        ])
        .unwrap();
        assert_eq!(f.distribution().measure_above(2.0), frac(1, 5));

        let z = SimpleFunction::zero().distribution();
        assert!(z.measures.iter().all(|m| m.is_zero()));
    }

    #[test]
    fn equimeasurability_is_exact() {
        let f = SimpleFunction::new(vec![
            (frac(1, 7), -2.5),
            (frac(2, 7), 1.0),
            (frac(5, 7), -2.5),
            (rational_one(), 0.5),
        ])
        .unwrap();
        assert_eq!(f.distribution(), f.rearrange().distribution());
    }

    #[test]
    fn affine_embed_preserves_shape() {
        let f = chi(frac(0, 1), frac(1, 2));
        let g = f.affine_embed(&frac(1, 2), &frac(1, 4)).unwrap();
        // support should be [1/2, 5/8)
        assert_eq!(g.support_measure(), frac(1, 8));
        assert_eq!(g.eval_at(&frac(9, 16)), 1.0);
        assert_eq!(g.eval_at(&frac(3, 4)), 0.0);
    }

    #[test]
    fn serde_round_trip() {
        let f = SimpleFunction::new(vec![(frac(1, 3), -1.5), (rational_one(), 2.0)]).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: SimpleFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
    }
}
