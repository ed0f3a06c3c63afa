//! Property suites for the cross-module invariants: norm axioms,
//! rearrangement invariance, Young's inequality, averaging linearity, and the
//! running-supremum inequality on arbitrary random sequences.

mod common;

use common::{builtin_families, frac, random_function};
use proptest::prelude::*;

use orlicz_lab::cesaro::{self, FunctionSequence};
use orlicz_lab::orlicz::{self, Conjugate};
use orlicz_lab::{OrliczFunction, SimpleFunction};

const TOL: f64 = 1e-9;

fn simple_function_strategy(
    max_pieces: usize,
    scale: f64,
) -> impl Strategy<Value = SimpleFunction> {
    (any::<u64>(), 1..=max_pieces).prop_map(move |(seed, pieces)| {
        let mut rng = common::seeded_rng(seed);
        random_function(&mut rng, pieces, scale)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_homogeneity(f in simple_function_strategy(6, 3.0), c in -4.0f64..4.0) {
        for phi in builtin_families() {
            let n1 = f.luxemburg_norm(&phi, TOL).unwrap();
            let n2 = f.scale(c).luxemburg_norm(&phi, TOL).unwrap();
            prop_assert!((n2 - c.abs() * n1).abs() <= 2.0 * TOL * (1.0 + c.abs()),
                "{}: |{} - |{}|*{}| too large", phi.family_name(), n2, c, n1);
        }
    }

    #[test]
    fn norm_triangle_inequality(
        f in simple_function_strategy(5, 2.0),
        g in simple_function_strategy(5, 2.0),
    ) {
        for phi in builtin_families() {
            let nf = f.luxemburg_norm(&phi, TOL).unwrap();
            let ng = g.luxemburg_norm(&phi, TOL).unwrap();
            let nfg = f.add(&g).luxemburg_norm(&phi, TOL).unwrap();
            prop_assert!(nfg <= nf + ng + 3.0 * TOL);
        }
    }

    #[test]
    fn norm_monotone_in_domination(f in simple_function_strategy(5, 2.0)) {
        // |f| <= |g| pointwise with g = |f| + |f| / 2
        let g = f.abs().scale(1.5);
        for phi in builtin_families() {
            let nf = f.luxemburg_norm(&phi, TOL).unwrap();
            let ng = g.luxemburg_norm(&phi, TOL).unwrap();
            prop_assert!(nf <= ng + 2.0 * TOL);
        }
    }

    #[test]
    fn rearrangement_preserves_distribution_and_norm(f in simple_function_strategy(6, 3.0)) {
        let r = f.rearrange();
        prop_assert_eq!(f.distribution(), r.distribution());
        for phi in builtin_families() {
            let nf = f.luxemburg_norm(&phi, TOL).unwrap();
            let nr = r.luxemburg_norm(&phi, TOL).unwrap();
            prop_assert!((nf - nr).abs() <= 2.0 * TOL);
        }
    }

    #[test]
    fn modular_norm_link(f in simple_function_strategy(5, 3.0)) {
        for phi in builtin_families() {
            let norm = f.luxemburg_norm(&phi, 1e-12).unwrap();
            if norm < 1e-3 {
                continue;
            }
            let at_norm = f.scale(1.0 / norm).modular(&phi);
            prop_assert!(at_norm <= 1.0 + 1e-6, "{}: modular at norm = {}", phi.family_name(), at_norm);
            let inside = f.scale(1.0 / (norm * (1.0 - 1e-5))).modular(&phi);
            prop_assert!(inside >= 1.0 - 1e-6);
        }
    }

    #[test]
    fn heart_membership_every_scale(f in simple_function_strategy(5, 2.0)) {
        // step functions have finite modular at every scale
        for phi in builtin_families() {
            for k in [1.0, 10.0, 100.0] {
                prop_assert!(f.scale(k).modular(&phi).is_finite());
            }
        }
    }

    #[test]
    fn youngs_inequality_random_pairs(s in 0.0f64..6.0, t in 0.0f64..12.0) {
        for phi in builtin_families() {
            if s > phi.asymptotic_slope_estimate() {
                continue;
            }
            match orlicz::conjugate(&phi, s, TOL).unwrap() {
                Conjugate::Finite(conj) => {
                    prop_assert!(s * t <= phi.evaluate(t).unwrap() + conj + TOL);
                }
                Conjugate::Infinite => {}
            }
        }
    }

    #[test]
    fn cesaro_average_is_linear(seed in any::<u64>(), c in -3.0f64..3.0, n in 1usize..8) {
        let mut rng = common::seeded_rng(seed);
        let fs: Vec<SimpleFunction> = (0..n).map(|_| random_function(&mut rng, 4, 2.0)).collect();
        let scaled: Vec<SimpleFunction> = fs.iter().map(|f| f.scale(c)).collect();
        let a = cesaro::cesaro_average(&FunctionSequence::explicit(fs, false), n).unwrap();
        let b = cesaro::cesaro_average(&FunctionSequence::explicit(scaled, false), n).unwrap();
        let dev = a.scale(c).zip_with(&b, |x, y| (x - y).abs()).max_abs_value();
        prop_assert!(dev <= 1e-12 * (1.0 + c.abs()));
    }

    #[test]
    fn sup_ces_inequality_never_violated(seed in any::<u64>(), window in 1usize..6, blocks in 1usize..5) {
        let seq = FunctionSequence::seeded_random(seed, 4, 2.0);
        let k_total = window * blocks + window;
        let report = cesaro::sup_ces_inequality_check(&seq, k_total, window, 1e-12).unwrap();
        prop_assert!(report.holds, "violation {:.3e} at seed {}", report.max_violation, seed);
    }

    #[test]
    fn disjoint_running_sup_identity(seed in any::<u64>(), n in 2usize..8) {
        let seq = FunctionSequence::seeded_disjoint_blocks(seed, 4, 2.0);
        let fs: Vec<SimpleFunction> = (1..=n).map(|k| seq.generate(k).unwrap()).collect();
        let mut weighted = SimpleFunction::zero();
        let mut sum = SimpleFunction::zero();
        let mut sup = SimpleFunction::zero();
        for (k, f) in fs.iter().enumerate() {
            weighted = weighted.add(&f.abs().scale(1.0 / (k + 1) as f64));
            sum = sum.add(f);
            sup = sup.sup(&sum.scale(1.0 / (k + 1) as f64).abs());
        }
        prop_assert_eq!(sup, weighted);
    }
}

#[test]
fn conjugate_infinite_absorbs_monotonicity() {
    // once infinite, larger s stays infinite
    let lin = OrliczFunction::linear();
    let mut seen_infinite = false;
    for k in 0..40 {
        let s = 0.1 * k as f64;
        match orlicz::conjugate(&lin, s, TOL).unwrap() {
            Conjugate::Finite(_) => assert!(!seen_infinite, "finite after infinite at s = {s}"),
            Conjugate::Infinite => seen_infinite = true,
        }
    }
    assert!(seen_infinite);
}

#[test]
fn zero_function_short_circuits() {
    let z = SimpleFunction::zero();
    for phi in builtin_families() {
        assert_eq!(z.luxemburg_norm(&phi, TOL).unwrap(), 0.0);
        assert_eq!(z.modular(&phi), 0.0);
    }
    assert!(z.rearrange().is_zero());
}

#[test]
fn certificate_dilates_diagnose_unbounded() {
    // disjoint unit-norm dilates of a divergence certificate's step function:
    // running-sup norms are harmonic sums, so the trend verdict is unbounded
    use orlicz_lab::cesaro::{diagnose_order_boundedness, DiagnosticsConfig, TrendVerdict};
    use orlicz_lab::counterexample::{build_certificate, SearchConfig};
    let lin = OrliczFunction::linear();
    let cert = build_certificate(&lin, 40, &SearchConfig::default()).unwrap();
    let seq = FunctionSequence::disjoint_dilates(cert.f.clone(), lin.clone());
    let report = diagnose_order_boundedness(&lin, &seq, 20, &DiagnosticsConfig::default()).unwrap();
    assert_eq!(report.verdict, TrendVerdict::UnboundedTrend);
    let h20: f64 = (1..=20).map(|k| 1.0 / k as f64).sum();
    assert!((report.sup_norms[19] - h20).abs() < 1e-6);
}

#[test]
fn indicator_norm_matches_closed_form_across_p() {
    for &p in &[1.5, 2.0, 3.0] {
        let phi = OrliczFunction::power(p).unwrap();
        let f = SimpleFunction::indicator(frac(0, 1), frac(3, 8)).unwrap();
        let norm = f.luxemburg_norm(&phi, TOL).unwrap();
        assert!((norm - 0.375f64.powf(1.0 / p)).abs() < 1e-8);
    }
}
