//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured figures (run with `--nocapture` to see them). Tolerances and
//! runtime budgets are pinned in the assertions.

mod common;

use std::sync::OnceLock;
use std::time::Instant;

use common::{builtin_families, frac, random_function, seeded_rng};
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use orlicz_lab::cesaro::{self, FunctionSequence};
use orlicz_lab::cli::{self, OutputFormat, OutputSpec, RunConfig};
use orlicz_lab::counterexample::{self, CounterexampleCertificate, SearchConfig};
use orlicz_lab::dhtest::{self, Block, EligibleSequence};
use orlicz_lab::orlicz::{self, Conjugate};
use orlicz_lab::{Error, OrliczFunction, SimpleFunction};

fn pass(id: u32, name: &str, detail: String) {
    println!("ACCEPTANCE {id:02} ({name}): PASS — {detail}");
}

fn harmonic(n: usize) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

fn linear_cert_200() -> &'static CounterexampleCertificate {
    static CERT: OnceLock<CounterexampleCertificate> = OnceLock::new();
    CERT.get_or_init(|| {
        counterexample::build_certificate(&OrliczFunction::linear(), 200, &SearchConfig::default())
            .expect("linear construction succeeds")
    })
}

#[test]
fn criterion_01_conjugation_oracle() {
    let start = Instant::now();
    let p2 = OrliczFunction::power(2.0).unwrap();
    let mut worst = 0.0f64;
    let mut s = 0.0;
    while s <= 10.0 {
        let got = orlicz::conjugate(&p2, s, 1e-9).unwrap().finite().unwrap();
        worst = worst.max((got - s * s / 4.0).abs());
        s += 0.5;
    }
    assert!(worst <= 1e-6, "worst conjugate error {worst}");

    let exp = OrliczFunction::exp_minus_linear();
    let got = orlicz::conjugate(&exp, 1.0, 1e-9)
        .unwrap()
        .finite()
        .unwrap();
    let want = 2.0 * 2.0f64.ln() - 1.0;
    assert!((got - want).abs() <= 1e-6);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        1,
        "conjugation oracle",
        format!("worst |Δ| = {worst:.2e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_02_youngs_inequality() {
    let families = builtin_families();
    let per_family = 10_000usize.div_ceil(families.len());
    let mut rng = seeded_rng(0x0202);
    let mut checked = 0usize;
    for phi in &families {
        let slope = phi.asymptotic_slope_estimate();
        let s_hi = slope.min(6.0);
        let mut done = 0usize;
        while done < per_family {
            let s = rng.gen_range(0.0..s_hi);
            let t = rng.gen_range(0.0..12.0);
            let conj = match orlicz::conjugate(phi, s, 1e-9).unwrap() {
                Conjugate::Finite(v) => v,
                Conjugate::Infinite => continue,
            };
            assert!(
                s * t <= phi.evaluate(t).unwrap() + conj + 1e-9,
                "{}: Young violated at s = {s}, t = {t}",
                phi.family_name()
            );
            done += 1;
            checked += 1;
        }
    }
    assert!(checked >= 10_000);
    pass(
        2,
        "Young's inequality",
        format!("{checked} random pairs, zero violations"),
    );
}

#[test]
fn criterion_03_luxemburg_closed_form() {
    let mut rng = seeded_rng(0x0303);
    let mut worst = 0.0f64;
    for &p in &[1.5, 2.0, 3.0] {
        let phi = OrliczFunction::power(p).unwrap();
        for _ in 0..100 {
            let den = rng.gen_range(2i64..10_000);
            let num = rng.gen_range(1i64..=den);
            let f = SimpleFunction::indicator(frac(0, 1), frac(num, den)).unwrap();
            let norm = f.luxemburg_norm(&phi, 1e-9).unwrap();
            let want = (num as f64 / den as f64).powf(1.0 / p);
            worst = worst.max((norm - want).abs());
        }
    }
    assert!(worst <= 1e-8, "worst closed-form error {worst}");
    pass(
        3,
        "Luxemburg closed form",
        format!("300 indicators, worst |Δ| = {worst:.2e}"),
    );
}

#[test]
fn criterion_04_rearrangement() {
    let families = builtin_families();
    let mut rng = seeded_rng(0x0404);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let f = random_function(&mut rng, 6, 3.0);
        let r = f.rearrange();
        assert_eq!(
            f.distribution(),
            r.distribution(),
            "equimeasurability must be exact"
        );
        for phi in &families {
            let nf = f.luxemburg_norm(phi, 1e-9).unwrap();
            let nr = r.luxemburg_norm(phi, 1e-9).unwrap();
            worst = worst.max((nf - nr).abs());
        }
    }
    assert!(worst <= 1e-8, "worst norm invariance error {worst}");
    pass(
        4,
        "rearrangement",
        format!(
            "1000 functions x {} families, worst |Δ| = {worst:.2e}",
            families.len()
        ),
    );
}

#[test]
fn criterion_05_sup_cesaro_inequality() {
    let start = Instant::now();
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..500u64 {
        let window = 1 + (seed % 8) as usize;
        let k_total = (window * (2 + (seed % 7) as usize)).clamp(window, 64);
        let seq = FunctionSequence::seeded_random(seed, 4, 2.0);
        let report = cesaro::sup_ces_inequality_check(&seq, k_total, window, 1e-12).unwrap();
        assert!(
            report.holds,
            "violation {:.3e} at seed {seed} (K={k_total}, N={window})",
            report.max_violation
        );
        worst = worst.max(report.max_violation);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(
        5,
        "running-supremum inequality",
        format!("500 sequences, max LHS−RHS = {worst:.3e}, {elapsed:?}"),
    );
}

fn random_eligible(seed: u64, blocks: usize, max_size: usize) -> EligibleSequence {
    let mut rng = seeded_rng(seed);
    let specs: Vec<Block> = (1..=blocks)
        .map(|n| {
            let size = rng.gen_range(1..=max_size);
            let lead = (2f64).powi(n as i32);
            let values: Vec<f64> = (0..size)
                .map(|j| lead * (1.0 + (j as f64 + rng.gen_range(0.0..0.4)) / (2.0 * size as f64)))
                .collect();
            let raw: Vec<i64> = (0..size).map(|_| rng.gen_range(1..100i64)).collect();
            let total: i64 = raw.iter().sum();
            let weights = raw.iter().map(|&r| frac(r, total)).collect();
            Block { values, weights }
        })
        .collect();
    EligibleSequence::new(specs).unwrap()
}

#[test]
fn criterion_06_b_table_law() {
    let mut worst = 0.0f64;
    for &p in &[1.5, 2.0, 3.0] {
        let phi = OrliczFunction::power(p).unwrap();
        for seed in 0..10u64 {
            let seq = random_eligible(0x0600 + seed, 8, 4);
            let table = dhtest::b_table(&phi, &seq, 8, 16, 1e-9).unwrap();
            for row in &table.entries {
                assert_eq!(row[0], 1.0, "b_(n,1) must be exactly 1");
                for (m, &b) in row.iter().enumerate() {
                    worst = worst.max((b - ((m + 1) as f64).powf(1.0 - p)).abs());
                }
                for m in 1..row.len() {
                    assert!(row[m] <= row[m - 1], "column monotonicity must be exact");
                }
            }
        }
    }
    assert!(worst <= 1e-12, "worst b-table deviation {worst}");
    pass(
        6,
        "b-table law",
        format!("30 random sequences, worst |b − m^(1−p)| = {worst:.2e}"),
    );
}

#[test]
fn criterion_07_dh_series() {
    let seq = EligibleSequence::singleton_powers(2.0, 8).unwrap();
    let p2 = OrliczFunction::power(2.0).unwrap();
    let rep = dhtest::dh_series_test(&p2, &seq, 8, 10_000, 1e-9).unwrap();
    assert_eq!(rep.verdict, dhtest::SeriesVerdict::ConvergentTrend);
    let partial = *rep.partial_sums.last().unwrap();
    let target = std::f64::consts::PI.powi(2) / 6.0;
    assert!(
        (partial - target).abs() <= 1e-4,
        "partial sum {partial} vs π²/6 = {target}"
    );

    let lin = OrliczFunction::linear();
    let rep = dhtest::dh_series_test(&lin, &seq, 8, 10_000, 1e-9).unwrap();
    assert_eq!(rep.verdict, dhtest::SeriesVerdict::DivergentTrend);
    let mut worst_inc = 0.0f64;
    for (i, w) in rep.partial_sums.windows(2).enumerate() {
        worst_inc = worst_inc.max(((w[1] - w[0]) - 1.0 / (i + 2) as f64).abs());
    }
    assert!(worst_inc <= 1e-12, "harmonic increments off by {worst_inc}");
    pass(7, "series test", format!(
        "p=2 partial sum {partial:.6} (π²/6 − {:.2e}); linear divergent, increment dev {worst_inc:.2e}",
        target - partial
    ));
}

#[test]
fn criterion_08_cross_check_identity() {
    let p2 = OrliczFunction::power(2.0).unwrap();
    let seq = EligibleSequence::singleton_powers(2.0, 8).unwrap();
    let rep = dhtest::cross_check_series_identity(&p2, &seq, 8).unwrap();
    assert!(rep.within, "diff {} > allowed {}", rep.diff, rep.allowed);
    let want: f64 = (1..=8).map(|n| 1.0 / (n * n) as f64).sum();
    assert!((rep.rhs - want).abs() <= 1e-12);
    pass(
        8,
        "series identity cross-check",
        format!(
            "lhs {:.9} rhs {:.9} (Σ n^-2 = {want:.9}), diff {:.2e} ≤ allowed {:.2e}",
            rep.lhs, rep.rhs, rep.diff, rep.allowed
        ),
    );
}

#[test]
fn criterion_09_counterexample_linear() {
    let start = Instant::now();
    let cert = linear_cert_200();
    let verification = counterexample::verify_certificate(cert).unwrap();
    assert!(verification.all_pass, "{:#?}", verification.checks);

    let b10 = counterexample::norm_lower_bound(cert, 10).unwrap().value;
    let b100 = counterexample::norm_lower_bound(cert, 100).unwrap().value;
    let ratio = b100 / b10;
    let want = (harmonic(100) / harmonic(10)).sqrt();
    assert!(
        (ratio / want - 1.0).abs() <= 0.01,
        "bound ratio {ratio} vs sqrt(H100/H10) = {want}"
    );

    let target = 0.9 / (4.0 * cert.d_upper());
    for n in 1..=20 {
        let b = counterexample::certify_modular_lower_bound(cert, n).unwrap();
        assert!(
            b.value >= target,
            "n = {n}: modular bound {} < {target}",
            b.value
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(9, "linear divergence certificate", format!(
        "all checks pass; bound(100)/bound(10) = {ratio:.6} (target {want:.6}); modular bounds ≥ 0.9/(4d) for n ≤ 20; {elapsed:?}"
    ));
}

#[test]
fn criterion_10_counterexample_power_log() {
    let phi = OrliczFunction::power_log(1.0).unwrap();
    let cert = counterexample::build_certificate(&phi, 50, &SearchConfig::default()).unwrap();
    let verification = counterexample::verify_certificate(&cert).unwrap();
    assert!(verification.all_pass, "{:#?}", verification.checks);
    let bounds: Vec<f64> = cert.bounds.iter().map(|b| b.norm_lower).collect();
    assert!(!bounds.is_empty());
    for w in bounds.windows(2) {
        assert!(
            w[1] > w[0],
            "norm bounds must be strictly increasing: {bounds:?}"
        );
    }
    pass(
        10,
        "power-log divergence certificate",
        format!("n_max = 50 build + verify pass; norm bounds strictly increasing: {bounds:?}"),
    );
}

#[test]
fn criterion_11_negative_control() {
    let p2 = OrliczFunction::power(2.0).unwrap();
    let err = counterexample::build_certificate(&p2, 10, &SearchConfig::default()).unwrap_err();
    let detail = match err {
        Error::SearchExhausted { n, detail } => {
            assert_eq!(n, 2, "exhaustion must happen at n = 2");
            assert!(!detail.is_empty());
            detail
        }
        other => panic!("expected SearchExhausted, got {other:?}"),
    };

    let probe = orlicz::kr_dual_delta2_probe(&p2, 3.0, 0.0, 1e6).unwrap();
    assert!(
        probe.witness.is_none(),
        "no witness may exist up to the cap"
    );
    pass(
        11,
        "negative control",
        format!(
            "t² build exhausted at n = 2 ({}); dual-Δ2 probe absent over {} grid points",
            detail.split(';').nth(1).unwrap_or("").trim(),
            probe.grid_points
        ),
    );
}

#[test]
fn criterion_12_monte_carlo_consistency() {
    let cert = linear_cert_200();
    let rep = counterexample::mc_sanity_check(cert, 2, 100_000, 0x1202).unwrap();
    assert!(
        rep.consistent,
        "estimate {} + 3·{} < bound {}",
        rep.estimate, rep.stderr, rep.certified_lower_bound
    );

    let phi = cert.phi_fn().unwrap();
    let (mean, stderr) =
        counterexample::mc_modular_estimate(&cert.f, cert.c_seq[0], 1, 100_000, 0x1201, &phi);
    let exact = cert.f.scale(1.0 / cert.c_seq[0]).modular(&phi);
    assert!(
        (mean - exact).abs() <= 3.0 * stderr,
        "n = 1: mean {mean} vs exact {exact} (stderr {stderr})"
    );
    pass(
        12,
        "Monte Carlo consistency",
        format!(
            "n=2: {:.6} + 3·{:.2e} ≥ {:.6}; n=1: |{mean:.6} − {exact:.6}| ≤ 3·{stderr:.2e}",
            rep.estimate, rep.stderr, rep.certified_lower_bound
        ),
    );
}

#[test]
fn criterion_13_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes: Vec<Vec<u8>> = Vec::new();
    for run in 0..2 {
        let mut config = RunConfig::new("cesaro.diagnose");
        config.phi = Some(orlicz::PhiSpec {
            family: "power".into(),
            params: vec![2.0],
            knots: None,
        });
        config.seed = Some(42);
        config
            .params
            .insert("generator".into(), serde_json::json!("random"));
        config.params.insert("pieces".into(), serde_json::json!(4));
        config.params.insert("scale".into(), serde_json::json!(2.0));
        config.params.insert("depth".into(), serde_json::json!(12));
        config.output = OutputSpec {
            format: OutputFormat::Json,
            path: Some(dir.path().join(format!("run-{run}.json"))),
        };
        let (_, path, _) = cli::run_to_file(&config).unwrap();
        bytes.push(std::fs::read(path).unwrap());
    }
    assert_eq!(
        bytes[0], bytes[1],
        "same config + seed must be byte-identical"
    );

    // a randomized Monte Carlo command must be deterministic too
    let cert =
        counterexample::build_certificate(&OrliczFunction::linear(), 40, &SearchConfig::default())
            .unwrap();
    let mut bytes: Vec<Vec<u8>> = Vec::new();
    for run in 0..2 {
        let mut config = RunConfig::new("counterexample.mc");
        config.seed = Some(7);
        config
            .params
            .insert("certificate".into(), serde_json::to_value(&cert).unwrap());
        config.params.insert("n".into(), serde_json::json!(2));
        config
            .params
            .insert("samples".into(), serde_json::json!(20_000));
        config.output = OutputSpec {
            format: OutputFormat::Json,
            path: Some(dir.path().join(format!("mc-{run}.json"))),
        };
        let (_, path, _) = cli::run_to_file(&config).unwrap();
        bytes.push(std::fs::read(path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    pass(
        13,
        "determinism",
        "two runs of each config produced byte-identical reports".into(),
    );
}

// the zero weight sanity: eligible sequences reject unnormalized weights,
// exercised here so the acceptance binary covers the external input contract
#[test]
fn eligible_sequence_input_contract() {
    let bad = Block {
        values: vec![2.0],
        weights: vec![BigRational::one() + BigRational::one()],
    };
    assert!(EligibleSequence::new(vec![bad]).is_err());
}
