//! Per-command execution: pull typed parameters out of the config, call into
//! the library, and shape the result for the report.

use serde_json::{json, Value};

use super::params::Params;
use super::RunConfig;
use crate::cesaro::{self, DiagnosticsConfig, FunctionSequence};
use crate::counterexample::{self, CounterexampleCertificate, SearchConfig};
use crate::dhtest::{self, BlockSpec, EligibleSequence};
use crate::error::{Error, Result};
use crate::orlicz::{self, OrliczFunction};
use crate::simplefn::SimpleFunction;

fn phi_of(config: &RunConfig) -> Result<OrliczFunction> {
    config
        .phi
        .as_ref()
        .ok_or_else(|| Error::Input(format!("command '{}' requires a phi spec", config.command)))?
        .build()
}

fn seed_of(config: &RunConfig) -> Result<u64> {
    config.seed.ok_or_else(|| {
        Error::Input(format!(
            "command '{}' is randomized: a seed is mandatory",
            config.command
        ))
    })
}

fn function_param(p: &Params, key: &str) -> Result<SimpleFunction> {
    let value = p.value(key).ok_or_else(|| {
        Error::Input(format!("missing parameter '{key}' (step function triples)"))
    })?;
    serde_json::from_value(value.clone())
        .map_err(|e| Error::Input(format!("bad step function in '{key}': {e}")))
}

fn certificate_param(p: &Params) -> Result<CounterexampleCertificate> {
    let value = p
        .value("certificate")
        .ok_or_else(|| Error::Input("missing parameter 'certificate'".into()))?;
    load_certificate_value(value)
}

/// Accept either a bare certificate or a build-report envelope.
pub fn load_certificate_value(value: &Value) -> Result<CounterexampleCertificate> {
    if let Ok(cert) = serde_json::from_value::<CounterexampleCertificate>(value.clone()) {
        return Ok(cert);
    }
    if let Some(inner) = value.pointer("/result/certificate") {
        return serde_json::from_value(inner.clone())
            .map_err(|e| Error::Input(format!("bad certificate payload: {e}")));
    }
    Err(Error::Input(
        "value is neither a certificate nor a build report containing one".into(),
    ))
}

fn blocks_param(p: &Params) -> Result<EligibleSequence> {
    let count = p.usize_or("count", 8)?;
    let base = p.f64_or("base", 2.0)?;
    let size = p.usize_or("block_size", 4)?;
    match p.value("blocks") {
        None => EligibleSequence::singleton_powers(base, count),
        Some(Value::String(name)) => match name.as_str() {
            "singleton-powers" => EligibleSequence::singleton_powers(base, count),
            "geometric-blocks" => EligibleSequence::geometric_blocks(base, size, count),
            other => Err(Error::Input(format!(
                "unknown block generator '{other}' (expected singleton-powers or geometric-blocks)"
            ))),
        },
        Some(v) => {
            let specs: Vec<BlockSpec> = serde_json::from_value(v.clone())
                .map_err(|e| Error::Input(format!("bad blocks payload: {e}")))?;
            dhtest::sequence_from_specs(&specs)
        }
    }
}

fn sequence_param(config: &RunConfig, p: &Params) -> Result<FunctionSequence> {
    let generator = p.str_or("generator", "random")?;
    let pieces = p.usize_or("pieces", 4)?.max(1);
    let scale = p.f64_or("scale", 2.0)?;
    match generator.as_str() {
        "random" => Ok(FunctionSequence::seeded_random(
            seed_of(config)?,
            pieces,
            scale,
        )),
        "disjoint-blocks" => Ok(FunctionSequence::seeded_disjoint_blocks(
            seed_of(config)?,
            pieces,
            scale,
        )),
        "dilates" => {
            let cert = certificate_param(p)?;
            Ok(FunctionSequence::disjoint_dilates(
                cert.f.clone(),
                cert.phi_fn()?,
            ))
        }
        other => Err(Error::Input(format!(
            "unknown generator '{other}' (expected random, disjoint-blocks, or dilates)"
        ))),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// Execute one command; returns the result payload and a one-line summary.
pub fn dispatch(config: &RunConfig) -> Result<(Value, String)> {
    let p = Params::new(&config.params);
    let out = match config.command.as_str() {
        "orlicz.conjugate" => {
            let phi = phi_of(config)?;
            let s = p.f64("s")?;
            let tol = p.positive("tol", p.f64_or("tol", 1e-9)?)?;
            p.finish()?;
            let value = orlicz::conjugate(&phi, s, tol)?;
            let summary = match value {
                orlicz::Conjugate::Finite(v) => format!("conjugate({s}) = {v:.9}"),
                orlicz::Conjugate::Infinite => format!("conjugate({s}) = +inf"),
            };
            (
                json!({
                    "s": s,
                    "tol": tol,
                    "value": to_value(&value)?,
                    "slope_estimate": phi.asymptotic_slope_estimate(),
                }),
                summary,
            )
        }
        "orlicz.validate" => {
            let phi = phi_of(config)?;
            let grid = p.usize_or("grid", 100)?;
            let t_max = p.positive("tmax", p.f64_or("tmax", 10.0)?)?;
            p.finish()?;
            let report = orlicz::validate(&phi, grid, t_max)?;
            let summary = if report.pass {
                "validate: pass".to_string()
            } else {
                format!("validate: violation {:?}", report.violation)
            };
            (to_value(&report)?, summary)
        }
        "orlicz.delta2" => {
            let phi = phi_of(config)?;
            let t0 = p.f64_or("t0", 1.0)?;
            let t_max = p.positive("tmax", p.f64_or("tmax", 1e6)?)?;
            let grid = p.usize_or("grid", 200)?;
            let threshold = p.f64_or("threshold", 1e6)?;
            p.finish()?;
            let report = orlicz::delta2_check(&phi, t0, t_max, grid, threshold)?;
            let summary = format!(
                "delta2: verdict={:?} C_est={:.6e}",
                report.verdict, report.c_est
            );
            (to_value(&report)?, summary)
        }
        "orlicz.kr-probe" => {
            let phi = phi_of(config)?;
            let l = p.f64("l")?;
            let t_floor = p.f64_or("tfloor", 0.0)?;
            let t_cap = p.positive("tcap", p.f64_or("tcap", 1e6)?)?;
            p.finish()?;
            let out = orlicz::kr_dual_delta2_probe(&phi, l, t_floor, t_cap)?;
            let summary = match out.witness {
                Some(w) => format!("kr-probe: witness t = {w:.6e}"),
                None => "kr-probe: absent (inconclusive at this cap)".to_string(),
            };
            (to_value(&out)?, summary)
        }
        "fn.rearrange" => {
            let f = function_param(&p, "function")?;
            p.finish()?;
            let rearranged = f.rearrange();
            let distribution = f.distribution();
            (
                json!({
                    "input": to_value(&f)?,
                    "rearranged": to_value(&rearranged)?,
                    "distribution": to_value(&distribution)?,
                }),
                format!("rearrange: {} pieces", rearranged.pieces().len()),
            )
        }
        "fn.norm" => {
            let phi = phi_of(config)?;
            let f = function_param(&p, "function")?;
            let tol = p.positive("tol", p.f64_or("tol", 1e-9)?)?;
            p.finish()?;
            let norm = f.luxemburg_norm(&phi, tol)?;
            (
                json!({ "norm": norm, "tol": tol }),
                format!("luxemburg norm = {norm:.9}"),
            )
        }
        "fn.modular" => {
            let phi = phi_of(config)?;
            let f = function_param(&p, "function")?;
            p.finish()?;
            let modular = f.modular(&phi);
            (
                json!({ "modular": modular }),
                format!("modular = {modular:.9}"),
            )
        }
        "cesaro.diagnose" => {
            let phi = phi_of(config)?;
            let depth = p.usize_or("depth", 32)?;
            let seq = sequence_param(config, &p)?;
            p.finish()?;
            let report = cesaro::diagnose_order_boundedness(
                &phi,
                &seq,
                depth,
                &DiagnosticsConfig::default(),
            )?;
            let summary = format!(
                "diagnose: verdict={:?} sup_norm[{}]={:.6}",
                report.verdict,
                depth,
                report.sup_norms.last().unwrap()
            );
            (to_value(&report)?, summary)
        }
        "cesaro.supineq" => {
            let k_total = p.usize_or("k", 32)?;
            let window = p.usize_or("n", 4)?;
            let value_tol = p.f64_or("value_tol", 1e-12)?;
            let seq = sequence_param(config, &p)?;
            p.finish()?;
            let report = cesaro::sup_ces_inequality_check(&seq, k_total, window, value_tol)?;
            let summary = format!(
                "supineq: holds={} max_violation={:.3e}",
                report.holds, report.max_violation
            );
            (to_value(&report)?, summary)
        }
        "cesaro.pconvex" => {
            let phi = phi_of(config)?;
            let n = p.usize_or("n", 2)?;
            let m = p.usize_or("m", 5)?;
            let tol = p.f64_or("tol", 1e-9)?;
            let seq = sequence_param(config, &p)?;
            p.finish()?;
            let report = cesaro::disjoint_p_convex_bound_check(&phi, &seq, n, m, tol)?;
            let summary = format!(
                "pconvex: holds={} lhs={:.6} rhs={:.6}",
                report.holds, report.lhs, report.rhs
            );
            (to_value(&report)?, summary)
        }
        "cesaro.closedbound" => {
            let phi = phi_of(config)?;
            let k_total = p.usize_or("k", 32)?;
            let window = p.usize_or("n", 4)?;
            let tol = p.f64_or("tol", 1e-9)?;
            let seq = sequence_param(config, &p)?;
            p.finish()?;
            let report = cesaro::closed_cesaro_modular_check(&phi, &seq, k_total, window, tol)?;
            let summary = match (report.premise_met, report.holds) {
                (false, _) => "closedbound: premise not met".to_string(),
                (true, Some(h)) => format!(
                    "closedbound: holds={} value={:.6} <= {}",
                    h,
                    report.conclusion_value.unwrap(),
                    report.bound
                ),
                (true, None) => "closedbound: premise met".to_string(),
            };
            (to_value(&report)?, summary)
        }
        "counterexample.build" => {
            let phi = phi_of(config)?;
            let n_max = p.usize_or("nmax", 200)?;
            let search = SearchConfig {
                ratio: p.f64_or("ratio", SearchConfig::default().ratio)?,
                max_steps: p.usize_or("max_steps", SearchConfig::default().max_steps)?,
                a_start: p.f64_or("a_start", SearchConfig::default().a_start)?,
            };
            p.finish()?;
            let cert = counterexample::build_certificate(&phi, n_max, &search)?;
            let summary = format!(
                "build: n_max={} d in [{:.6}, {:.6}] bounds={}",
                cert.n_max,
                cert.d_bracket.0,
                cert.d_bracket.1,
                cert.bounds.len()
            );
            (
                json!({
                    "n_max": cert.n_max,
                    "d_bracket": cert.d_bracket,
                    "tail_measure": cert.tail_measure,
                    "bounds": to_value(&cert.bounds)?,
                    "certificate": to_value(&cert)?,
                }),
                summary,
            )
        }
        "counterexample.verify" => {
            let cert = certificate_param(&p)?;
            p.finish()?;
            let report = counterexample::verify_certificate(&cert)?;
            let summary = format!("verify: all_pass={}", report.all_pass);
            (to_value(&report)?, summary)
        }
        "counterexample.bounds" => {
            let cert = certificate_param(&p)?;
            match p.value("n").and_then(Value::as_u64) {
                Some(n) => {
                    p.finish()?;
                    let modular = counterexample::certify_modular_lower_bound(&cert, n as usize)?;
                    let norm = counterexample::norm_lower_bound(&cert, n as usize)?;
                    let summary = format!(
                        "bounds: n={} modular>={:.6} norm>={:.6}",
                        n, modular.value, norm.value
                    );
                    (
                        json!({
                            "n": n,
                            "modular_lower": modular.value,
                            "modular_chain": modular.chain,
                            "modular_exact_integral": modular.exact_integral,
                            "fraction_of_target": modular.fraction_of_target,
                            "tail_fraction": modular.tail_fraction,
                            "norm_lower": norm.value,
                            "norm_fraction": norm.fraction,
                        }),
                        summary,
                    )
                }
                None => {
                    p.finish()?;
                    let records = to_value(&cert.bounds)?;
                    let summary = format!("bounds: {} certified records", cert.bounds.len());
                    (json!({ "records": records }), summary)
                }
            }
        }
        "counterexample.mc" => {
            let cert = certificate_param(&p)?;
            let n = p.usize_or("n", 2)?;
            let samples = p.usize_or("samples", 100_000)?;
            p.finish()?;
            let report = counterexample::mc_sanity_check(&cert, n, samples, seed_of(config)?)?;
            let summary = format!(
                "mc: estimate={:.6} (stderr {:.2e}) certified>={:.6} consistent={}",
                report.estimate, report.stderr, report.certified_lower_bound, report.consistent
            );
            (to_value(&report)?, summary)
        }
        "dh.table" => {
            let phi = phi_of(config)?;
            let seq = blocks_param(&p)?;
            let rows = p.usize_or("rows", seq.len())?;
            let cols = p.usize_or("m", 16)?;
            let stab_tol = p.f64_or("stab_tol", 1e-9)?;
            p.finish()?;
            let table = dhtest::b_table(&phi, &seq, rows, cols, stab_tol)?;
            let summary = format!(
                "table: {}x{} b_1_1={:.6} b_{}_{}={:.6}",
                table.rows,
                table.cols,
                table.entries[0][0],
                table.rows,
                table.cols,
                table.entries[table.rows - 1][table.cols - 1]
            );
            (to_value(&table)?, summary)
        }
        "dh.test" => {
            let phi = phi_of(config)?;
            let seq = blocks_param(&p)?;
            let rows = p.usize_or("rows", seq.len())?;
            let cols = p.usize_or("m", 1000)?;
            let stab_tol = p.f64_or("stab_tol", 1e-9)?;
            p.finish()?;
            let report = dhtest::dh_series_test(&phi, &seq, rows, cols, stab_tol)?;
            let summary = format!(
                "series: verdict={:?} partial_sum={:.6}",
                report.verdict,
                report.partial_sums.last().unwrap()
            );
            (to_value(&report)?, summary)
        }
        "dh.realize" => {
            let phi = phi_of(config)?;
            let seq = blocks_param(&p)?;
            let k = p.usize_or("k", seq.len())?;
            let denom_cap = p.u64_or("denom_cap", dhtest::DEFAULT_DENOM_CAP)?;
            p.finish()?;
            let real = dhtest::realize(&phi, &seq, k, denom_cap)?;
            let mut norms = Vec::with_capacity(real.functions.len());
            for f in &real.functions {
                norms.push(f.luxemburg_norm(&phi, 1e-10)?);
            }
            let summary = format!(
                "realize: {} functions, capacity used {:.6}",
                real.functions.len(),
                real.capacity_used
            );
            (
                json!({
                    "functions": to_value(&real.functions)?,
                    "norms": norms,
                    "modular_rounding": real.modular_rounding,
                    "capacity_used": real.capacity_used,
                }),
                summary,
            )
        }
        "dh.crosscheck" => {
            let phi = phi_of(config)?;
            let seq = blocks_param(&p)?;
            let k = p.usize_or("k", seq.len())?;
            p.finish()?;
            let report = dhtest::cross_check_series_identity(&phi, &seq, k)?;
            let summary = format!(
                "crosscheck: within={} lhs={:.9} rhs={:.9}",
                report.within, report.lhs, report.rhs
            );
            (to_value(&report)?, summary)
        }
        other => {
            return Err(Error::Input(format!("unknown command '{other}'")));
        }
    };
    Ok(out)
}
