//! Batch front end: self-contained run configs, deterministic JSON/CSV
//! reports, and parameter sweeps.
//!
//! One invocation executes one [`RunConfig`] and writes one report file.
//! Reports embed the tool version and a hash of the canonical config, never a
//! timestamp, so identical config + seed produces byte-identical files.
//! Exit codes: 0 success, 2 assertion/verdict failure, 3 input error,
//! 4 numerical error.

pub mod args;
mod commands;
mod csv;
mod params;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::orlicz::PhiSpec;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ORLICZ_LAB_OUT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// One run: a command name, the Orlicz function it applies to, command
/// parameters, an optional seed (mandatory for randomized commands) and the
/// output spec. Unknown fields are rejected, both here and inside `params`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiSpec>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub params: serde_json::Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            phi: None,
            params: serde_json::Map::new(),
            seed: None,
            output: OutputSpec::default(),
        }
    }

    /// Hash of the computation: command, phi, params and seed. The output
    /// spec is excluded so that where a report is written never changes its
    /// bytes.
    pub fn hash(&self) -> String {
        let normalized = RunConfig {
            output: OutputSpec::default(),
            ..self.clone()
        };
        let bytes = serde_json::to_vec(&normalized).expect("configs always serialize");
        let digest = Sha256::digest(&bytes);
        let mut out = String::with_capacity(64);
        for b in digest {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }
}

/// Report envelope written next to every run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: Value,
}

/// Execute a config and assemble the report (no file I/O).
pub fn execute(config: &RunConfig) -> Result<Report> {
    let (result, _summary) = commands::dispatch(config)?;
    Ok(Report {
        tool: "orlicz-lab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: config.command.clone(),
        config_hash: config.hash(),
        seed: config.seed,
        result,
    })
}

/// Execute a config, returning the report plus a one-line human summary.
pub fn execute_with_summary(config: &RunConfig) -> Result<(Report, String)> {
    let (result, summary) = commands::dispatch(config)?;
    Ok((
        Report {
            tool: "orlicz-lab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: config.command.clone(),
            config_hash: config.hash(),
            seed: config.seed,
            result,
        },
        summary,
    ))
}

/// Verdict-level exit code for a successful run: some commands assert a
/// theorem or a consistency check, and a negative verdict exits 2 even though
/// the run itself succeeded. Probe commands (Δ2, KR, weak-null, trends)
/// report their verdict with exit 0.
pub fn report_exit_code(report: &Report) -> i32 {
    let flag = |key: &str| report.result.get(key).and_then(Value::as_bool);
    let failed = match report.command.as_str() {
        "cesaro.supineq" | "cesaro.pconvex" => flag("holds") == Some(false),
        "cesaro.closedbound" => flag("premise_met") == Some(false) || flag("holds") == Some(false),
        "dh.crosscheck" => flag("within") == Some(false),
        "counterexample.mc" => flag("consistent") == Some(false),
        "counterexample.verify" => flag("all_pass") == Some(false),
        _ => false,
    };
    if failed {
        2
    } else {
        0
    }
}

fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Deterministic default file name: command plus config-hash prefix.
pub fn default_report_path(config: &RunConfig) -> PathBuf {
    let ext = match config.output.format {
        OutputFormat::Json => "json",
        OutputFormat::Csv => "csv",
    };
    let stem = config.command.replace('.', "-");
    let hash = config.hash();
    default_out_dir().join(format!("{stem}-{}.{ext}", &hash[..12]))
}

/// Render the report in the configured format.
pub fn render_report(report: &Report, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => {
            let mut bytes = serde_json::to_vec_pretty(report)?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        OutputFormat::Csv => Ok(csv::render_csv(report).into_bytes()),
    }
}

/// Execute a config and write its report file; returns the path.
pub fn run_to_file(config: &RunConfig) -> Result<(Report, PathBuf, String)> {
    let (report, summary) = execute_with_summary(config)?;
    let path = config
        .output
        .path
        .clone()
        .unwrap_or_else(|| default_report_path(config));
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&path, render_report(&report, config.output.format)?)?;
    Ok((report, path, summary))
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub status: String,
    pub varied: Vec<(String, String)>,
    pub metrics: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub rows: usize,
    pub failures: usize,
    pub path: PathBuf,
}

/// Run a homogeneous list of configs and aggregate one CSV keyed by the
/// varied parameters, ordered by config index. Child failures are recorded
/// per row; the sweep succeeds only if every row does.
pub fn sweep(configs: &[RunConfig], out: Option<&Path>) -> Result<SweepOutcome> {
    if let Some(first) = configs.first() {
        if let Some(other) = configs.iter().find(|c| c.command != first.command) {
            return Err(Error::Input(format!(
                "sweep requires a homogeneous command: found '{}' and '{}'",
                first.command, other.command
            )));
        }
    }

    let varied_keys = varied_param_keys(configs);
    let mut rows: Vec<SweepRow> = Vec::with_capacity(configs.len());
    let mut failures = 0usize;
    for (index, config) in configs.iter().enumerate() {
        let varied: Vec<(String, String)> = varied_keys
            .iter()
            .map(|k| (k.clone(), param_display(config, k)))
            .collect();
        match execute(config) {
            Ok(report) => {
                let mut metrics = Vec::new();
                csv::flatten_scalars(&report.result, String::new(), &mut metrics);
                let code = report_exit_code(&report);
                if code != 0 {
                    failures += 1;
                }
                rows.push(SweepRow {
                    index,
                    status: if code == 0 {
                        "ok".into()
                    } else {
                        "check-failed".into()
                    },
                    varied,
                    metrics,
                });
            }
            Err(err) => {
                failures += 1;
                rows.push(SweepRow {
                    index,
                    status: format!("error: {err}"),
                    varied,
                    metrics: Vec::new(),
                });
            }
        }
    }

    let body = csv::render_sweep(&rows);
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| {
        let hash = if configs.is_empty() {
            "empty".to_string()
        } else {
            configs[0].hash()[..12].to_string()
        };
        default_out_dir().join(format!("sweep-{hash}.csv"))
    });
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&path, body)?;
    Ok(SweepOutcome {
        rows: rows.len(),
        failures,
        path,
    })
}

fn param_display(config: &RunConfig, key: &str) -> String {
    if key == "seed" {
        return config.seed.map(|s| s.to_string()).unwrap_or_default();
    }
    if let Some(rest) = key.strip_prefix("phi.") {
        if let Some(phi) = &config.phi {
            return match rest {
                "family" => phi.family.clone(),
                "params" => phi
                    .params
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(";"),
                _ => String::new(),
            };
        }
        return String::new();
    }
    config
        .params
        .get(key)
        .map(csv::scalar_display)
        .unwrap_or_default()
}

fn varied_param_keys(configs: &[RunConfig]) -> Vec<String> {
    use std::collections::BTreeSet;
    let mut keys: BTreeSet<String> = BTreeSet::new();
    for c in configs {
        for k in c.params.keys() {
            keys.insert(k.clone());
        }
    }
    keys.insert("seed".into());
    keys.insert("phi.family".into());
    keys.insert("phi.params".into());
    keys.into_iter()
        .filter(|k| {
            let mut values: Vec<String> = configs.iter().map(|c| param_display(c, k)).collect();
            values.dedup();
            values.len() > 1
        })
        .collect()
}
