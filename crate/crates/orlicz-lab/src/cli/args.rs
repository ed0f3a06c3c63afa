//! Command-line surface. Every subcommand assembles the same self-contained
//! [`RunConfig`] that config files use, so flag-driven runs and `run --config`
//! produce identical reports and hashes.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use super::{report_exit_code, run_to_file, OutputFormat, OutputSpec, RunConfig};
use crate::error::{Error, Result};
use crate::orlicz::PhiSpec;

#[derive(Parser, Debug)]
#[command(
    name = "orlicz-lab",
    version,
    about = "Numerical laboratory for Orlicz function spaces on [0,1]"
)]
pub struct Cli {
    #[command(subcommand)]
    command: TopCommand,
}

#[derive(Args, Debug, Clone)]
struct PhiArgs {
    /// Orlicz function family: power | power-log | exp-minus-linear | linear | piecewise-linear
    #[arg(long, global = true)]
    family: Option<String>,
    /// Family parameter p (power and power-log)
    #[arg(long, global = true)]
    p: Option<f64>,
    /// Piecewise-linear knots as "x:y,x:y,..."
    #[arg(long, global = true)]
    knots: Option<String>,
}

impl PhiArgs {
    fn to_spec(&self) -> Result<Option<PhiSpec>> {
        let family = match &self.family {
            None => return Ok(None),
            Some(f) => f.clone(),
        };
        let params = self.p.map(|p| vec![p]).unwrap_or_default();
        let knots = match &self.knots {
            None => None,
            Some(raw) => {
                let mut parsed = Vec::new();
                for pair in raw.split(',') {
                    let (x, y) = pair
                        .split_once(':')
                        .ok_or_else(|| Error::Input(format!("bad knot '{pair}', expected x:y")))?;
                    let x: f64 = x
                        .trim()
                        .parse()
                        .map_err(|_| Error::Input(format!("bad knot abscissa '{x}'")))?;
                    let y: f64 = y
                        .trim()
                        .parse()
                        .map_err(|_| Error::Input(format!("bad knot value '{y}'")))?;
                    parsed.push([x, y]);
                }
                Some(parsed)
            }
        };
        Ok(Some(PhiSpec {
            family,
            params,
            knots,
        }))
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Report file path (default: <command>-<hash>.<ext> in $ORLICZ_LAB_OUT or .)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format: json (canonical) or csv (plot projection)
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Seed for randomized commands
    #[arg(long, global = true)]
    seed: Option<u64>,
}

impl OutputArgs {
    fn apply(&self, config: &mut RunConfig) -> Result<()> {
        config.output = OutputSpec {
            format: match self.format.as_str() {
                "json" => OutputFormat::Json,
                "csv" => OutputFormat::Csv,
                other => return Err(Error::Input(format!("unknown format '{other}'"))),
            },
            path: self.out.clone(),
        };
        config.seed = self.seed;
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
enum TopCommand {
    /// Orlicz function probes: conjugation, validation, growth conditions
    Orlicz {
        #[command(subcommand)]
        cmd: OrliczCmd,
        #[command(flatten)]
        phi: PhiArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Step function operations
    #[command(name = "fn")]
    Fn {
        #[command(subcommand)]
        cmd: FnCmd,
        #[command(flatten)]
        phi: PhiArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cesàro averaging diagnostics and inequalities
    Cesaro {
        #[command(subcommand)]
        cmd: CesaroCmd,
        #[command(flatten)]
        phi: PhiArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Norm-divergence certificates
    Counterexample {
        #[command(subcommand)]
        cmd: CounterexampleCmd,
        #[command(flatten)]
        phi: PhiArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Eligible-block-sequence diagnostics
    Dh {
        #[command(subcommand)]
        cmd: DhCmd,
        #[command(flatten)]
        phi: PhiArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Execute a run config file
    Run {
        /// Path to a RunConfig JSON document
        #[arg(long)]
        config: PathBuf,
    },
    /// Execute a list of run configs and aggregate one CSV
    Sweep {
        /// Path to a JSON array of RunConfig documents
        #[arg(long)]
        configs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum OrliczCmd {
    /// Legendre-Fenchel conjugate at s
    Conjugate {
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Check the Orlicz-function axioms on a probe grid
    Validate {
        #[arg(long, default_value_t = 100)]
        grid: usize,
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
    },
    /// Probe the Δ2-condition
    Delta2 {
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        #[arg(long, default_value_t = 1e6)]
        tmax: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 1e6)]
        threshold: f64,
    },
    /// Search for a witness of the dual-Δ2 failure criterion
    KrProbe {
        #[arg(long)]
        l: f64,
        #[arg(long, default_value_t = 0.0)]
        tfloor: f64,
        #[arg(long, default_value_t = 1e6)]
        tcap: f64,
    },
}

#[derive(Subcommand, Debug)]
enum FnCmd {
    /// Decreasing rearrangement and distribution profile
    Rearrange {
        /// JSON file with [numerator, denominator, value] triples
        #[arg(long)]
        input: PathBuf,
    },
    /// Luxemburg norm
    Norm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Modular ∫φ(|f|)
    Modular {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct SequenceArgs {
    /// Sequence generator: random | disjoint-blocks | dilates
    #[arg(long, default_value = "random")]
    generator: String,
    /// Max pieces per generated function
    #[arg(long, default_value_t = 4)]
    pieces: usize,
    /// Value scale of generated functions
    #[arg(long, default_value_t = 2.0)]
    scale: f64,
    /// Certificate file (for the dilates generator)
    #[arg(long)]
    cert: Option<PathBuf>,
}

impl SequenceArgs {
    fn apply(&self, config: &mut RunConfig) -> Result<()> {
        config
            .params
            .insert("generator".into(), json!(self.generator));
        config.params.insert("pieces".into(), json!(self.pieces));
        config.params.insert("scale".into(), json!(self.scale));
        if let Some(path) = &self.cert {
            config.params.insert("certificate".into(), read_json(path)?);
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
enum CesaroCmd {
    /// Running-supremum norms, Cauchy gaps and a trend verdict
    Diagnose {
        #[arg(long, default_value_t = 32)]
        depth: usize,
        #[command(flatten)]
        seq: SequenceArgs,
    },
    /// Pointwise running-supremum inequality check
    Supineq {
        #[arg(long, default_value_t = 32)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        seq: SequenceArgs,
    },
    /// Disjoint p-convexity bound check (power family)
    Pconvex {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        m: usize,
        #[command(flatten)]
        seq: SequenceArgs,
    },
    /// Modular consequence of the running-supremum inequality
    Closedbound {
        #[arg(long, default_value_t = 32)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[command(flatten)]
        seq: SequenceArgs,
    },
}

#[derive(Subcommand, Debug)]
enum CounterexampleCmd {
    /// Build a divergence certificate
    Build {
        #[arg(long, default_value_t = 200)]
        nmax: usize,
        #[arg(long, default_value_t = 1.05)]
        ratio: f64,
        #[arg(long, default_value_t = 2000)]
        max_steps: usize,
        #[arg(long, default_value_t = 1.0)]
        a_start: f64,
    },
    /// Re-verify a stored certificate
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Certified modular/norm lower bounds
    Bounds {
        #[arg(long)]
        cert: PathBuf,
        /// Depth n; omitted = every stored record
        #[arg(long)]
        n: Option<usize>,
    },
    /// Monte Carlo consistency check of a certified bound
    Mc {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct BlocksArgs {
    /// Block generator: singleton-powers | geometric-blocks, or a JSON file
    /// of {values, weights} blocks via --blocks-file
    #[arg(long, default_value = "singleton-powers")]
    blocks: String,
    #[arg(long)]
    blocks_file: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    base: f64,
    #[arg(long, default_value_t = 8)]
    count: usize,
    #[arg(long, default_value_t = 4)]
    block_size: usize,
}

impl BlocksArgs {
    fn apply(&self, config: &mut RunConfig) -> Result<()> {
        if let Some(path) = &self.blocks_file {
            config.params.insert("blocks".into(), read_json(path)?);
        } else {
            config.params.insert("blocks".into(), json!(self.blocks));
            config
                .params
                .insert("block_size".into(), json!(self.block_size));
        }
        config.params.insert("base".into(), json!(self.base));
        config.params.insert("count".into(), json!(self.count));
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
enum DhCmd {
    /// The weighted convexity-ratio table
    Table {
        #[command(flatten)]
        blocks: BlocksArgs,
        #[arg(long, default_value_t = 16)]
        m: usize,
        #[arg(long)]
        rows: Option<usize>,
    },
    /// Series test with trend verdict
    Test {
        #[command(flatten)]
        blocks: BlocksArgs,
        #[arg(long, default_value_t = 1000)]
        m: usize,
        #[arg(long)]
        rows: Option<usize>,
    },
    /// Realize blocks as disjoint unit-norm step functions
    Realize {
        #[command(flatten)]
        blocks: BlocksArgs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = crate::dhtest::DEFAULT_DENOM_CAP)]
        denom_cap: u64,
    },
    /// Verify the series identity on a realization
    Crosscheck {
        #[command(flatten)]
        blocks: BlocksArgs,
        #[arg(long)]
        k: Option<usize>,
    },
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw)
        .map_err(|e| Error::Input(format!("bad JSON in {}: {e}", path.display())))
}

fn build_config(cli: &TopCommand) -> Result<ConfigOrSweep> {
    let mut config;
    match cli {
        TopCommand::Orlicz { cmd, phi, output } => {
            match cmd {
                OrliczCmd::Conjugate { s, tol } => {
                    config = RunConfig::new("orlicz.conjugate");
                    config.params.insert("s".into(), json!(s));
                    config.params.insert("tol".into(), json!(tol));
                }
                OrliczCmd::Validate { grid, tmax } => {
                    config = RunConfig::new("orlicz.validate");
                    config.params.insert("grid".into(), json!(grid));
                    config.params.insert("tmax".into(), json!(tmax));
                }
                OrliczCmd::Delta2 {
                    t0,
                    tmax,
                    grid,
                    threshold,
                } => {
                    config = RunConfig::new("orlicz.delta2");
                    config.params.insert("t0".into(), json!(t0));
                    config.params.insert("tmax".into(), json!(tmax));
                    config.params.insert("grid".into(), json!(grid));
                    config.params.insert("threshold".into(), json!(threshold));
                }
                OrliczCmd::KrProbe { l, tfloor, tcap } => {
                    config = RunConfig::new("orlicz.kr-probe");
                    config.params.insert("l".into(), json!(l));
                    config.params.insert("tfloor".into(), json!(tfloor));
                    config.params.insert("tcap".into(), json!(tcap));
                }
            }
            config.phi = phi.to_spec()?;
            output.apply(&mut config)?;
        }
        TopCommand::Fn { cmd, phi, output } => {
            match cmd {
                FnCmd::Rearrange { input } => {
                    config = RunConfig::new("fn.rearrange");
                    config.params.insert("function".into(), read_json(input)?);
                }
                FnCmd::Norm { input, tol } => {
                    config = RunConfig::new("fn.norm");
                    config.params.insert("function".into(), read_json(input)?);
                    config.params.insert("tol".into(), json!(tol));
                }
                FnCmd::Modular { input } => {
                    config = RunConfig::new("fn.modular");
                    config.params.insert("function".into(), read_json(input)?);
                }
            }
            config.phi = phi.to_spec()?;
            output.apply(&mut config)?;
        }
        TopCommand::Cesaro { cmd, phi, output } => {
            match cmd {
                CesaroCmd::Diagnose { depth, seq } => {
                    config = RunConfig::new("cesaro.diagnose");
                    config.params.insert("depth".into(), json!(depth));
                    seq.apply(&mut config)?;
                }
                CesaroCmd::Supineq { k, n, seq } => {
                    config = RunConfig::new("cesaro.supineq");
                    config.params.insert("k".into(), json!(k));
                    config.params.insert("n".into(), json!(n));
                    seq.apply(&mut config)?;
                }
                CesaroCmd::Pconvex { n, m, seq } => {
                    config = RunConfig::new("cesaro.pconvex");
                    config.params.insert("n".into(), json!(n));
                    config.params.insert("m".into(), json!(m));
                    let mut seq = seq.clone();
                    if seq.generator == "random" {
                        seq.generator = "disjoint-blocks".into();
                    }
                    seq.apply(&mut config)?;
                }
                CesaroCmd::Closedbound { k, n, seq } => {
                    config = RunConfig::new("cesaro.closedbound");
                    config.params.insert("k".into(), json!(k));
                    config.params.insert("n".into(), json!(n));
                    let mut seq = seq.clone();
                    if seq.generator == "random" {
                        seq.generator = "disjoint-blocks".into();
                    }
                    seq.apply(&mut config)?;
                }
            }
            config.phi = phi.to_spec()?;
            output.apply(&mut config)?;
        }
        TopCommand::Counterexample { cmd, phi, output } => {
            match cmd {
                CounterexampleCmd::Build {
                    nmax,
                    ratio,
                    max_steps,
                    a_start,
                } => {
                    config = RunConfig::new("counterexample.build");
                    config.params.insert("nmax".into(), json!(nmax));
                    config.params.insert("ratio".into(), json!(ratio));
                    config.params.insert("max_steps".into(), json!(max_steps));
                    config.params.insert("a_start".into(), json!(a_start));
                }
                CounterexampleCmd::Verify { cert } => {
                    config = RunConfig::new("counterexample.verify");
                    config.params.insert("certificate".into(), read_json(cert)?);
                }
                CounterexampleCmd::Bounds { cert, n } => {
                    config = RunConfig::new("counterexample.bounds");
                    config.params.insert("certificate".into(), read_json(cert)?);
                    if let Some(n) = n {
                        config.params.insert("n".into(), json!(n));
                    }
                }
                CounterexampleCmd::Mc { cert, n, samples } => {
                    config = RunConfig::new("counterexample.mc");
                    config.params.insert("certificate".into(), read_json(cert)?);
                    config.params.insert("n".into(), json!(n));
                    config.params.insert("samples".into(), json!(samples));
                }
            }
            config.phi = phi.to_spec()?;
            output.apply(&mut config)?;
        }
        TopCommand::Dh { cmd, phi, output } => {
            match cmd {
                DhCmd::Table { blocks, m, rows } => {
                    config = RunConfig::new("dh.table");
                    blocks.apply(&mut config)?;
                    config.params.insert("m".into(), json!(m));
                    if let Some(rows) = rows {
                        config.params.insert("rows".into(), json!(rows));
                    }
                }
                DhCmd::Test { blocks, m, rows } => {
                    config = RunConfig::new("dh.test");
                    blocks.apply(&mut config)?;
                    config.params.insert("m".into(), json!(m));
                    if let Some(rows) = rows {
                        config.params.insert("rows".into(), json!(rows));
                    }
                }
                DhCmd::Realize {
                    blocks,
                    k,
                    denom_cap,
                } => {
                    config = RunConfig::new("dh.realize");
                    blocks.apply(&mut config)?;
                    if let Some(k) = k {
                        config.params.insert("k".into(), json!(k));
                    }
                    config.params.insert("denom_cap".into(), json!(denom_cap));
                }
                DhCmd::Crosscheck { blocks, k } => {
                    config = RunConfig::new("dh.crosscheck");
                    blocks.apply(&mut config)?;
                    if let Some(k) = k {
                        config.params.insert("k".into(), json!(k));
                    }
                }
            }
            config.phi = phi.to_spec()?;
            output.apply(&mut config)?;
        }
        TopCommand::Run { config: path } => {
            let raw = read_json(path)?;
            let parsed: RunConfig = serde_json::from_value(raw)
                .map_err(|e| Error::Input(format!("bad run config: {e}")))?;
            return Ok(ConfigOrSweep::Single(parsed));
        }
        TopCommand::Sweep { configs, out } => {
            let raw = read_json(configs)?;
            let parsed: Vec<RunConfig> = serde_json::from_value(raw)
                .map_err(|e| Error::Input(format!("bad sweep config list: {e}")))?;
            return Ok(ConfigOrSweep::Sweep(parsed, out.clone()));
        }
    }
    Ok(ConfigOrSweep::Single(config))
}

enum ConfigOrSweep {
    Single(RunConfig),
    Sweep(Vec<RunConfig>, Option<PathBuf>),
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with its own formatting
            let _ = e.print();
            return if e.use_stderr() { 3 } else { 0 };
        }
    };
    match build_config(&cli.command) {
        Ok(ConfigOrSweep::Single(config)) => match run_to_file(&config) {
            Ok((report, path, summary)) => {
                println!("{summary} -> {}", path.display());
                report_exit_code(&report)
            }
            Err(err) => {
                eprintln!("error ({}): {err}", config.command);
                err.exit_code()
            }
        },
        Ok(ConfigOrSweep::Sweep(configs, out)) => match super::sweep(&configs, out.as_deref()) {
            Ok(outcome) => {
                println!(
                    "sweep: {} rows, {} failures -> {}",
                    outcome.rows,
                    outcome.failures,
                    outcome.path.display()
                );
                if outcome.failures == 0 {
                    0
                } else {
                    2
                }
            }
            Err(err) => {
                eprintln!("error (sweep): {err}");
                err.exit_code()
            }
        },
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
