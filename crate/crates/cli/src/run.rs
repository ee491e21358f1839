//! Command-line surface and command dispatch.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ineqbounds::baseline::{baseline_gini, BaselineMethod};
use ineqbounds::bounds::BoundsResult;
use ineqbounds::inference::{bootstrap_bounds, BootstrapConfig, BootstrapProblem, CiMethod, Jitter};
use ineqbounds::oracle::{brute_force_bounds, OracleConfig, OracleInput};
use ineqbounds::scenario1::{bounds_1b, gini_bounds_1a, hoover_bounds, quantile_ratio_bounds_1a, Relaxation};
use ineqbounds::scenario2::gini_bounds_2;
use ineqbounds::types::{ConstraintSet, GroupedTable, IndexSpec, IntervalObservation};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::constraints::parse_constraints;
use crate::error::{CliError, Result};
use crate::format::json_f64;
use crate::ingest::{ingest, Dataset, Shape, DEFAULT_TOP_CODE_MULTIPLIER};
use crate::output::{bounds_document, render, OutputFormat, Scenario};

pub const ORACLE_TOLERANCE: f64 = 1e-6;
pub const THREADS_ENV: &str = "INEQBOUNDS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "ineqbounds", version, about = "Sharp bounds for inequality indices from coarsened income data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sharp bounds with extremal completions and diagnostics.
    Bounds(BoundsArgs),
    /// Bounds with bootstrap standard errors and confidence intervals.
    Bootstrap {
        #[command(flatten)]
        bounds: BoundsArgs,
        #[command(flatten)]
        boot: BootArgs,
    },
    /// Imputation point estimates of the Gini for interval micro data.
    Baseline(BaselineArgs),
    /// Compares the bounds against brute-force enumeration.
    OracleCheck {
        #[command(flatten)]
        bounds: BoundsArgs,
        /// Largest number of unknowns the enumeration accepts.
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Interior candidate values per interval.
        #[arg(long, default_value_t = 8)]
        grid_steps: usize,
    },
    /// Bounds for every grouped table (`*.csv`) in a directory.
    Series(SeriesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum IndexKind {
    #[default]
    Gini,
    Qratio,
    Hoover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum RelaxationArg {
    #[default]
    Grid,
    Continuous,
}

#[derive(Debug, Clone, Args)]
pub struct IndexArgs {
    #[arg(long, value_enum, default_value_t)]
    pub index: IndexKind,
    /// Lower quantile level for `qratio`.
    #[arg(long)]
    pub tau1: Option<f64>,
    /// Upper quantile level for `qratio`.
    #[arg(long)]
    pub tau2: Option<f64>,
    /// Admissible lower-endpoint fractions for unconstrained grouped Gini bounds.
    #[arg(long, value_enum, default_value_t)]
    pub relaxation: RelaxationArg,
    /// JSON file of linear side information (grouped data only).
    #[arg(long)]
    pub constraints: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: OutputFormat,
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pub shape: Shape,
    /// Factor applied to the largest finite endpoint to close an open top interval.
    #[arg(long, default_value_t = DEFAULT_TOP_CODE_MULTIPLIER)]
    pub top_code: f64,
    /// Split the bracket containing this value (grouped data).
    #[arg(long, requires = "sub_counts")]
    pub known_median: Option<f64>,
    /// Counts below and above the known median, as `below,above`.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub sub_counts: Option<Vec<u64>>,
    #[command(flatten)]
    pub index: IndexArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BootArgs {
    #[arg(long, default_value_t = 1000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exponent of the perturbation step `n^-alpha`.
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    #[arg(long, value_enum, default_value_t = CiArg::Normal)]
    pub ci: CiArg,
    #[arg(long, value_enum, default_value_t = JitterArg::Off)]
    pub jitter: JitterArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CiArg {
    Normal,
    Percentile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum JitterArg {
    Off,
    Auto,
    Always,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineArg {
    Drop,
    Mean,
    Midpoint,
    Hotdeck,
    HotdeckMulti,
}

#[derive(Debug, Clone, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOP_CODE_MULTIPLIER)]
    pub top_code: f64,
    /// Estimators to run; all of them when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub method: Vec<BaselineArg>,
    #[arg(long, default_value_t = 100)]
    pub draws: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Directory of grouped CSV tables.
    #[arg(long)]
    pub dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TOP_CODE_MULTIPLIER)]
    pub top_code: f64,
    #[command(flatten)]
    pub index: IndexArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl IndexArgs {
    fn spec(&self) -> Result<IndexSpec> {
        let spec = match self.index {
            IndexKind::Gini => IndexSpec::Gini,
            IndexKind::Hoover => IndexSpec::Hoover,
            IndexKind::Qratio => match (self.tau1, self.tau2) {
                (Some(tau1), Some(tau2)) => IndexSpec::QuantileRatio { tau1, tau2 },
                _ => return Err(CliError::Config("qratio needs --tau1 and --tau2".into())),
            },
        };
        spec.validate()?;
        Ok(spec)
    }

    fn relaxation(&self) -> Relaxation {
        match self.relaxation {
            RelaxationArg::Grid => Relaxation::Grid,
            RelaxationArg::Continuous => Relaxation::Continuous,
        }
    }
}

impl BootArgs {
    fn config(&self) -> Result<BootstrapConfig> {
        let config = BootstrapConfig {
            replicates: self.replicates,
            seed: self.seed,
            alpha: self.alpha,
            level: self.level,
            ci_method: match self.ci {
                CiArg::Normal => CiMethod::Normal,
                CiArg::Percentile => CiMethod::Percentile,
            },
            jitter: match self.jitter {
                JitterArg::Off => Jitter::Off,
                JitterArg::Auto => Jitter::Auto,
                JitterArg::Always => Jitter::Always,
            },
        };
        config.validate()?;
        Ok(config)
    }
}

/// Ingested data with its constraints, ready for a bounds routine.
pub enum Problem {
    Table { table: GroupedTable, constraints: ConstraintSet },
    Micro(Vec<IntervalObservation>),
}

impl Problem {
    pub fn scenario(&self) -> Scenario {
        match self {
            Problem::Table { constraints, .. } if constraints.is_empty() => Scenario::OneA,
            Problem::Table { .. } => Scenario::OneB,
            Problem::Micro(_) => Scenario::Two,
        }
    }

    pub fn oracle_input(&self) -> OracleInput<'_> {
        match self {
            Problem::Table { table, constraints } => OracleInput::Table { table, constraints },
            Problem::Micro(data) => OracleInput::Micro(data),
        }
    }
}

fn load_problem(args: &BoundsArgs) -> Result<Problem> {
    let data = ingest(&args.input, args.shape, args.top_code)?;
    let data = match (data, args.known_median) {
        (d, None) => {
            if args.sub_counts.is_some() {
                return Err(CliError::Config("--sub-counts needs --known-median".into()));
            }
            d
        }
        (Dataset::Grouped(t), Some(m)) => {
            let sub = args.sub_counts.as_deref().unwrap_or_default();
            let [below, above] = sub else {
                return Err(CliError::Config("--known-median needs --sub-counts below,above".into()));
            };
            Dataset::Grouped(t.split_at(m, *below, *above)?)
        }
        (Dataset::Intervals(_), Some(_)) => {
            return Err(CliError::Config("--known-median applies to grouped tables only".into()))
        }
    };
    build_problem(data, args.index.constraints.as_deref())
}

fn build_problem(data: Dataset, constraints: Option<&Path>) -> Result<Problem> {
    match data {
        Dataset::Grouped(table) => {
            let constraints = match constraints {
                Some(p) => parse_constraints(p, &table)?,
                None => ConstraintSet::new(),
            };
            Ok(Problem::Table { table, constraints })
        }
        Dataset::Intervals(v) => {
            if constraints.is_some() {
                return Err(CliError::Config("constraints apply to grouped tables only".into()));
            }
            Ok(Problem::Micro(v))
        }
    }
}

pub fn compute_bounds(problem: &Problem, index: IndexSpec, relaxation: Relaxation) -> Result<BoundsResult> {
    let r = match problem {
        Problem::Table { table, constraints } if constraints.is_empty() => match index {
            IndexSpec::Gini => gini_bounds_1a(table, relaxation)?,
            IndexSpec::QuantileRatio { tau1, tau2 } => quantile_ratio_bounds_1a(table, tau1, tau2)?,
            IndexSpec::Hoover => hoover_bounds(table, constraints)?,
        },
        Problem::Table { table, constraints } => bounds_1b(index, table, constraints)?,
        Problem::Micro(data) => match index {
            IndexSpec::Gini => gini_bounds_2(data)?,
            _ => return Err(CliError::Config(format!("interval micro data supports the Gini only, not {}", index.name()))),
        },
    };
    Ok(r)
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    let io = |p: &str, source| CliError::Io { path: p.to_string(), source };
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io(&p.display().to_string(), e)),
        None => out.write_all(text.as_bytes()).map_err(|e| io("<stdout>", e)),
    }
}

/// Caps the global rayon pool from `INEQBOUNDS_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // A pool that already exists (tests calling run twice) keeps its size.
    if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
        log::debug!("rayon pool already initialised");
    }
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Bounds(args) => {
            let problem = load_problem(args)?;
            let r = compute_bounds(&problem, args.index.spec()?, args.index.relaxation())?;
            let doc = bounds_document(problem.scenario(), &r, None);
            emit(out, args.out.output.as_deref(), &render(&[doc], args.out.format)?)
        }
        Command::Bootstrap { bounds: args, boot } => {
            let problem = load_problem(args)?;
            let index = args.index.spec()?;
            let relaxation = args.index.relaxation();
            let r = compute_bounds(&problem, index, relaxation)?;
            let config = boot.config()?;
            let bp = match &problem {
                Problem::Table { table, constraints } => {
                    BootstrapProblem::Table { table, constraints, index, relaxation, resampler: None }
                }
                Problem::Micro(data) => BootstrapProblem::Micro { data },
            };
            let b = bootstrap_bounds(bp, &config)?;
            let doc = bounds_document(problem.scenario(), &r, Some((&config, &b)));
            emit(out, args.out.output.as_deref(), &render(&[doc], args.out.format)?)
        }
        Command::Baseline(args) => {
            let Dataset::Intervals(data) = ingest(&args.input, Shape::Intervals, args.top_code)? else {
                unreachable!("interval shape requested")
            };
            let docs = baselines(&data, args)?;
            emit(out, args.out.output.as_deref(), &render(&docs, args.out.format)?)
        }
        Command::OracleCheck { bounds: args, max_n, grid_steps } => {
            let problem = load_problem(args)?;
            let index = args.index.spec()?;
            let module = compute_bounds(&problem, index, Relaxation::Grid)?;
            let config = OracleConfig { max_n: *max_n, interior_grid_steps: *grid_steps, index };
            let oracle = brute_force_bounds(problem.oracle_input(), &config)?;
            let gap = endpoint_gap(module.lower, oracle.lower).max(endpoint_gap(module.upper, oracle.upper));
            let doc = json!({
                "index": index.name(),
                "scenario": problem.scenario().label(),
                "module": {"lower": json_f64(module.lower), "upper": json_f64(module.upper)},
                "oracle": {"lower": json_f64(oracle.lower), "upper": json_f64(oracle.upper)},
                "gap": json_f64(gap),
                "tolerance": json_f64(ORACLE_TOLERANCE),
                "agree": gap <= ORACLE_TOLERANCE,
            });
            emit(out, args.out.output.as_deref(), &render(&[doc], args.out.format)?)?;
            if gap <= ORACLE_TOLERANCE {
                Ok(())
            } else {
                Err(CliError::OracleDisagreement { gap })
            }
        }
        Command::Series(args) => {
            let docs = series(args)?;
            emit(out, args.output.as_deref(), &render(&docs, args.format)?)
        }
    }
}

fn endpoint_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

fn baselines(data: &[IntervalObservation], args: &BaselineArgs) -> Result<Vec<Value>> {
    let chosen = if args.method.is_empty() {
        vec![BaselineArg::Drop, BaselineArg::Mean, BaselineArg::Midpoint, BaselineArg::Hotdeck, BaselineArg::HotdeckMulti]
    } else {
        args.method.clone()
    };
    chosen
        .into_iter()
        .map(|m| {
            let method = match m {
                BaselineArg::Drop => BaselineMethod::Drop,
                BaselineArg::Mean => BaselineMethod::MeanImpute,
                BaselineArg::Midpoint => BaselineMethod::MidpointImpute,
                BaselineArg::Hotdeck => BaselineMethod::HotDeck { seed: args.seed },
                BaselineArg::HotdeckMulti => BaselineMethod::HotDeckMulti { draws: args.draws, seed: args.seed },
            };
            let r = baseline_gini(data, method)?;
            Ok(json!({
                "method": method.name(),
                "estimate": json_f64(r.estimate),
                "points": r.points,
                "intervals": r.intervals,
                "fallbacks": r.fallbacks,
            }))
        })
        .collect()
}

fn series(args: &SeriesArgs) -> Result<Vec<Value>> {
    let io = |source| CliError::Io { path: args.dir.display().to_string(), source };
    let mut files: Vec<PathBuf> = std::fs::read_dir(&args.dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()).map_err(io))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CliError::Config(format!("no .csv files in {}", args.dir.display())));
    }
    let index = args.index.spec()?;
    let relaxation = args.index.relaxation();
    files
        .par_iter()
        .map(|path| {
            let data = ingest(path, Shape::Grouped, args.top_code)?;
            let problem = build_problem(data, args.index.constraints.as_deref())?;
            let r = compute_bounds(&problem, index, relaxation)?;
            let mut doc = Map::new();
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            doc.insert("file".into(), json!(name));
            if let Value::Object(body) = bounds_document(problem.scenario(), &r, None) {
                doc.extend(body);
            }
            Ok(Value::Object(doc))
        })
        .collect()
}
