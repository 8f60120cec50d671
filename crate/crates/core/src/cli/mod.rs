//! Command-line front end: `quotient`, `stats`, `sample` and `check`.
//!
//! Exit codes are 0 on success, 1 when a check fails, 2 on configuration
//! errors and 3 when an enumeration bound is exceeded.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::combinatorics::Bounds;
use crate::error::Error;

pub use commands::{check_report, quotient_report, sample_report, stats_report, Provenance, ResultRecord};
pub use config::{config_schema, Experiment, ExperimentConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "popsrep", version, about = "Stochastic population representations over finite state spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Seed for every random draw; overrides the config.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Number of draws for `sample`.
    #[arg(long, global = true, value_name = "K", default_value_t = 1000)]
    pub count: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Record wall-clock time per query (output is then not reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    #[arg(long, global = true, env = "POPSREP_MAX_GROUND_SET", value_name = "N")]
    pub max_ground_set: Option<usize>,
    #[arg(long, global = true, env = "POPSREP_MAX_GROUP_ORDER", value_name = "N")]
    pub max_group_order: Option<u64>,
    #[arg(long, global = true, env = "POPSREP_MAX_FUNCTION_SPACE", value_name = "N")]
    pub max_function_space: Option<u64>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Quotient of assignment functions by rho or rho*.
    Quotient,
    /// Evaluate the statistic queries of the config.
    Stats,
    /// Draw realisations of the representation as JSON lines.
    Sample,
    /// Run a verification suite, or all of them.
    Check {
        #[arg(default_value = "all")]
        suite: String,
    },
}

impl Cli {
    /// `base` with any bound given by flag or environment replaced.
    pub fn bounds(&self, base: Bounds) -> Bounds {
        let d = base;
        Bounds {
            max_ground_set: self.max_ground_set.unwrap_or(d.max_ground_set),
            max_group_order: self.max_group_order.unwrap_or(d.max_group_order),
            max_function_space: self.max_function_space.unwrap_or(d.max_function_space),
        }
    }
}

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeLimit { .. } => EXIT_BOUND,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn load(cli: &Cli) -> Result<(ExperimentConfig, Experiment), Failure> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| Failure::from(Error::Config("--config is required".into())))?;
    let cfg = ExperimentConfig::load(path)?;
    let base = cfg.bounds.resolve(Bounds::default());
    let exp = Experiment::build(&cfg, cli.bounds(base), cli.seed)?;
    Ok((cfg, exp))
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure {
        code: EXIT_CONFIG,
        message: format!("cannot write output: {e}"),
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io),
    }
}

/// Runs a parsed command and returns its output text and exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    match &cli.command {
        Command::Quotient => {
            let (cfg, exp) = load(cli)?;
            Ok((quotient_report(&exp, &cfg.quotient.unwrap_or_default(), cli.format)?, EXIT_OK))
        }
        Command::Stats => {
            let (cfg, exp) = load(cli)?;
            Ok((stats_report(&exp, &cfg.queries, cli.format, cli.timings)?, EXIT_OK))
        }
        Command::Sample => {
            let (_, exp) = load(cli)?;
            Ok((sample_report(&exp, cli.count, cli.format)?, EXIT_OK))
        }
        Command::Check { suite } => {
            let (bounds, seed) = match &cli.config {
                Some(_) => {
                    let (_, exp) = load(cli)?;
                    (exp.bounds, exp.seed)
                }
                None => (cli.bounds(Bounds::default()), cli.seed.unwrap_or(0)),
            };
            let (text, passed) = check_report(suite, seed, &bounds, cli.format)?;
            Ok((text, if passed { EXIT_OK } else { EXIT_CHECK_FAILED }))
        }
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = execute(&cli).and_then(|(text, code)| write_output(cli.out.as_deref(), &text).map(|()| code));
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
