//! The `dqd` command line: `simulate`, `steady`, `sweep` and `validate`.
//!
//! Exit codes: 0 ok, 1 validation failure, 2 bad configuration, 3 integrator failure,
//! 4 degenerate steady state.

mod commands;
mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::error::Error;
use crate::validation::{run_suite, Fault, SuiteOptions};

pub use commands::{
    fmt_f64, sample_rows, simulate, steady, sweep, trend_lines, write_simulation, write_steady,
    write_sweep, write_validation, Method, SampleRow, SteadyOutcome, SteadyRow, SweepOutcome,
    SweepRow, SweepTrends, CSV_HEADER,
};
pub use config::{ConfigFile, InitialKind, InitialState, RunConfig, DEFAULT_DT, DEFAULT_T_END};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INTEGRATOR: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(Error::StepUnderflow { .. }) => EXIT_INTEGRATOR,
            CliError::Model(Error::DegenerateNullSpace(_) | Error::NonPhysicalFixedPoint(_)) => {
                EXIT_DEGENERATE
            }
            _ => EXIT_CONFIG,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "dqd",
    version,
    about = "Lindblad dynamics of a laser-driven double quantum dot"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Propagate the master equation and emit the full density matrix per sample
    Simulate(SimulateArgs),
    /// Stationary populations from the closed forms and/or the Liouvillian null space
    Steady(SteadyArgs),
    /// Stationary values, oscillation counts and relaxation times over a list of l/p ratios
    Sweep(SweepArgs),
    /// Run the invariant and cross-check suite
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Emission rate 1 → 0
    #[arg(long)]
    pub l: Option<f64>,
    /// Absorption rate 0 → 1
    #[arg(long)]
    pub m: Option<f64>,
    /// Tunneling rate 1 ↔ 2
    #[arg(long)]
    pub n: Option<f64>,
    /// Drive strength Ω/2
    #[arg(long)]
    pub p: Option<f64>,
    /// Drive given as l/p
    #[arg(long)]
    pub ratio: Option<f64>,
    /// Use the driven model (pass `--driven false` to force it off)
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub driven: Option<bool>,
    /// fig2-4, fig5-7, fig8-9, fig10-11 or fig12-13
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON run manifest; flags override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ModelArgs {
    fn as_config(&self) -> ConfigFile {
        ConfigFile {
            preset: self.preset.clone(),
            l: self.l,
            m: self.m,
            n: self.n,
            p: self.p,
            ratio: self.ratio,
            driven: self.driven,
            ..Default::default()
        }
    }

    fn file(&self) -> Result<ConfigFile, CliError> {
        match &self.config {
            Some(path) => ConfigFile::load(path),
            None => Ok(ConfigFile::default()),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output path, or `-` for stdout
    #[arg(long, default_value = "-")]
    pub output: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Sampling interval of the output
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, value_enum)]
    pub initial: Option<InitialKind>,
    /// Populations of a custom diagonal initial state, e.g. `0.5,0.25,0.25`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub diag: Option<Vec<f64>>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SteadyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// l/p values [default: 2,1,0.5,0.1]
    #[arg(long, value_delimiter = ',')]
    pub ratios: Option<Vec<f64>>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    DissipatorSign,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

fn with_output<F>(target: &str, stdout: &mut dyn Write, f: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    if target == "-" {
        f(stdout)
    } else {
        let mut w = BufWriter::new(File::create(target)?);
        f(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let flags = ConfigFile {
                t_end: args.t_end,
                dt: args.dt,
                initial: args.initial,
                diag: args.diag.clone(),
                ..args.model.as_config()
            };
            let rc = RunConfig::resolve(&args.model.file()?.overlay(flags))?;
            let traj = simulate(&rc)?;
            with_output(&args.output.output, out, |w| {
                write_simulation(&rc, &traj, args.output.format, w)
            })?;
            Ok(EXIT_OK)
        }
        Command::Steady(args) => {
            let rc = RunConfig::resolve(&args.model.file()?.overlay(args.model.as_config()))?;
            let outcome = steady(&rc.rates, rc.driven, args.method)?;
            for row in &outcome.rows {
                for flag in &row.flags {
                    writeln!(err, "{}: {flag}", row.method)?;
                }
            }
            if let Some(d) = outcome.printed_vs_nullspace {
                writeln!(err, "max |analytic-printed - nullspace| = {}", fmt_f64(d))?;
            }
            with_output(&args.output.output, out, |w| {
                write_steady(&outcome, args.output.format, w)
            })?;
            Ok(EXIT_OK)
        }
        Command::Sweep(args) => {
            let file = args.model.file()?;
            let ratios = args
                .ratios
                .clone()
                .or(file.ratios.clone())
                .unwrap_or_else(|| crate::model::FIGURE_RATIOS.to_vec());
            let flags = ConfigFile {
                t_end: args.t_end,
                dt: args.dt,
                ..args.model.as_config()
            };
            let rc = RunConfig::resolve(&file.overlay(flags))?;
            let outcome = sweep(&rc.rates, &ratios, rc.t_end, rc.output_dt)?;
            for line in trend_lines(&outcome.trends) {
                writeln!(err, "{line}")?;
            }
            with_output(&args.output.output, out, |w| {
                write_sweep(&outcome, args.output.format, w)
            })?;
            Ok(EXIT_OK)
        }
        Command::Validate(args) => {
            let opts = SuiteOptions {
                fault: args.inject_fault.map(|f| match f {
                    FaultArg::DissipatorSign => Fault::DissipatorSignFlip,
                }),
            };
            let report = run_suite(&opts);
            with_output(&args.output.output, out, |w| {
                write_validation(&report, args.output.format, w)
            })?;
            let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
            writeln!(
                err,
                "{} checks, {} passed, {} failed{}",
                report.checks.len(),
                report.checks.len() - failed.len(),
                failed.len(),
                if failed.is_empty() {
                    String::new()
                } else {
                    format!(": {}", failed.join(", "))
                }
            )?;
            Ok(if failed.is_empty() {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            })
        }
    }
}

/// Parses `args` (including the program name) and runs the command, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{e}");
            return EXIT_CONFIG;
        }
        Err(e) => {
            // --help / --version
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
