//! Argument parsing and exit-code mapping.
//!
//! Exit codes: 0 success, 2 usage or config error, 3 I/O failure,
//! 4 calibration failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use biochar_core::Anchors;
use clap::{Parser, Subcommand};

use crate::commands::{self, CliError, Global, OutputFormat, Preset, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "biochar",
    version,
    about = "Bagasse biochar techno-economic scenarios"
)]
pub struct Cli {
    /// Parameter/scenario config (TOML, or JSON by extension).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Both)]
    pub format: OutputFormat,
    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate scenarios and write ledgers, metrics and the ranking.
    Run {
        /// Label, size (small/medium/large) or kind (A/B); repeatable.
        #[arg(long = "scenario")]
        scenarios: Vec<String>,
    },
    /// One-at-a-time NPV sweep over a parameter grid.
    Sweep {
        /// Numeric parameter field, e.g. credit_price.
        #[arg(long)]
        param: String,
        /// First grid value.
        #[arg(long)]
        from: f64,
        /// Last grid value (inclusive when on a step).
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        /// Label, size or kind; repeatable.
        #[arg(long = "scenario")]
        scenarios: Vec<String>,
    },
    /// Solve location, wage and credit ratios from small-farm anchors.
    Calibrate {
        /// Use $39.5M equipment, $7M 20-year labor, revenue/cost 1.7.
        #[arg(long, conflicts_with_all = ["equipment", "labor", "ratio"])]
        paper_anchors: bool,
        /// Small-farm installed equipment cost, $.
        #[arg(long, requires_all = ["labor", "ratio"])]
        equipment: Option<f64>,
        /// Small-farm labor over the horizon, $.
        #[arg(long, requires_all = ["equipment", "ratio"])]
        labor: Option<f64>,
        /// Small-farm direct-sale revenue/cost ratio.
        #[arg(long, requires_all = ["equipment", "labor"])]
        ratio: Option<f64>,
    },
    /// Rank previously written metrics files.
    Report {
        /// Directory holding metrics-*.json (defaults to --out).
        #[arg(long)]
        from: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let g = Global {
        config: cli.config,
        out: cli.out,
        format: cli.format,
        preset: cli.preset,
    };
    match cli.command {
        Command::Run { scenarios } => commands::run(&g, &scenarios, stdout).map(|_| ()),
        Command::Sweep {
            param,
            from,
            to,
            step,
            scenarios,
        } => {
            let spec = SweepSpec {
                parameter: param,
                from,
                to,
                step,
            };
            commands::sweep(&g, &scenarios, &spec, stdout).map(|_| ())
        }
        Command::Calibrate {
            paper_anchors,
            equipment,
            labor,
            ratio,
        } => {
            let anchors = match (paper_anchors, equipment, labor, ratio) {
                (true, ..) => Anchors::PAPER,
                (false, Some(e), Some(l), Some(r)) => Anchors {
                    small_equipment: e,
                    small_labor_total: l,
                    small_rev_cost_ratio: r,
                },
                _ => {
                    return Err(CliError::Usage(
                        "pass --paper-anchors or all of --equipment, --labor, --ratio".into(),
                    ))
                }
            };
            commands::calibrate_cmd(&g, &anchors, stdout).map(|_| ())
        }
        Command::Report { from } => {
            let from = from.unwrap_or_else(|| g.out.clone());
            commands::report(&g, &from, stdout).map(|_| ())
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
