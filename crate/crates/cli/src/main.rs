use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use egf_lab::sweep::SweepAxis;
use egf_lab::{load, resolve_out_dir, CliError, Scenario};
use serde_json::Value;

#[derive(Parser)]
#[command(
    name = "egf-lab",
    version,
    about = "Extrinsic geometric flow scenarios: run, sweep, classify"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario config.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Suppress the summary on stdout.
        #[arg(long)]
        quiet: bool,
    },
    /// Refinement or stability sweep of a flow scenario.
    Sweep {
        config: PathBuf,
        #[arg(long, value_enum)]
        axis: SweepAxis,
        #[arg(long, default_value_t = 4)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Classify umbilical-like Ricci soliton spectra for (n, τ₁, r).
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        tau1: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
    },
    /// Solve a cohomological equation config.
    Cohomology {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
}

fn print_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    // A closed stdout (e.g. piped into `head`) is not an error of the run.
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, out, quiet } => {
            let cfg = load(&config)?;
            let dir = resolve_out_dir(out.as_deref(), &cfg);
            let res = egf_lab::run_to_dir(&cfg, &dir)?;
            if !quiet {
                print_json(&res.outcome.summary);
            }
        }
        Command::Sweep {
            config,
            axis,
            points,
            out,
            quiet,
        } => {
            let cfg = load(&config)?;
            let dir = resolve_out_dir(out.as_deref(), &cfg);
            let (res, _) = egf_lab::sweep_to_dir(&cfg, axis, points, &dir)?;
            if !quiet {
                print_json(&res.summary());
            }
        }
        Command::Classify { n, tau1, r } => {
            if n < 3 {
                return Err(CliError::validation("n", "must be at least 3"));
            }
            if !tau1.is_finite() || !r.is_finite() {
                return Err(CliError::validation("tau1", "tau1 and r must be finite"));
            }
            let (v, _) = egf_lab::scenarios::classify_json(n, tau1, r)?;
            print_json(&v);
        }
        Command::Cohomology { config, out, quiet } => {
            let cfg = load(&config)?;
            if cfg.scenario != Scenario::Cohomology {
                return Err(CliError::validation("scenario", "expected \"cohomology\""));
            }
            let dir = resolve_out_dir(out.as_deref(), &cfg);
            let res = egf_lab::run_to_dir(&cfg, &dir)?;
            if !quiet {
                print_json(&res.outcome.summary);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("egf-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
