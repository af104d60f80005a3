//! `splitkdv`: run splitting experiments on the KdV equation and the logistic ODE.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use splitkdv_core::selftest::SelftestOptions;

use commands::Failure;
use config::{parse_list, parse_scheme, OracleKind, Problem, RunConfig};

#[derive(Parser)]
#[command(
    name = "splitkdv",
    version,
    about = "Godunov and Strang splitting experiments",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-step CSV of the logistic ODE under each scheme, with the exact solution.
    #[command(allow_negative_numbers = true)]
    Logistic(Flags),
    /// Refinement study on KdV: error against an oracle over a ladder of time steps.
    #[command(allow_negative_numbers = true)]
    KdvConverge(Flags),
    /// Single KdV splitting run with field snapshots and conserved quantities.
    #[command(allow_negative_numbers = true)]
    KdvSolve(Flags),
    /// Built-in checks; prints a pass/fail table.
    Selftest {
        #[arg(long, hide = true)]
        flip_airy_sign: bool,
    },
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// `key = value` file; flags given on the command line take precedence.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// logistic, kdv-soliton or kdv-custom
    #[arg(long)]
    problem: Option<Problem>,
    /// godunov, godunov-reversed or strang
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<splitkdv_core::splitting::SplitScheme>,
    #[arg(long)]
    dt: Option<f64>,
    /// Comma-separated, strictly decreasing time steps.
    #[arg(long)]
    ladder: Option<String>,
    /// Final time.
    #[arg(long = "T", value_name = "T")]
    final_time: Option<f64>,
    /// Domain length.
    #[arg(long = "L", value_name = "L")]
    length: Option<f64>,
    /// Grid points (even).
    #[arg(long = "N", value_name = "N")]
    n: Option<usize>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    u0: Option<f64>,
    /// Comma-separated Sobolev indices for error reporting.
    #[arg(long)]
    norm: Option<String>,
    /// Output file (directory for kdv-solve).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fail when a fitted slope leaves the scheme's acceptance band.
    #[arg(long)]
    strict: bool,
    /// Worker threads for ladder runs.
    #[arg(long)]
    jobs: Option<usize>,
    /// Initial data for kdv-custom, CSV with columns x,u.
    #[arg(long, value_name = "CSV")]
    init: Option<PathBuf>,
    /// Steps between field snapshots.
    #[arg(long, value_name = "K")]
    snapshot_every: Option<usize>,
    /// reference or soliton
    #[arg(long)]
    oracle: Option<OracleKind>,
}

impl Flags {
    fn resolve(self) -> Result<RunConfig, Failure> {
        let flags = RunConfig {
            problem: self.problem,
            scheme: self.scheme,
            dt: self.dt,
            ladder: self
                .ladder
                .as_deref()
                .map(parse_list)
                .transpose()
                .map_err(|e| Failure::config(format!("--ladder: {e}")))?,
            final_time: self.final_time,
            length: self.length,
            n: self.n,
            kappa: self.kappa,
            u0: self.u0,
            norms: self
                .norm
                .as_deref()
                .map(parse_list)
                .transpose()
                .map_err(|e| Failure::config(format!("--norm: {e}")))?,
            out: self.out,
            strict: self.strict.then_some(true),
            jobs: self.jobs,
            init: self.init,
            snapshot_every: self.snapshot_every,
            oracle: self.oracle,
        };
        let file = match &self.config {
            Some(path) => RunConfig::load(path).map_err(Failure::config)?,
            None => RunConfig::default(),
        };
        Ok(file.overlay(flags))
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Logistic(flags) => commands::cmd_logistic(&flags.resolve()?),
        Command::KdvConverge(flags) => commands::cmd_kdv_converge(&flags.resolve()?),
        Command::KdvSolve(flags) => commands::cmd_kdv_solve(&flags.resolve()?),
        Command::Selftest { flip_airy_sign } => {
            commands::cmd_selftest(SelftestOptions { flip_airy_sign })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
