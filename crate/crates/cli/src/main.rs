// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

//! `spinflop`: geometric phase of a spin qubit in an antiferromagnetic
//! magnon bath.
//!
//! Units: g·μB = k_B = ħ = 1, so fields, energies and temperatures are in
//! Tesla, times in inverse Tesla and angles in radians.

mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "spinflop", version, about = "Geometric phase of a spin qubit coupled to an antiferromagnetic magnon bath")]
#[command(after_help = "Units: Tesla for fields, energies and temperatures; inverse Tesla for times; radians for angles.\n\
Environment: SPINFLOP_THREADS caps worker threads; SOURCE_DATE_EPOCH sets the JSON timestamp.")]
struct Cli {
    /// TOML run configuration; command-line flags override its values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the spin-flop critical field B_c in Tesla
    CriticalField(CriticalArgs),
    /// Geometric phase over one quasiperiod
    Gp(GpArgs),
    /// Parameter sweep or reference-figure grid written to CSV or JSON
    Sweep(SweepArgs),
    /// Power-law fit of the phase near B = 0 or near B_c
    Scaling(ScalingArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Coordination number M [default: 6]
    #[arg(long)]
    pub m: Option<u32>,
    /// Antiferromagnet spin S, a positive half-integer [default: 0.5]
    #[arg(long)]
    pub s: Option<f64>,
    /// Total exchange field M·J in Tesla [default: 40]
    #[arg(long, allow_negative_numbers = true, conflicts_with = "j")]
    pub mj: Option<f64>,
    /// Per-bond exchange J in Tesla, alternative to --mj
    #[arg(long, allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// Anisotropy field B_A in Tesla [default: 0.10]
    #[arg(long, allow_negative_numbers = true)]
    pub ba: Option<f64>,
    /// Applied field B in Tesla [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Bath temperature T in Tesla [default: 0.8]
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Qubit-bath coupling J0 in Tesla [default: 2.5 J]
    #[arg(long, allow_negative_numbers = true)]
    pub j0: Option<f64>,
    /// Initial polar angle theta0 in radians, within [0, pi] [default: 1.3]
    #[arg(long, allow_negative_numbers = true)]
    pub theta0: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct NumericArgs {
    /// Relative tolerance of the thermal magnon integrals [default: 1e-10]
    #[arg(long)]
    pub eta_rel_tol: Option<f64>,
    /// Absolute tolerance of the phase integral in radians [default: 1e-9]
    #[arg(long)]
    pub phase_abs_tol: Option<f64>,
}

#[derive(Debug, Args)]
struct CriticalArgs {
    #[command(flatten)]
    params: ParamArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Oracle,
    Both,
}

#[derive(Debug, Args)]
struct GpArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    numerics: NumericArgs,
    /// Evaluation method
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Move B to just below B_c instead of failing when B >= B_c (Tesla)
    #[arg(long)]
    clamp: bool,
    /// Time steps of the trajectory oracle over one quasiperiod (inverse Tesla grid) [default: 4096]
    #[arg(long)]
    oracle_steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    numerics: NumericArgs,
    /// Reference grid preset (fig1..fig4); fixes all physical parameters
    #[arg(long, conflicts_with_all = ["axis1", "axis2"])]
    figure: Option<String>,
    /// Points per axis for --figure [default: 200 for fig1/fig2, 80 for fig3/fig4]
    #[arg(long)]
    resolution: Option<usize>,
    /// Outer axis as NAME:START:STOP:COUNT[:log]; NAME is field_b, temperature_t,
    /// anisotropy_ba or coupling_j0 (Tesla) or theta0 (radians)
    #[arg(long, value_name = "SPEC")]
    axis1: Option<String>,
    /// Inner axis, same syntax as --axis1
    #[arg(long, value_name = "SPEC")]
    axis2: Option<String>,
    /// Clamp over-critical fields (Tesla) just below B_c instead of marking the cell as an error
    #[arg(long)]
    clamp: bool,
    /// Output data file
    #[arg(short, long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Output format [default: from the file extension, else csv]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also write a gnuplot script next to the data file (CSV only)
    #[arg(long)]
    plot_script: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Regime {
    ZeroField,
    Critical,
}

#[derive(Debug, Args)]
struct ScalingArgs {
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    numerics: NumericArgs,
    /// Fit regime: phase against B near zero, or against B_c - B
    #[arg(long, value_enum)]
    regime: Option<Regime>,
    /// Smallest distance from the pivot in Tesla [default: 1e-3]
    #[arg(long)]
    lo: Option<f64>,
    /// Largest distance from the pivot in Tesla [default: 2e-2 zero-field, 0.1 critical]
    #[arg(long)]
    hi: Option<f64>,
    /// Number of log-spaced fit points [default: 20]
    #[arg(long)]
    points: Option<usize>,
    /// Fit a planted power law instead and check the recovered exponent
    #[arg(long)]
    selftest: bool,
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("SPINFLOP_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::invalid(format!("SPINFLOP_THREADS must be a positive integer, got `{raw}`")))?;
    spinflop_core::parallel::set_thread_cap(threads).map_err(CliError::invalid)
}

fn run(cli: Cli) -> CliResult<String> {
    init_threads()?;
    let config = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::CriticalField(a) => commands::critical_field(&config, &a.params),
        Command::Gp(a) => commands::gp(&config, &a.params, &a.numerics, a.method, a.clamp, a.oracle_steps),
        Command::Sweep(a) => commands::sweep(
            &config,
            commands::SweepRequest {
                params: a.params,
                numerics: a.numerics,
                figure: a.figure,
                resolution: a.resolution,
                axis1: a.axis1,
                axis2: a.axis2,
                clamp: a.clamp,
                output: a.output,
                format: a.format,
                plot_script: a.plot_script,
            },
        ),
        Command::Scaling(a) => commands::scaling(
            &config,
            &a.params,
            &a.numerics,
            commands::ScalingRequest {
                regime: a.regime,
                lo: a.lo,
                hi: a.hi,
                points: a.points,
                selftest: a.selftest,
            },
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(report.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: cannot write to stdout: {e}");
                    ExitCode::from(error::Exit::Io as u8)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
