//! `ferri`: temperature sweeps, threshold solving and formula validation for
//! alternating spin-1/2 / spin-s Heisenberg rings.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ferri_core::sweep::{Method, OutputFormat};
use ferri_core::Boundary;

mod commands;

/// Overrides the default dimension cap when `--dim-cap` is absent.
pub const DIM_CAP_ENV: &str = "FERRI_DIM_CAP";

#[derive(Parser, Debug)]
#[command(name = "ferri", version, about = "Thermal entanglement in small ferrimagnetic Heisenberg rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single (1/2, s) bond: negativity curves and closed-form thresholds.
    TwoSite(SweepArgs),
    /// Exact-diagonalization sweep of a ring (or chain).
    Ring(SweepArgs),
    /// Locate the temperature where pair negativity vanishes.
    Threshold(ThresholdArgs),
    /// Check partial transpose, partial time reversal and the correlator formula agree.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Spin-s values given as 2s, comma separated.
    #[arg(long = "twice-spin", value_delimiter = ',', default_value = "1,2,3")]
    twice_spin: Vec<u32>,

    /// Exchange constant J (energy unit; temperatures are in J/k_B).
    #[arg(long, default_value_t = 1.0)]
    coupling: f64,

    /// Output format.
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: OutputFormat,

    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,

    /// Largest allowed Hilbert-space dimension (default 20000, or $FERRI_DIM_CAP).
    #[arg(long = "dim-cap")]
    dim_cap: Option<usize>,

    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args, Debug, Clone)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,

    /// Number of (1/2, s) unit cells.
    #[arg(long)]
    cells: Option<usize>,

    /// ring, open or single-bond (defaults: single-bond for one cell, ring otherwise).
    #[arg(long, value_parser = parse_boundary)]
    boundary: Option<Boundary>,

    #[arg(long, default_value_t = 0.05)]
    tmin: f64,

    #[arg(long, default_value_t = 3.0)]
    tmax: f64,

    #[arg(long, default_value_t = 60)]
    steps: usize,

    /// analytic, numeric or both.
    #[arg(long, value_parser = parse_method)]
    method: Option<Method>,

    /// Include wall-clock time in JSON metadata (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug, Clone)]
struct ThresholdArgs {
    #[command(flatten)]
    common: Common,

    #[arg(long, default_value_t = 1)]
    cells: usize,

    #[arg(long, value_parser = parse_boundary)]
    boundary: Option<Boundary>,

    /// Width of the final temperature bracket.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,

    /// Starting temperature; the pair must be entangled here.
    #[arg(long, default_value_t = 0.05)]
    tmin: f64,

    /// Give up when the bracket search passes this temperature.
    #[arg(long, default_value_t = 1e6)]
    ceiling: f64,
}

#[derive(Args, Debug, Clone)]
struct ValidateArgs {
    #[arg(long = "twice-spin", value_delimiter = ',', default_value = "1,2,3,4,5,6")]
    twice_spin: Vec<u32>,

    /// Cell counts to check (1 = single bond, otherwise ring).
    #[arg(long = "cells", value_delimiter = ',', default_value = "1,2")]
    cells: Vec<usize>,

    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,2,5")]
    temperatures: Vec<f64>,

    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: OutputFormat,

    #[arg(long)]
    out: Option<std::path::PathBuf>,

    #[arg(long = "dim-cap")]
    dim_cap: Option<usize>,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: ferri_core::Error| e.to_string())
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    s.parse().map_err(|e: ferri_core::Error| e.to_string())
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: ferri_core::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::TwoSite(args) => commands::sweep(args, true),
        Command::Ring(args) => commands::sweep(args, false),
        Command::Threshold(args) => commands::threshold(args),
        Command::Validate(args) => commands::validate(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
