use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context};
use ferri_core::closed_form::threshold_temperature;
use ferri_core::sweep::{emit, format_float, run_sweep, solve_threshold, Method, OutputFormat, SweepConfig, ThresholdQuery};
use ferri_core::validate::run_suite;
use ferri_core::{Boundary, DimCap, Error, TwiceSpin};
use rayon::prelude::*;
use serde_json::json;

use crate::{Common, SweepArgs, ThresholdArgs, ValidateArgs, DIM_CAP_ENV};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_DIM_CAP: u8 = 3;
const EXIT_NO_THRESHOLD: u8 = 4;

pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::DimensionCap { .. }) => EXIT_DIM_CAP,
        Some(Error::ThresholdNotFound { .. } | Error::NotEntangledAtStart(_)) => EXIT_NO_THRESHOLD,
        Some(Error::EigenNonConvergence { .. } | Error::Serialization(_)) => EXIT_FAILURE,
        Some(_) => EXIT_INVALID,
        None => EXIT_FAILURE,
    }
}

fn dim_cap(flag: Option<usize>) -> anyhow::Result<DimCap> {
    if let Some(cap) = flag {
        return Ok(DimCap(cap));
    }
    match std::env::var(DIM_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(DimCap)
            .map_err(|_| Error::InvalidConfig(format!("{DIM_CAP_ENV}={v:?} is not a dimension")).into()),
        Err(_) => Ok(DimCap::default()),
    }
}

fn spins(list: &[u32]) -> anyhow::Result<Vec<TwiceSpin>> {
    Ok(list.iter().map(|&t| TwiceSpin::new(t)).collect::<Result<_, _>>()?)
}

fn default_boundary(cells: usize) -> Boundary {
    if cells == 1 {
        Boundary::SingleBond
    } else {
        Boundary::Ring
    }
}

fn pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().context("starting worker pool")
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).context("writing to stdout")
        }
    }
}

pub fn sweep(args: SweepArgs, two_site: bool) -> anyhow::Result<ExitCode> {
    let Common { twice_spin, coupling, format, out, dim_cap: cap, jobs } = args.common;
    let cells = match (two_site, args.cells) {
        (true, Some(c)) if c != 1 => bail!(Error::InvalidConfig(format!("two-site needs --cells 1, got {c}"))),
        (true, _) => 1,
        (false, c) => c.unwrap_or(2),
    };
    let cfg = SweepConfig {
        twice_s_list: spins(&twice_spin)?,
        cells,
        boundary: args.boundary.unwrap_or_else(|| default_boundary(cells)),
        t_min: args.tmin,
        t_max: args.tmax,
        t_steps: args.steps,
        method: args.method.unwrap_or(if two_site { Method::Analytic } else { Method::Numeric }),
        format,
        coupling,
        dim_cap: dim_cap(cap)?,
    };
    let mut result = pool(jobs)?.install(|| run_sweep(&cfg))?;
    if let Some(t) = result.metadata.wall_time_s {
        eprintln!("swept {} points in {t:.3} s", result.records.len());
    }
    if !args.timing {
        result.metadata.wall_time_s = None;
    }
    if two_site {
        for th in &result.metadata.thresholds {
            eprintln!("2s={} T_th={}", th.twice_s, format_float(th.temperature));
        }
    }
    if let Some(d) = result.metadata.max_abs_diff {
        eprintln!("max |analytic - numeric| negativity: {d:.3e}");
    }
    write_output(out.as_deref(), &emit(&result, format)?)?;
    Ok(ExitCode::SUCCESS)
}

pub fn threshold(args: ThresholdArgs) -> anyhow::Result<ExitCode> {
    let Common { twice_spin, coupling, format, out, dim_cap: cap, jobs } = args.common;
    let cap = dim_cap(cap)?;
    let boundary = args.boundary.unwrap_or_else(|| default_boundary(args.cells));
    let mut list = spins(&twice_spin)?;
    list.sort();
    list.dedup();
    let queries: Vec<ThresholdQuery> = list
        .iter()
        .map(|&s| ThresholdQuery {
            big_spin: s,
            cells: args.cells,
            boundary,
            coupling,
            tolerance: args.tolerance,
            t_start: args.tmin,
            t_ceiling: args.ceiling,
            dim_cap: cap,
        })
        .collect();
    let found = pool(jobs)?.install(|| queries.par_iter().map(solve_threshold).collect::<Result<Vec<_>, _>>())?;

    let closed = |s: TwiceSpin| (args.cells == 1).then(|| coupling * threshold_temperature(s));
    let bytes = match format {
        OutputFormat::Csv => {
            let mut text = String::from("twice_s,cells,threshold,closed_form\n");
            for (s, r) in list.iter().zip(&found) {
                let cf = closed(*s).map(format_float).unwrap_or_default();
                text.push_str(&format!("{},{},{},{}\n", s.twice(), args.cells, format_float(r.temperature), cf));
            }
            text.into_bytes()
        }
        OutputFormat::Json => {
            let rows: Vec<_> = list
                .iter()
                .zip(&found)
                .map(|(s, r)| {
                    json!({
                        "twice_s": s.twice(),
                        "cells": args.cells,
                        "threshold": r.temperature,
                        "bracket": [r.lower, r.upper],
                        "closed_form": closed(*s),
                    })
                })
                .collect();
            let mut text = serde_json::to_string_pretty(&json!({ "boundary": boundary, "coupling": coupling, "thresholds": rows }))?;
            text.push('\n');
            text.into_bytes()
        }
    };
    write_output(out.as_deref(), &bytes)?;
    Ok(ExitCode::SUCCESS)
}

pub fn validate(args: ValidateArgs) -> anyhow::Result<ExitCode> {
    let cap = dim_cap(args.dim_cap)?;
    let cases = run_suite(&args.cells, &args.twice_spin, &args.temperatures, cap)?;
    let failed = cases.iter().filter(|c| !c.passed).count();
    let bytes = match args.format {
        OutputFormat::Csv => {
            let mut text = String::from("sites,twice_s,temperature,partial_transpose,correlator_formula,time_reversal,spread,negative_count,passed\n");
            for c in &cases {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    c.sites,
                    c.twice_s,
                    format_float(c.temperature),
                    format_float(c.partial_transpose),
                    format_float(c.correlator_formula),
                    format_float(c.time_reversal),
                    format_float(c.spread),
                    c.negative_count,
                    c.passed
                ));
            }
            text.into_bytes()
        }
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&json!({ "failed": failed, "cases": cases }))?;
            text.push('\n');
            text.into_bytes()
        }
    };
    write_output(args.out.as_deref(), &bytes)?;
    let spread = cases.iter().map(|c| c.spread).fold(0.0, f64::max);
    eprintln!("{} cases, {} failed, max spread {spread:.3e}", cases.len(), failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILURE) })
}
