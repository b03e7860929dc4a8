//! `tsup`: batch front end for support matroids, tropical solutions and the
//! countable-field counterexample.
//!
//! Exit codes: 0 success, 1 malformed input, 2 violated precondition,
//! 3 unavailable strategy, 4 a FAIL verdict in the report.

mod commands;
mod instance;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use commands::{Command, Options, StrategyArg};
use instance::InstanceFile;
use tropical_supports::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{at}: {source}")]
    Core { at: String, source: Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Malformed(_) | CliError::Io { .. } => 1,
            CliError::Core { source, .. } => match source {
                Error::StrategyUnavailable(_) | Error::BudgetExceeded { .. } | Error::GroundTooLarge { .. } | Error::UnsupportedArity(_) => 3,
                Error::NotPrime(_)
                | Error::DivisionByZero
                | Error::MixedFields
                | Error::DimensionMismatch { .. }
                | Error::WindowMismatch(_)
                | Error::ArityMismatch { .. }
                | Error::InvalidInput(_) => 1,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tsup", version, about = "Support matroids of truncated power series and their tropicalizations")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// JSON instance file; optional for `counterexample`.
    instance: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Truncation order (`ode-basis` default 20, `counterexample` default 40).
    #[arg(long, visible_alias = "N")]
    order: Option<u32>,
    #[arg(long, default_value_t = 5)]
    derivative_bound: u32,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Maximum number of combinations a brute-force enumeration may visit.
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `b0,c0`: build the counterexample from the seeded recurrences.
    #[arg(long)]
    recurrence_seeds: Option<String>,
    /// Add wall-clock timing to the report (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

fn parse_seeds(s: &str) -> Result<(BigRational, BigRational), CliError> {
    let bad = || CliError::Malformed(format!("--recurrence-seeds: expected b0,c0, got {s:?}"));
    let (b, c) = s.split_once(',').ok_or_else(bad)?;
    Ok((b.trim().parse().map_err(|_| bad())?, c.trim().parse().map_err(|_| bad())?))
}

fn execute(args: &Args) -> Result<(String, bool), CliError> {
    let start = Instant::now();
    let inst = match &args.instance {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            Some(InstanceFile::parse(&text)?)
        }
        None => None,
    };
    let opts = Options {
        order: args.order,
        derivative_bound: args.derivative_bound,
        samples: args.samples,
        strategy: args.strategy,
        budget: args.budget,
        seed: args.seed,
        recurrence_seeds: args.recurrence_seeds.as_deref().map(parse_seeds).transpose()?,
    };
    let outcome = commands::run(args.command, inst.as_ref(), &opts)?;
    let passed = outcome.checks.passed();
    let checks: Vec<Value> = outcome
        .checks
        .checks
        .iter()
        .map(|c| match &c.verdict {
            tropical_supports::Verdict::Pass => json!({ "name": c.name, "verdict": "PASS" }),
            tropical_supports::Verdict::Fail(why) => json!({ "name": c.name, "verdict": "FAIL", "detail": why }),
        })
        .collect();
    let command = args.command.to_possible_value().map(|v| v.get_name().to_string());
    let mut report = json!({
        "command": command,
        "instance": inst,
        "options": opts.echo(),
        "results": outcome.results,
        "checks": checks,
        "status": if passed { "PASS" } else { "FAIL" },
    });
    if args.timing {
        report["timing_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    Ok((text, passed))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok((text, passed)) => {
            let written = match &args.out {
                Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Io { path: path.clone(), source }),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if passed { 0 } else { 4 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
