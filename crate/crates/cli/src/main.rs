//! `mlcover`: generate, solve, bound, reduce, verify and benchmark
//! multi-layer covering instances.

mod bench;
mod commands;
mod io;
mod reduce;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "mlcover", version, about = "Multi-layer covering solvers and oracles")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest instance size handed to the exact oracle.
    #[arg(long, default_value_t = 10)]
    budget_n: usize,
    /// Largest layer count handed to the exact oracle.
    #[arg(long, default_value_t = 4)]
    budget_h: usize,
    /// Accepted for compatibility; all comparisons are exact.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Record wall-clock times (makes output non-reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write a generated instance.
    Gen(commands::GenArgs),
    /// Run one algorithm and write the solution with its report.
    Solve(commands::SolveArgs),
    /// Write the optimum of the instance's LP relaxation.
    LpBound(commands::InArgs),
    /// Encode a source problem as a multi-layer instance.
    Reduce(reduce::ReduceArgs),
    /// Recheck a solution: feasibility, cost and envelope.
    Verify(commands::VerifyArgs),
    /// Run every applicable algorithm over a suite directory.
    Bench(bench::BenchArgs),
}

#[derive(Debug)]
pub enum Failure {
    /// Ran fine but an envelope was violated.
    Envelope(String),
    Error(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.cmd {
        Cmd::Gen(a) => commands::gen(a),
        Cmd::Solve(a) => commands::solve(a),
        Cmd::LpBound(a) => commands::lp_bound(a),
        Cmd::Reduce(a) => reduce::run(a),
        Cmd::Verify(a) => commands::verify(a),
        Cmd::Bench(a) => bench::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Envelope(msg)) => {
            eprintln!("envelope violated: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
