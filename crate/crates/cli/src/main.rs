//! `hamcut` command-line tool.
//!
//! Exit codes: 0 on success (a certified solution, a satisfied verification),
//! 2 when the mathematics says no (infeasible, best effort only, unsatisfied),
//! 1 on input errors.

mod format;
mod plot;
mod solve;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hamcut::generate::{generate, GenConfig, Kind as GenKind};
use hamcut::{euler_power_reduce, euler_vanishes, fw_applicable, invert_total_class, TotalSWClass};

use crate::format::InstanceFile;

#[derive(Parser)]
#[command(
    name = "hamcut",
    version,
    about = "Hyperplane ham sandwich solver and verifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Hyperplane,
    Classical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Exact2d,
    Sweep,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArithArg {
    /// Rational arithmetic, certificates are exact when eps is 0.
    Exact,
    /// Double precision with a fenced oracle.
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Hyperplane,
    Points,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write a solution file.
    Solve(solve::SolveArgs),
    /// Check a solution against an instance by direct mass counting.
    Verify(verify::VerifyArgs),
    /// Write a seeded random instance.
    Gen {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        families: usize,
        #[arg(long = "per-family", default_value_t = 3)]
        per_family: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "coord-range", default_value_t = 10)]
        coord_range: i64,
        #[arg(long, value_enum, default_value_t = KindArg::Hyperplane)]
        kind: KindArg,
        /// Output path; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Euler class and applicability report over F2[a]/(a^(N+1)).
    Obstruction {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        /// Truncation degree N.
        #[arg(long, default_value_t = 0)]
        trunc: usize,
        /// Graded total class w(E), e.g. "1,a,0".
        #[arg(long = "wE", default_value = "1")]
        w_e: String,
    },
    /// Draw a planar instance and one of its solutions as SVG.
    Plot(plot::PlotArgs),
}

/// Outcome of a command that ran to completion.
pub enum Verdict {
    Ok,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Verdict> {
    match command {
        Command::Solve(args) => solve::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Plot(args) => plot::run(&args),
        Command::Gen {
            dim,
            families,
            per_family,
            seed,
            coord_range,
            kind,
            output,
        } => {
            if dim == 0 || families == 0 || per_family == 0 {
                bail!("--dim, --families and --per-family must be at least 1");
            }
            let raw = generate(&GenConfig {
                dim,
                families,
                per_family,
                seed,
                coord_range,
                kind: match kind {
                    KindArg::Hyperplane => GenKind::Hyperplane,
                    KindArg::Points => GenKind::Points,
                },
            });
            emit(output.as_deref(), &InstanceFile::from_raw(&raw).to_json())?;
            Ok(Verdict::Ok)
        }
        Command::Obstruction { m, l, trunc, w_e } => {
            print!("{}", obstruction_report(m, l, trunc, &w_e)?);
            Ok(Verdict::Ok)
        }
    }
}

fn obstruction_report(m: usize, l: usize, trunc: usize, w_e: &str) -> Result<String> {
    if m > 64 || l > 64 {
        bail!("--m and --l are limited to 64");
    }
    let w = TotalSWClass::parse_graded(w_e, trunc).context("cannot parse --wE")?;
    if let Some(i) = (m + 2..=w.rank_bound()).find(|&i| !w.w(i).is_zero()) {
        bail!("w_{i}(E) is nonzero but the bundle has rank {}", m + 1);
    }
    let u = invert_total_class(&w, trunc)?;
    let power = euler_power_reduce(&w, m, l, trunc)?;
    Ok(format!(
        "w(E) = {w}\nw(-E) = {u}\ne(H)^{l} = {power}\neuler_vanishes: {}\nfw_applicable: {}\n",
        euler_vanishes(&w, m, l, trunc)?,
        fw_applicable(&w, m, l, trunc)?,
    ))
}

/// Writes to `path`, or to standard output when it is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
