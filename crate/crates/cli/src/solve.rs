use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use hamcut::{
    solve_classical_exact_2d, solve_exact_2d, solve_sweep, solve_sweep_all, Rational, Scalar,
    Solution, SweepConfig, SweepOutcome,
};

use crate::format::{BestEffort, InstanceFile, Kind, Num, SolutionEntry, SolutionFile, Status};
use crate::{emit, ArithArg, MethodArg, ModeArg, Verdict};

#[derive(Args)]
pub struct SolveArgs {
    /// Instance file.
    pub input: PathBuf,
    /// Solution file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Must agree with the kind of the instance file when given.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Arithmetic for the sweep; exact2d always runs on rationals.
    #[arg(long, value_enum)]
    pub arith: Option<ArithArg>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-7)]
    pub eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of quasi-random sweep samples.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    /// Report every distinct certified sweep solution instead of the first.
    #[arg(long)]
    pub all: bool,
}

pub fn run(args: &SolveArgs) -> Result<Verdict> {
    let file = InstanceFile::read(&args.input)?;
    if let Some(mode) = args.mode {
        let wanted = match mode {
            ModeArg::Hyperplane => Kind::Hyperplane,
            ModeArg::Classical => Kind::Points,
        };
        if wanted != file.kind {
            bail!(
                "--mode {} does not match an instance of kind {:?}",
                wanted.mode_name(),
                file.kind
            );
        }
    }
    let method = match args.method {
        MethodArg::Auto if file.dimension == 2 && args.arith != Some(ArithArg::Float) => {
            MethodArg::Exact2d
        }
        MethodArg::Auto => MethodArg::Sweep,
        m => m,
    };

    let out = match method {
        MethodArg::Exact2d => {
            if file.dimension != 2 {
                bail!(
                    "exact2d requires dimension 2, instance has {}",
                    file.dimension
                );
            }
            if args.arith == Some(ArithArg::Float) {
                bail!("exact2d requires rational arithmetic");
            }
            let inst = file.instance::<Rational>()?;
            let sols = match file.kind {
                Kind::Hyperplane => solve_exact_2d(&inst)?,
                Kind::Points => solve_classical_exact_2d(&inst)?,
            };
            listing(&file, &sols, None)
        }
        _ => {
            let cfg = SweepConfig {
                grid_points: args.grid,
                seed: args.seed,
                tol: args.tol,
                eps: args.eps,
                ..SweepConfig::default()
            };
            match args.arith.unwrap_or(ArithArg::Float) {
                ArithArg::Float => sweep::<f64>(&file, &cfg, args.all)?,
                ArithArg::Exact => sweep::<Rational>(&file, &cfg, args.all)?,
            }
        }
    };

    emit(args.output.as_deref(), &out.to_json())?;
    let verdict = match out.status {
        Status::Certified => {
            eprintln!("{} certified solution(s)", out.solutions.len());
            Verdict::Ok
        }
        Status::Infeasible => {
            eprintln!("infeasible: no direction admits a common point");
            Verdict::No
        }
        Status::BestEffort => {
            let gap = out.best_effort.as_ref().map_or(f64::NAN, |b| b.gap);
            eprintln!("no certified solution; smallest gap found {gap:e}");
            Verdict::No
        }
    };
    Ok(verdict)
}

fn listing<T: Scalar>(
    file: &InstanceFile,
    sols: &[Solution<T>],
    best: Option<BestEffort>,
) -> SolutionFile {
    let names = file.names();
    let status = match (sols.is_empty(), &best) {
        (false, _) => Status::Certified,
        (true, Some(_)) => Status::BestEffort,
        (true, None) => Status::Infeasible,
    };
    SolutionFile {
        kind: file.kind,
        dimension: file.dimension,
        status,
        solutions: sols
            .iter()
            .map(|s| SolutionEntry::from_solution(&names, s))
            .collect(),
        best_effort: best,
    }
}

fn sweep<T: Scalar>(file: &InstanceFile, cfg: &SweepConfig, all: bool) -> Result<SolutionFile> {
    let inst = file.instance::<T>()?;
    if all {
        let sols = solve_sweep_all(&inst, cfg)?;
        if !sols.is_empty() {
            return Ok(listing(file, &sols, None));
        }
    }
    Ok(match solve_sweep(&inst, cfg)? {
        SweepOutcome::Certified(sol) => listing(file, &[sol], None),
        SweepOutcome::BestEffort { direction, gap } => {
            let best = BestEffort {
                direction: direction.coords().iter().map(Num::of).collect(),
                gap,
            };
            listing::<T>(file, &[], Some(best))
        }
    })
}
