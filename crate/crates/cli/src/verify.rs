use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use hamcut::{
    all_satisfied, verify_classical, verify_star, Direction, HopfPoint, Hyperplane, Mode, Rational,
    SideReport,
};
use num_traits::Zero;

use crate::format::{masses, CertificateFile, InstanceFile, Kind, SolutionFile};
use crate::Verdict;

#[derive(Args)]
pub struct VerifyArgs {
    /// Instance file.
    pub instance: PathBuf,
    /// Solution file.
    pub solution: PathBuf,
    /// Fence width; defaults to the eps of each solution's certificate, or
    /// exact evaluation for exact certificates.
    #[arg(long)]
    pub eps: Option<f64>,
}

pub fn run(args: &VerifyArgs) -> Result<Verdict> {
    let file = InstanceFile::read(&args.instance)?;
    let sol = SolutionFile::read(&args.solution)?;
    if sol.kind != file.kind {
        bail!(
            "solution is for kind {:?}, instance is {:?}",
            sol.kind,
            file.kind
        );
    }
    if sol.dimension != file.dimension {
        bail!(
            "solution has dimension {}, instance has {}",
            sol.dimension,
            file.dimension
        );
    }
    if sol.solutions.is_empty() {
        println!("no solutions listed (status {:?})", sol.status);
        return Ok(Verdict::No);
    }
    let inst = file.instance::<Rational>()?;
    let names = file.names();
    let mut all_ok = true;

    for (k, entry) in sol.solutions.iter().enumerate() {
        let (dir, param) = entry
            .witness(file.kind)
            .with_context(|| format!("solution {k}"))?;
        if dir.len() != file.dimension {
            bail!(
                "solution {k}: vector has {} entries, dimension is {}",
                dir.len(),
                file.dimension
            );
        }
        let eps_f = args.eps.unwrap_or(match entry.certificate {
            CertificateFile::Exact => 0.0,
            CertificateFile::Float { eps, .. } => eps,
        });
        let eps = Rational::from_float(eps_f)
            .filter(|e| *e >= Rational::zero())
            .context("eps must be a nonnegative number")?;
        let reports: Vec<SideReport<Rational>> = match (inst.mode(), file.kind) {
            (Mode::Hyperplane(fams), Kind::Hyperplane) => {
                let e = Direction::new(dir).with_context(|| format!("solution {k}"))?;
                verify_star(fams, &HopfPoint::new(e, param), &eps)?
            }
            (Mode::Classical(fams), Kind::Points) => {
                let h = Hyperplane::new(dir, param).with_context(|| format!("solution {k}"))?;
                verify_classical(fams, &h, &eps)?
            }
            _ => unreachable!("mode follows kind"),
        };
        let ok = all_satisfied(&reports);
        all_ok &= ok;

        let fence = if eps.is_zero() {
            "exact".to_string()
        } else {
            format!("eps {eps_f:e}")
        };
        println!(
            "solution {k}: {} ({fence})",
            if ok { "satisfied" } else { "NOT satisfied" }
        );
        for (name, r) in names.iter().zip(&reports) {
            println!(
                "  {name}: upper {} lower {} fence {} margin {} {}",
                r.upper_mass,
                r.lower_mass,
                r.fence_mass,
                r.strict_margin(),
                if r.satisfied { "ok" } else { "FAILED" }
            );
        }
        let margin = reports
            .iter()
            .map(SideReport::strict_margin)
            .min()
            .expect("nonempty");
        println!("  min margin {margin}");
        if eps.is_zero() && masses(&names, &reports) != entry.per_family {
            println!("  note: recorded masses differ from the recount");
        }
    }
    Ok(if all_ok { Verdict::Ok } else { Verdict::No })
}
