//! Numeric search over the hemisphere of directions for dimension >= 2.
//!
//! Seeds come from two sources. Structured seeds span the kernels of every
//! set of at most `dim - 1` event normals; the gap is locally constant in sign
//! off those kernels, so lower-dimensional feasible faces (including the
//! directions where atoms turn parallel) are reached exactly rather than
//! approached. Quasi-random seeds cover the open cells. The best seeds are
//! refined by a Nelder-Mead search in tangent coordinates, and every candidate
//! is passed through the fenced oracle before it is reported.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Direction;
use crate::linalg::kernel_basis;
use crate::measure::Extended;
use crate::scalar::Scalar;

use super::{canonical_dir, certify, gap, Extent, Instance, Method, Solution};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Number of quasi-random hemisphere samples.
    pub grid_points: usize,
    pub seed: u64,
    /// Largest gap accepted before certification.
    pub tol: f64,
    /// Oracle fence.
    pub eps: f64,
    /// Simplex iterations per refinement round.
    pub max_iters: usize,
    /// Number of best seeds refined.
    pub starts: usize,
    /// Initial simplex edge, in radians.
    pub initial_step: f64,
    /// Step multiplier between refinement rounds.
    pub shrink: f64,
    pub rounds: usize,
    /// Optional bound on `|x|` for reported solutions.
    pub x_bound: Option<f64>,
    /// Cap on structured seeds.
    pub max_structured: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            grid_points: 4096,
            seed: 0,
            tol: 1e-9,
            eps: 1e-7,
            max_iters: 400,
            starts: 8,
            initial_step: 0.1,
            shrink: 0.1,
            rounds: 4,
            x_bound: None,
            max_structured: 50_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepOutcome<T> {
    Certified(Solution<T>),
    /// No certified solution; the direction with the smallest gap found.
    BestEffort {
        direction: Direction<T>,
        gap: f64,
    },
}

impl<T> SweepOutcome<T> {
    pub fn solution(&self) -> Option<&Solution<T>> {
        match self {
            SweepOutcome::Certified(s) => Some(s),
            SweepOutcome::BestEffort { .. } => None,
        }
    }
}

/// Finds one fence-certified solution, or reports the best direction seen.
pub fn solve_sweep<T: Scalar>(
    instance: &Instance<T>,
    cfg: &SweepConfig,
) -> Result<SweepOutcome<T>> {
    let search = Search::run(instance, cfg, false)?;
    Ok(match search.certified.into_iter().next() {
        Some(sol) => SweepOutcome::Certified(sol),
        None => SweepOutcome::BestEffort {
            direction: search.best.0,
            gap: search.best.1,
        },
    })
}

/// Every distinct fence-certified solution reached from any seed.
/// Directions closer than about `1e-6` radians are reported once.
pub fn solve_sweep_all<T: Scalar>(
    instance: &Instance<T>,
    cfg: &SweepConfig,
) -> Result<Vec<Solution<T>>> {
    Ok(Search::run(instance, cfg, true)?.certified)
}

struct Search<T> {
    certified: Vec<Solution<T>>,
    best: (Direction<T>, f64),
}

impl<T: Scalar> Search<T> {
    fn run(instance: &Instance<T>, cfg: &SweepConfig, all: bool) -> Result<Self> {
        if instance.dim() < 2 {
            return Err(Error::WrongDimension {
                expected: 2,
                found: instance.dim(),
            });
        }
        // exact backends screen samples and refine in floating point; only
        // candidates are converted back and certified exactly
        let shadow: Option<Instance<f64>> = if T::EXACT {
            instance.convert().ok()
        } else {
            None
        };
        let score = |p: &[f64]| -> f64 {
            match &shadow {
                Some(s) => to_direction::<f64>(p).map_or(f64::INFINITY, |d| objective(s, &d)),
                None => to_direction::<T>(p).map_or(f64::INFINITY, |d| objective(instance, &d)),
            }
        };

        let structured = structured_seeds(instance, cfg.max_structured);
        let samples = halton_hemisphere(instance.dim(), cfg.grid_points, cfg.seed);
        let mut values: Vec<f64> = structured
            .par_iter()
            .map(|d| objective(instance, d))
            .collect();
        values.par_extend(samples.par_iter().map(|p| score(p)));
        let seed_dir = |i: usize| -> Option<Direction<T>> {
            match structured.get(i) {
                Some(d) => Some(d.clone()),
                None => to_direction(&samples[i - structured.len()]),
            }
        };
        let seed_unit = |i: usize| -> Vec<f64> {
            match structured.get(i) {
                Some(d) => unit_f64(d),
                None => samples[i - structured.len()].clone(),
            }
        };
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

        let eps = T::from_f64(cfg.eps).unwrap_or_else(T::zero);
        let slack = T::from_f64(cfg.tol).unwrap_or_else(T::zero);
        let first = order
            .iter()
            .find_map(|&i| seed_dir(i).map(|d| (d, values[i])))
            .ok_or(Error::ZeroDirection)?;
        let mut search = Search {
            certified: Vec::new(),
            best: first,
        };

        for &i in order.iter().take_while(|&&i| values[i] <= cfg.tol) {
            if let Some(d) = seed_dir(i) {
                search.offer(instance, &d, &eps, &slack, cfg)?;
            }
            if !all && !search.certified.is_empty() {
                return Ok(search);
            }
        }

        let starts: Vec<usize> = order.iter().take(cfg.starts).copied().collect();
        let refined: Vec<(Vec<f64>, f64)> = starts
            .par_iter()
            .map(|&i| refine(&score, seed_unit(i), values[i], cfg))
            .collect();
        for (unit, value) in refined {
            let Some(dir) = to_direction::<T>(&unit) else {
                continue;
            };
            if value < search.best.1 {
                search.best = (dir.clone(), value);
            }
            if value <= cfg.tol {
                search.offer(instance, &dir, &eps, &slack, cfg)?;
                if !all && !search.certified.is_empty() {
                    return Ok(search);
                }
            }
        }
        Ok(search)
    }

    fn offer(
        &mut self,
        instance: &Instance<T>,
        dir: &Direction<T>,
        eps: &T,
        slack: &T,
        cfg: &SweepConfig,
    ) -> Result<()> {
        let unit = unit_f64(dir);
        let seen = self.certified.iter().any(|s| {
            let other = unit_f64(&s.witness.direction());
            let cos: f64 = unit.iter().zip(&other).map(|(a, b)| a * b).sum();
            cos.abs() > 1.0 - 1e-12
        });
        if seen {
            return Ok(());
        }
        let Some(sol) = certify(instance, dir, eps, slack, Method::Sweep, Extent::Local)? else {
            return Ok(());
        };
        if let Some(bound) = cfg.x_bound {
            if sol.witness.param().to_f64().abs() > bound {
                return Ok(());
            }
        }
        self.certified.push(sol);
        Ok(())
    }
}

fn objective<T: Scalar>(instance: &Instance<T>, dir: &Direction<T>) -> f64 {
    match gap(instance, dir) {
        Ok(g) => match g.g {
            Extended::NegInf => f64::NEG_INFINITY,
            other => {
                let v = other.to_f64();
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            }
        },
        Err(_) => f64::INFINITY,
    }
}

fn unit_f64<T: Scalar>(dir: &Direction<T>) -> Vec<f64> {
    let v: Vec<f64> = dir.coords().iter().map(Scalar::to_f64).collect();
    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / n).collect()
}

fn to_direction<T: Scalar>(p: &[f64]) -> Option<Direction<T>> {
    let coords: Option<Vec<T>> = p.iter().map(|&c| T::from_f64(c)).collect();
    canonical_dir(coords?)
}

/// Kernel directions of every subset of at most `dim - 1` event normals, up
/// to `cap` directions, in a fixed order.
fn structured_seeds<T: Scalar>(instance: &Instance<T>, cap: usize) -> Vec<Direction<T>> {
    let dim = instance.dim();
    let normals = instance.event_normals();
    let mut seeds: Vec<Direction<T>> = Vec::new();
    'outer: for size in 1..dim {
        for subset in normals.iter().combinations(size) {
            let rows: Vec<Vec<T>> = subset.into_iter().cloned().collect();
            for v in kernel_basis(&rows, dim) {
                if let Some(d) = canonical_dir(v) {
                    seeds.push(d);
                    if seeds.len() >= cap {
                        break 'outer;
                    }
                }
            }
        }
    }
    let mut unique: Vec<Direction<T>> = Vec::with_capacity(seeds.len());
    for d in seeds {
        if !unique.contains(&d) {
            unique.push(d);
        }
    }
    unique
}

fn first_primes(n: usize) -> Vec<u32> {
    let mut primes: Vec<u32> = Vec::with_capacity(n);
    let mut k = 2u32;
    while primes.len() < n {
        if primes
            .iter()
            .take_while(|&&p| p * p <= k)
            .all(|&p| !k.is_multiple_of(p))
        {
            primes.push(k);
        }
        k += 1;
    }
    primes
}

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base as u64) as f64 * inv;
        i /= base as u64;
        inv /= b;
    }
    out
}

/// Halton points with a seeded Cranley-Patterson shift, projected from the
/// unit ball to the sphere and folded onto the hemisphere whose first nonzero
/// coordinate is positive.
pub(crate) fn halton_hemisphere(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    let bases = first_primes(dim);
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    let limit = (count as u64 + 1) * 64;
    while out.len() < count && i < limit {
        let p: Vec<f64> = (0..dim)
            .map(|k| {
                let u = (radical_inverse(i, bases[k]) + shift[k]).fract();
                2.0 * u - 1.0
            })
            .collect();
        i += 1;
        let n2: f64 = p.iter().map(|c| c * c).sum();
        if !(1e-6..=1.0).contains(&n2) {
            continue;
        }
        let n = n2.sqrt();
        let sign = if p.iter().find(|c| **c != 0.0).copied().unwrap_or(1.0) < 0.0 {
            -1.0
        } else {
            1.0
        };
        out.push(p.into_iter().map(|c| sign * c / n).collect());
    }
    out
}

/// Orthonormal basis of the tangent space at the unit vector `e`.
fn tangent_basis(e: &[f64]) -> Vec<Vec<f64>> {
    let d = e.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
    let mut axes: Vec<usize> = (0..d).collect();
    // axes least aligned with e first, for conditioning
    axes.sort_by(|&a, &b| e[a].abs().total_cmp(&e[b].abs()));
    for k in axes {
        if basis.len() == d - 1 {
            break;
        }
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        for u in std::iter::once(e).chain(basis.iter().map(Vec::as_slice)) {
            let c: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= c * ui;
            }
        }
        let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-8 {
            basis.push(v.into_iter().map(|c| c / n).collect());
        }
    }
    basis
}

fn chart(center: &[f64], basis: &[Vec<f64>], u: &[f64]) -> Vec<f64> {
    let mut p = center.to_vec();
    for (b, &s) in basis.iter().zip(u) {
        for (pi, bi) in p.iter_mut().zip(b) {
            *pi += s * bi;
        }
    }
    let n = p.iter().map(|c| c * c).sum::<f64>().sqrt();
    p.into_iter().map(|c| c / n).collect()
}

fn refine(
    score: &(impl Fn(&[f64]) -> f64 + Sync),
    start: Vec<f64>,
    start_value: f64,
    cfg: &SweepConfig,
) -> (Vec<f64>, f64) {
    let mut best = (start, start_value);
    let mut step = cfg.initial_step;
    for _ in 0..cfg.rounds {
        if best.1 <= cfg.tol {
            break;
        }
        let center = best.0.clone();
        let basis = tangent_basis(&center);
        let (u, value) = nelder_mead(
            |u| score(&chart(&center, &basis, u)),
            basis.len(),
            step,
            cfg.max_iters,
            cfg.tol,
        );
        if value < best.1 {
            best = (chart(&center, &basis, &u), value);
        }
        step *= cfg.shrink;
    }
    best
}

/// Nelder-Mead from the origin of `R^n` with an axis simplex of edge `step`.
/// Stops after `max_iters` iterations, once the best value reaches `target`,
/// or when the simplex collapses.
fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    n: usize,
    step: f64,
    max_iters: usize,
    target: f64,
) -> (Vec<f64>, f64) {
    let mut simplex: Vec<(Vec<f64>, f64)> = (0..=n)
        .map(|k| {
            let mut x = vec![0.0; n];
            if k > 0 {
                x[k - 1] = step;
            }
            let v = f(&x);
            (x, v)
        })
        .collect();
    let along = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
    };
    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 <= target {
            break;
        }
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if size < 1e-15 {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let reflected = along(&worst.0, &centroid, 2.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(&worst.0, &centroid, 3.0);
            let fe = f(&expanded);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 {
                along(&worst.0, &centroid, 1.5)
            } else {
                along(&worst.0, &centroid, 0.5)
            };
            let fc = f(&contracted);
            if fc < worst.1.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    *x = along(&best, x, 0.5);
                    *v = f(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Hyperplane;
    use crate::measure::WeightedFamily;
    use crate::solver::{Certificate, Witness};

    #[test]
    fn halton_points_are_unit_and_canonical() {
        let pts = halton_hemisphere(3, 200, 5);
        assert_eq!(pts.len(), 200);
        for p in &pts {
            let n: f64 = p.iter().map(|c| c * c).sum();
            assert!((n - 1.0).abs() < 1e-12);
            assert!(p.iter().find(|c| **c != 0.0).unwrap() > &0.0);
        }
        assert_eq!(pts, halton_hemisphere(3, 200, 5));
        assert_ne!(pts, halton_hemisphere(3, 200, 6));
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let (x, v) = nelder_mead(
            |u| (u[0] - 0.3).powi(2) + (u[1] + 0.2).powi(2),
            2,
            0.5,
            500,
            1e-14,
        );
        assert!(v < 1e-12);
        assert!((x[0] - 0.3).abs() < 1e-6 && (x[1] + 0.2).abs() < 1e-6);
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        let e = [0.6, 0.0, 0.8];
        let b = tangent_basis(&e);
        assert_eq!(b.len(), 2);
        for (i, u) in b.iter().enumerate() {
            let dot_e: f64 = u.iter().zip(&e).map(|(a, c)| a * c).sum();
            assert!(dot_e.abs() < 1e-12);
            for v in &b[i + 1..] {
                let d: f64 = u.iter().zip(v).map(|(a, c)| a * c).sum();
                assert!(d.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn remark_instance_in_three_dims() {
        let h = |y: f64| Hyperplane::new(vec![1.0, 0.0, 0.0], y).unwrap();
        let inst = Instance::hyperplane(vec![
            WeightedFamily::uniform("mu0", vec![h(0.0)]).unwrap(),
            WeightedFamily::uniform("mu1", vec![h(1.0)]).unwrap(),
        ])
        .unwrap();
        let out = solve_sweep(&inst, &SweepConfig::default()).unwrap();
        let sol = out.solution().expect("certified");
        let Witness::Line(p) = &sol.witness else {
            panic!()
        };
        assert_eq!(p.direction().coords()[0], 0.0);
        assert!(matches!(sol.certificate, Certificate::Float { .. }));
        assert_eq!(sol.method, Method::Degenerate);
    }

    #[test]
    fn symmetric_pairs_are_solved_at_the_origin() {
        // each family straddles the origin, so x = 0 works in every direction
        let h = |f: Vec<f64>, y: f64| Hyperplane::new(f, y).unwrap();
        let inst = Instance::hyperplane(vec![
            WeightedFamily::uniform("a", vec![h(vec![1.0, 0.0], -1.0), h(vec![1.0, 0.0], 1.0)])
                .unwrap(),
            WeightedFamily::uniform("b", vec![h(vec![0.0, 1.0], -1.0), h(vec![0.0, 1.0], 1.0)])
                .unwrap(),
        ])
        .unwrap();
        let cfg = SweepConfig {
            grid_points: 64,
            ..SweepConfig::default()
        };
        let sol = solve_sweep(&inst, &cfg).unwrap();
        assert!(sol.solution().is_some());
    }

    #[test]
    fn best_effort_when_infeasible() {
        let h = |f: Vec<f64>, y: f64| Hyperplane::new(f, y).unwrap();
        let inst = Instance::hyperplane(vec![
            WeightedFamily::uniform("a", vec![h(vec![1.0, 0.0], 1.0)]).unwrap(),
            WeightedFamily::uniform("b", vec![h(vec![0.0, 1.0], 1.0)]).unwrap(),
            WeightedFamily::uniform("c", vec![h(vec![1.0, 1.0], 0.0)]).unwrap(),
        ])
        .unwrap();
        let cfg = SweepConfig {
            grid_points: 256,
            ..SweepConfig::default()
        };
        match solve_sweep(&inst, &cfg).unwrap() {
            SweepOutcome::BestEffort { gap, .. } => assert!(gap > cfg.tol),
            SweepOutcome::Certified(s) => panic!("unexpected solution {s:?}"),
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let h = |f: Vec<f64>, y: f64| Hyperplane::new(f, y).unwrap();
        let inst = Instance::hyperplane(vec![
            WeightedFamily::uniform(
                "a",
                vec![h(vec![1.0, 2.0, 0.5], 1.0), h(vec![0.0, 1.0, -1.0], 2.0)],
            )
            .unwrap(),
            WeightedFamily::uniform(
                "b",
                vec![h(vec![3.0, -1.0, 1.0], -1.0), h(vec![1.0, 1.0, 1.0], 0.5)],
            )
            .unwrap(),
        ])
        .unwrap();
        let cfg = SweepConfig {
            grid_points: 300,
            seed: 3,
            ..SweepConfig::default()
        };
        assert_eq!(
            solve_sweep(&inst, &cfg).unwrap(),
            solve_sweep(&inst, &cfg).unwrap()
        );
    }
}
