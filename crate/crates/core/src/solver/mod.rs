//! Search for points satisfying the bisection predicate for every family.
//!
//! Both problem modes reduce to the same one-dimensional picture: for a fixed
//! direction each family contributes a closed median interval, and the
//! direction is feasible exactly when the intervals share a point. The
//! [`gap`] functional measures how far they are from doing so.
//!
//! * [`solve_exact_2d`] enumerates every event direction in the plane and is
//!   complete for rational input.
//! * [`solve_sweep`] samples the hemisphere, refines with a simplex search on
//!   the sphere and certifies with the float oracle.
//! * [`detect_case_ii`] finds directions along which every family is at least
//!   half parallel, so that every point on the line is a solution.

mod degenerate;
mod exact2d;
mod sweep;

use std::fmt;

pub use degenerate::detect_case_ii;
pub use exact2d::{solve_classical_exact_2d, solve_exact_2d};
pub use sweep::{solve_sweep, solve_sweep_all, SweepConfig, SweepOutcome};

use crate::error::{Error, Result};
use crate::geometry::{Direction, HopfPoint, Hyperplane};
use crate::measure::{
    all_satisfied, min_strict_margin, verify_classical, verify_star, Extended, MedianInterval,
    PointFamily, SideReport, WeightedFamily,
};
use crate::scalar::{leading_sign, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum Mode<T> {
    /// Measures on affine hyperplanes; solutions are points `[e, x]`.
    Hyperplane(Vec<WeightedFamily<T>>),
    /// Measures on points; solutions are hyperplanes `[f, y]`.
    Classical(Vec<PointFamily<T>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T> {
    dim: usize,
    mode: Mode<T>,
}

impl<T: Scalar> Instance<T> {
    pub fn hyperplane(families: Vec<WeightedFamily<T>>) -> Result<Self> {
        let dim = families.first().ok_or(Error::EmptyInstance)?.dim();
        for fam in &families {
            check_dim(dim, fam.dim())?;
        }
        Ok(Self {
            dim,
            mode: Mode::Hyperplane(families),
        })
    }

    pub fn classical(families: Vec<PointFamily<T>>) -> Result<Self> {
        let dim = families.first().ok_or(Error::EmptyInstance)?.dim();
        for fam in &families {
            check_dim(dim, fam.dim())?;
        }
        Ok(Self {
            dim,
            mode: Mode::Classical(families),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The same instance over another scalar backend, read through `f64`.
    pub fn convert<S: Scalar>(&self) -> Result<Instance<S>> {
        let num = |v: &T| S::from_f64(v.to_f64()).ok_or(Error::InvalidWeight);
        let vec = |v: &[T]| v.iter().map(num).collect::<Result<Vec<S>>>();
        match &self.mode {
            Mode::Hyperplane(fams) => Instance::hyperplane(
                fams.iter()
                    .map(|fam| {
                        let atoms = fam
                            .atoms()
                            .iter()
                            .map(|(h, w)| {
                                Ok((
                                    Hyperplane::new(vec(h.covector())?, num(h.offset())?)?,
                                    num(w)?,
                                ))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        WeightedFamily::new(fam.label(), atoms)
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            Mode::Classical(fams) => Instance::classical(
                fams.iter()
                    .map(|fam| {
                        let atoms = fam
                            .atoms()
                            .iter()
                            .map(|(v, w)| Ok((vec(v)?, num(w)?)))
                            .collect::<Result<Vec<_>>>()?;
                        PointFamily::new(fam.label(), atoms)
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        }
    }

    pub fn mode(&self) -> &Mode<T> {
        &self.mode
    }

    pub fn family_count(&self) -> usize {
        match &self.mode {
            Mode::Hyperplane(f) => f.len(),
            Mode::Classical(f) => f.len(),
        }
    }

    /// Whether existence of a solution is guaranteed: at most as many
    /// families as the dimension.
    pub fn guaranteed(&self) -> bool {
        self.family_count() <= self.dim
    }

    pub fn mode_name(&self) -> &'static str {
        match &self.mode {
            Mode::Hyperplane(_) => "hyperplane",
            Mode::Classical(_) => "classical",
        }
    }

    /// Per-family median intervals along `e` (a covector in classical mode).
    pub fn intervals(&self, e: &Direction<T>) -> Result<Vec<MedianInterval<T>>> {
        check_dim(self.dim, e.dim())?;
        match &self.mode {
            Mode::Hyperplane(fams) => fams.iter().map(|f| f.median_interval(e)).collect(),
            Mode::Classical(fams) => fams.iter().map(|f| f.median_interval(e.coords())).collect(),
        }
    }

    /// Normals of the hyperplanes (through the origin of the search space)
    /// across which the order of incidence parameters can change.
    pub(crate) fn event_normals(&self) -> Vec<Vec<T>> {
        let mut normals: Vec<Direction<T>> = Vec::new();
        let mut push = |v: Vec<T>| {
            if let Ok(d) = Direction::new(v) {
                let d = d.canonical();
                if !normals.contains(&d) {
                    normals.push(d);
                }
            }
        };
        match &self.mode {
            Mode::Hyperplane(fams) => {
                let atoms: Vec<&Hyperplane<T>> = fams
                    .iter()
                    .flat_map(|f| f.atoms().iter().map(|a| &a.0))
                    .collect();
                for h in &atoms {
                    push(h.covector().to_vec());
                }
                for (i, a) in atoms.iter().enumerate() {
                    for b in &atoms[i + 1..] {
                        // y_a f_b - y_b f_a vanishes where t_a(e) = t_b(e)
                        let g = a
                            .covector()
                            .iter()
                            .zip(b.covector())
                            .map(|(fa, fb)| {
                                a.offset().clone() * fb.clone() - b.offset().clone() * fa.clone()
                            })
                            .collect();
                        push(g);
                    }
                }
            }
            Mode::Classical(fams) => {
                let points: Vec<&Vec<T>> = fams
                    .iter()
                    .flat_map(|f| f.atoms().iter().map(|a| &a.0))
                    .collect();
                for (i, a) in points.iter().enumerate() {
                    for b in &points[i + 1..] {
                        push(
                            a.iter()
                                .zip(b.iter())
                                .map(|(p, q)| p.clone() - q.clone())
                                .collect(),
                        );
                    }
                }
            }
        }
        normals.into_iter().map(Direction::into_coords).collect()
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Feasibility functional along one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct GapValue<T> {
    /// `max_j lo_j - min_j hi_j`; the direction is feasible iff `g <= 0`.
    pub g: Extended<T>,
    pub argmax_lo: usize,
    pub argmin_hi: usize,
    /// The common interval `[max lo, min hi]` (empty when `g > 0`).
    pub common: MedianInterval<T>,
}

impl<T: Scalar> GapValue<T> {
    pub fn feasible(&self) -> bool {
        self.g <= Extended::Finite(T::zero())
    }

    fn from_intervals(intervals: &[MedianInterval<T>]) -> Self {
        let mut argmax_lo = 0;
        let mut argmin_hi = 0;
        for (j, iv) in intervals.iter().enumerate() {
            if iv.lo > intervals[argmax_lo].lo {
                argmax_lo = j;
            }
            if iv.hi < intervals[argmin_hi].hi {
                argmin_hi = j;
            }
        }
        let common = MedianInterval {
            lo: intervals[argmax_lo].lo.clone(),
            hi: intervals[argmin_hi].hi.clone(),
        };
        Self {
            g: common.lo.sub(&common.hi),
            argmax_lo,
            argmin_hi,
            common,
        }
    }
}

/// Gap functional at `e`. Even under `e -> -e`.
pub fn gap<T: Scalar>(instance: &Instance<T>, e: &Direction<T>) -> Result<GapValue<T>> {
    Ok(GapValue::from_intervals(&instance.intervals(e)?))
}

/// Picks a point of the common interval: its midpoint, the finite endpoint
/// when only one is finite, and zero when both are infinite.
pub fn choose_x<T: Scalar>(intervals: &[MedianInterval<T>]) -> Result<T> {
    if intervals.is_empty() {
        return Ok(T::zero());
    }
    let common = GapValue::from_intervals(intervals).common;
    if common.lo > common.hi {
        return Err(Error::Infeasible);
    }
    Ok(pick_in(&common))
}

fn pick_in<T: Scalar>(common: &MedianInterval<T>) -> T {
    match (&common.lo, &common.hi) {
        (Extended::Finite(a), Extended::Finite(b)) => (a.clone() + b.clone()) * T::half(),
        (Extended::Finite(a), _) => a.clone(),
        (_, Extended::Finite(b)) => b.clone(),
        _ => T::zero(),
    }
}

/// How the solution was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Exact2D,
    Sweep,
    /// Every family is at least half parallel to the line.
    Degenerate,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Exact2D => "exact2d",
            Method::Sweep => "sweep",
            Method::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Verified in exact arithmetic with no fence.
    Exact,
    /// Verified in floating point with fence `eps`; `min_margin` is the
    /// smallest strict margin across families.
    Float { eps: f64, min_margin: f64 },
}

/// The point on the line (hyperplane mode) or the cutting hyperplane
/// (classical mode).
#[derive(Debug, Clone, PartialEq)]
pub enum Witness<T> {
    Line(HopfPoint<T>),
    Cut(Hyperplane<T>),
}

impl<T: Scalar> Witness<T> {
    /// Direction `e` or covector `f`.
    pub fn direction(&self) -> Direction<T> {
        match self {
            Witness::Line(p) => p.direction().clone(),
            Witness::Cut(h) => Direction::new(h.covector().to_vec()).expect("nonzero covector"),
        }
    }

    /// `x` or `y`.
    pub fn param(&self) -> &T {
        match self {
            Witness::Line(p) => p.param(),
            Witness::Cut(h) => h.offset(),
        }
    }
}

/// Portion of the projective line of directions a 2-D solution stands for.
#[derive(Debug, Clone, PartialEq)]
pub enum Extent<T> {
    Isolated,
    /// Run of feasible directions from `from` to `to` in counterclockwise
    /// order; `*_closed` tells whether the endpoint itself is feasible.
    Arc {
        from: Direction<T>,
        to: Direction<T>,
        from_closed: bool,
        to_closed: bool,
    },
    /// Every direction is feasible.
    Circle,
    /// Found by sampling; neighbourhood not analysed.
    Local,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution<T> {
    pub witness: Witness<T>,
    /// Every `x` (or `y`) in this interval also solves along the same direction.
    pub range: MedianInterval<T>,
    pub reports: Vec<SideReport<T>>,
    pub certificate: Certificate,
    pub method: Method,
    pub extent: Extent<T>,
}

impl<T: Scalar> Solution<T> {
    /// Whether the canonical 2-D direction `e` belongs to the solution set this
    /// solution represents.
    pub fn covers(&self, e: &Direction<T>) -> bool {
        let e = e.canonical();
        let own = self.witness.direction();
        match &self.extent {
            Extent::Isolated | Extent::Local => e == own,
            Extent::Circle => true,
            Extent::Arc {
                from,
                to,
                from_closed,
                to_closed,
            } => {
                if e == *from {
                    return *from_closed;
                }
                if e == *to {
                    return *to_closed;
                }
                let after_from = ccw_before(from, &e);
                let before_to = ccw_before(&e, to);
                if ccw_before(from, to) {
                    after_from && before_to
                } else {
                    after_from || before_to
                }
            }
        }
    }
}

/// Finds one bisecting hyperplane for a classical-mode instance.
///
/// Rational planar input is enumerated exactly and the first solution in
/// angular order is returned; everything else goes through the sweep.
pub fn solve_classical<T: Scalar>(
    instance: &Instance<T>,
    cfg: &SweepConfig,
) -> Result<SweepOutcome<T>> {
    if !matches!(instance.mode(), Mode::Classical(_)) {
        return Err(Error::WrongMode("hyperplane"));
    }
    solve_auto(instance, cfg)
}

/// Exact enumeration when the instance is rational and planar, otherwise the
/// sweep. An exhausted exact search reports [`Error::Infeasible`].
pub fn solve_auto<T: Scalar>(instance: &Instance<T>, cfg: &SweepConfig) -> Result<SweepOutcome<T>> {
    if T::EXACT && instance.dim() == 2 {
        return exact2d::enumerate(instance)?
            .into_iter()
            .next()
            .map(SweepOutcome::Certified)
            .ok_or(Error::Infeasible);
    }
    solve_sweep(instance, cfg)
}

/// Strict angular order of canonical 2-D directions on the half-open range
/// of angles `(-pi/2, pi/2]`.
pub(crate) fn ccw_before<T: Scalar>(a: &Direction<T>, b: &Direction<T>) -> bool {
    let (a, b) = (a.coords(), b.coords());
    let cross = a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone();
    cross.is_positive()
}

/// Builds and verifies a solution along the canonical direction `e`.
///
/// `slack` lets the float sweep accept a common interval that is empty by a
/// rounding-sized amount; the oracle then has the final word.
pub(crate) fn certify<T: Scalar>(
    instance: &Instance<T>,
    e: &Direction<T>,
    eps: &T,
    slack: &T,
    method: Method,
    extent: Extent<T>,
) -> Result<Option<Solution<T>>> {
    let intervals = instance.intervals(e)?;
    let value = GapValue::from_intervals(&intervals);
    if value.g > Extended::Finite(slack.clone()) {
        return Ok(None);
    }
    let x = pick_in(&value.common);
    let method = if intervals.iter().all(MedianInterval::is_whole_line) {
        Method::Degenerate
    } else {
        method
    };
    let (witness, reports) = match &instance.mode {
        Mode::Hyperplane(fams) => {
            let p = HopfPoint::new(e.clone(), x);
            let reports = verify_star(fams, &p, eps)?;
            (Witness::Line(p), reports)
        }
        Mode::Classical(fams) => {
            let h = Hyperplane::new(e.coords().to_vec(), x)?;
            let reports = verify_classical(fams, &h, eps)?;
            (Witness::Cut(h), reports)
        }
    };
    if !all_satisfied(&reports) {
        return Ok(None);
    }
    let certificate = if T::EXACT && eps.is_zero() {
        Certificate::Exact
    } else {
        Certificate::Float {
            eps: eps.to_f64(),
            min_margin: min_strict_margin(&reports).to_f64(),
        }
    };
    Ok(Some(Solution {
        witness,
        range: value.common,
        reports,
        certificate,
        method,
        extent,
    }))
}

/// Canonical direction whose leading coordinate is positive.
pub(crate) fn canonical_dir<T: Scalar>(coords: Vec<T>) -> Option<Direction<T>> {
    leading_sign(&coords)?;
    Direction::new(coords).ok().map(|d| d.canonical())
}
