//! Finite atomic probability measures on hyperplanes and on points, the side
//! masses they assign under the bisection predicates, and weighted median
//! intervals along a fixed direction.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{star_residual, Direction, HopfPoint, Hyperplane};
use crate::scalar::{dot, max_abs, norm_squared, Scalar};

/// Real line extended by `-inf` and `+inf`; variants are declared in order.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub enum Extended<T> {
    NegInf,
    Finite(T),
    PosInf,
}

impl<T: Scalar> Extended<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn neg(&self) -> Self {
        match self {
            Extended::NegInf => Extended::PosInf,
            Extended::Finite(v) => Extended::Finite(-v.clone()),
            Extended::PosInf => Extended::NegInf,
        }
    }

    /// `self - other`, with `-inf - (+inf) = -inf`.
    ///
    /// `+inf - (+inf)` and `-inf - (-inf)` never arise between a lower and
    /// an upper endpoint; they are mapped to `-inf` as well.
    pub fn sub(&self, other: &Self) -> Self {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a.clone() - b.clone()),
            (Extended::PosInf, Extended::NegInf) | (Extended::PosInf, Extended::Finite(_)) => {
                Extended::PosInf
            }
            (Extended::Finite(_), Extended::NegInf) => Extended::PosInf,
            _ => Extended::NegInf,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::NegInf => f64::NEG_INFINITY,
            Extended::Finite(v) => v.to_f64(),
            Extended::PosInf => f64::INFINITY,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => f.write_str("-inf"),
            Extended::Finite(v) => v.fmt(f),
            Extended::PosInf => f.write_str("+inf"),
        }
    }
}

/// Closed set of parameters `x` along a direction for which one family
/// satisfies both bisection inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct MedianInterval<T> {
    pub lo: Extended<T>,
    pub hi: Extended<T>,
}

impl<T: Scalar> MedianInterval<T> {
    pub fn whole_line() -> Self {
        Self {
            lo: Extended::NegInf,
            hi: Extended::PosInf,
        }
    }

    pub fn is_whole_line(&self) -> bool {
        self.lo == Extended::NegInf && self.hi == Extended::PosInf
    }

    pub fn contains(&self, x: &T) -> bool {
        let x = Extended::Finite(x.clone());
        self.lo <= x && x <= self.hi
    }

    /// Interval seen from the opposite orientation of the line.
    pub fn reflect(&self) -> Self {
        Self {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for MedianInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Weighted selection: the closed interval of `x` with
/// `sum_{t_i <= x} w_i >= threshold` and `sum_{t_i >= x} w_i >= threshold`.
/// A nonpositive threshold yields the whole line.
pub fn weighted_median_interval<T: Scalar>(
    mut params: Vec<(T, T)>,
    threshold: T,
) -> MedianInterval<T> {
    let slack = T::mass_slack(params.len() + 1);
    if threshold <= slack {
        return MedianInterval::whole_line();
    }
    let target = threshold - slack;
    params.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));

    let mut acc = T::zero();
    let mut lo = None;
    for (t, w) in &params {
        acc = acc + w.clone();
        if acc >= target {
            lo = Some(t.clone());
            break;
        }
    }
    let mut acc = T::zero();
    let mut hi = None;
    for (t, w) in params.iter().rev() {
        acc = acc + w.clone();
        if acc >= target {
            hi = Some(t.clone());
            break;
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => MedianInterval {
            lo: Extended::Finite(lo),
            hi: Extended::Finite(hi),
        },
        // finite mass below the threshold cannot happen for probability
        // measures; report the empty interval [+inf, -inf] rather than panic
        _ => MedianInterval {
            lo: Extended::PosInf,
            hi: Extended::NegInf,
        },
    }
}

fn check_weight<T: Scalar>(w: &T) -> Result<()> {
    if !w.is_positive() || !w.to_f64().is_finite() {
        return Err(Error::InvalidWeight);
    }
    Ok(())
}

fn normalize<T: Scalar, A>(atoms: &mut [(A, T)]) {
    let total = atoms.iter().fold(T::zero(), |acc, (_, w)| acc + w.clone());
    for (_, w) in atoms.iter_mut() {
        *w = w.clone() / total.clone();
    }
}

/// Merges atoms with equal keys, keeping first-seen order.
fn merge<T: Scalar, A: PartialEq>(atoms: Vec<(A, T)>) -> Vec<(A, T)> {
    let mut merged: Vec<(A, T)> = Vec::with_capacity(atoms.len());
    for (a, w) in atoms {
        match merged.iter_mut().find(|(b, _)| *b == a) {
            Some((_, acc)) => *acc = acc.clone() + w,
            None => merged.push((a, w)),
        }
    }
    merged
}

/// Finite atomic probability measure on affine hyperplanes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFamily<T> {
    label: String,
    atoms: Vec<(Hyperplane<T>, T)>,
}

impl<T: Scalar> WeightedFamily<T> {
    /// Merges duplicate hyperplanes and normalizes weights to sum to one.
    pub fn new(label: impl Into<String>, atoms: Vec<(Hyperplane<T>, T)>) -> Result<Self> {
        let first = atoms.first().ok_or(Error::EmptyFamily)?;
        let dim = first.0.dim();
        for (h, w) in &atoms {
            check_weight(w)?;
            if h.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: h.dim(),
                });
            }
        }
        let mut atoms = merge(atoms);
        normalize(&mut atoms);
        Ok(Self {
            label: label.into(),
            atoms,
        })
    }

    /// Uniform weights, as for a counting measure on a finite set.
    pub fn uniform(label: impl Into<String>, planes: Vec<Hyperplane<T>>) -> Result<Self> {
        Self::new(label, planes.into_iter().map(|h| (h, T::one())).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn atoms(&self) -> &[(Hyperplane<T>, T)] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].0.dim()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: dim,
            });
        }
        Ok(())
    }

    /// Masses of the two closed sides of the bisection predicate at `p`.
    pub fn side_masses(&self, p: &HopfPoint<T>) -> Result<SideReport<T>> {
        self.check_dim(p.dim())?;
        Ok(self.report(p.direction().coords(), p.param(), &T::zero()))
    }

    fn report(&self, e: &[T], x: &T, eps: &T) -> SideReport<T> {
        // |e| only sets the width of the fence, so a rounded square root is enough
        let norm_e = T::from_f64(norm_squared(e).to_f64().sqrt()).unwrap_or_else(T::one);
        let mut tally = Tally::default();
        for (h, w) in &self.atoms {
            let residual = star_residual(h.covector(), h.offset(), e, x);
            let parallel = h.is_parallel(e);
            let band = if eps.is_zero() {
                T::zero()
            } else {
                let size = max_abs(h.covector()).max_with(h.offset().abs());
                eps.clone() * size * (x.abs() * norm_e.clone()).max_with(T::one()) * norm_e.clone()
            };
            tally.add(&residual, &band, parallel, w);
        }
        tally.finish(self.atoms.len())
    }

    /// Weight of atoms whose covector annihilates `e`.
    pub fn parallel_mass(&self, e: &Direction<T>) -> Result<T> {
        self.check_dim(e.dim())?;
        Ok(self
            .atoms
            .iter()
            .filter(|(h, _)| h.is_parallel(e.coords()))
            .fold(T::zero(), |acc, (_, w)| acc + w.clone()))
    }

    /// Incidence parameters `t = y / f(e)` of the non-parallel atoms.
    pub fn incidence_params(&self, e: &Direction<T>) -> Result<(Vec<(T, T)>, T)> {
        self.check_dim(e.dim())?;
        let mut params = Vec::with_capacity(self.atoms.len());
        let mut parallel = T::zero();
        for (h, w) in &self.atoms {
            if h.is_parallel(e.coords()) {
                parallel = parallel + w.clone();
            } else {
                params.push((h.offset().clone() / h.apply(e), w.clone()));
            }
        }
        Ok((params, parallel))
    }

    /// The set of `x` for which `(e, x)` satisfies both inequalities for this
    /// family, as a weighted quantile interval with threshold
    /// `1/2 - parallel_mass`.
    pub fn median_interval(&self, e: &Direction<T>) -> Result<MedianInterval<T>> {
        let (params, parallel) = self.incidence_params(e)?;
        Ok(weighted_median_interval(params, T::half() - parallel))
    }
}

/// Finite atomic probability measure on points of `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFamily<T> {
    label: String,
    atoms: Vec<(Vec<T>, T)>,
}

impl<T: Scalar> PointFamily<T> {
    pub fn new(label: impl Into<String>, atoms: Vec<(Vec<T>, T)>) -> Result<Self> {
        let first = atoms.first().ok_or(Error::EmptyFamily)?;
        let dim = first.0.len();
        for (v, w) in &atoms {
            check_weight(w)?;
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        let mut atoms = merge(atoms);
        normalize(&mut atoms);
        Ok(Self {
            label: label.into(),
            atoms,
        })
    }

    pub fn uniform(label: impl Into<String>, points: Vec<Vec<T>>) -> Result<Self> {
        Self::new(label, points.into_iter().map(|v| (v, T::one())).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn atoms(&self) -> &[(Vec<T>, T)] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].0.len()
    }

    /// `(f(v_i), w_i)` for every atom.
    pub fn point_params(&self, f: &[T]) -> Result<Vec<(T, T)>> {
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: f.len(),
            });
        }
        if f.iter().all(Zero::is_zero) {
            return Err(Error::ZeroCovector);
        }
        Ok(self
            .atoms
            .iter()
            .map(|(v, w)| (dot(f, v), w.clone()))
            .collect())
    }

    /// Offsets `y` for which `[f, y]` bisects this family.
    pub fn median_interval(&self, f: &[T]) -> Result<MedianInterval<T>> {
        Ok(weighted_median_interval(self.point_params(f)?, T::half()))
    }

    /// Masses of `{v : f(v) <= y}` (upper) and `{v : f(v) >= y}` (lower).
    pub fn side_masses(&self, h: &Hyperplane<T>, eps: &T) -> Result<SideReport<T>> {
        if h.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: h.dim(),
            });
        }
        let size = max_abs(h.covector()).max_with(h.offset().abs());
        let mut tally = Tally::default();
        for (v, w) in &self.atoms {
            let residual = h.point_offset(v);
            let band = if eps.is_zero() {
                T::zero()
            } else {
                eps.clone() * size.clone() * max_abs(v).max_with(T::one())
            };
            tally.add(&residual, &band, false, w);
        }
        Ok(tally.finish(self.atoms.len()))
    }
}

trait MaxWith {
    fn max_with(self, other: Self) -> Self;
}

impl<T: Scalar> MaxWith for T {
    fn max_with(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

/// Per-family outcome of the bisection check.
///
/// `upper_mass` and `lower_mass` count fence atoms on both sides; the
/// `strict_*` masses count only atoms clear of the fence plus atoms exactly
/// parallel to the line.
#[derive(Debug, Clone, PartialEq)]
pub struct SideReport<T> {
    pub upper_mass: T,
    pub lower_mass: T,
    pub fence_mass: T,
    pub strict_upper: T,
    pub strict_lower: T,
    pub satisfied: bool,
}

impl<T: Scalar> SideReport<T> {
    /// `min(strict_upper, strict_lower) - 1/2`; negative when the fence was
    /// needed to reach one half.
    pub fn strict_margin(&self) -> T {
        let m = if self.strict_upper < self.strict_lower {
            self.strict_upper.clone()
        } else {
            self.strict_lower.clone()
        };
        m - T::half()
    }
}

struct Tally<T> {
    upper: T,
    lower: T,
    fence: T,
    strict_upper: T,
    strict_lower: T,
}

impl<T: Scalar> Default for Tally<T> {
    fn default() -> Self {
        Self {
            upper: T::zero(),
            lower: T::zero(),
            fence: T::zero(),
            strict_upper: T::zero(),
            strict_lower: T::zero(),
        }
    }
}

impl<T: Scalar> Tally<T> {
    fn add(&mut self, residual: &T, band: &T, parallel: bool, w: &T) {
        let on_fence = parallel || residual.abs() <= *band;
        if on_fence || !residual.is_negative() {
            self.upper = self.upper.clone() + w.clone();
        }
        if on_fence || !residual.is_positive() {
            self.lower = self.lower.clone() + w.clone();
        }
        if on_fence {
            self.fence = self.fence.clone() + w.clone();
        }
        if parallel || residual > band {
            self.strict_upper = self.strict_upper.clone() + w.clone();
        }
        if parallel || *residual < -band.clone() {
            self.strict_lower = self.strict_lower.clone() + w.clone();
        }
    }

    fn finish(self, terms: usize) -> SideReport<T> {
        let need = T::half() - T::mass_slack(terms);
        let satisfied = self.upper >= need && self.lower >= need;
        SideReport {
            upper_mass: self.upper,
            lower_mass: self.lower,
            fence_mass: self.fence,
            strict_upper: self.strict_upper,
            strict_lower: self.strict_lower,
            satisfied,
        }
    }
}

/// Checks every family against the bisection predicate at `p`.
///
/// With `eps > 0`, atoms with `|y f(e) - x f(e)^2| <= eps * scale(h)` are
/// counted on both sides, where
/// `scale(h) = max(|y|, max|f_k|) * max(1, |x| |e|) * |e|`.
/// For a unit `e` this is `max(|y|, max|f_k|) * max(1, |x|)`, and it scales
/// with the residual when `(e, x)` is replaced by `(k e, x / k)`.
pub fn verify_star<T: Scalar>(
    families: &[WeightedFamily<T>],
    p: &HopfPoint<T>,
    eps: &T,
) -> Result<Vec<SideReport<T>>> {
    families
        .iter()
        .map(|fam| {
            fam.check_dim(p.dim())?;
            Ok(fam.report(p.direction().coords(), p.param(), eps))
        })
        .collect()
}

/// Checks every point family against the classical bisection predicate for
/// the hyperplane `h`.
pub fn verify_classical<T: Scalar>(
    families: &[PointFamily<T>],
    h: &Hyperplane<T>,
    eps: &T,
) -> Result<Vec<SideReport<T>>> {
    families.iter().map(|fam| fam.side_masses(h, eps)).collect()
}

/// `true` when every report is satisfied.
pub fn all_satisfied<T>(reports: &[SideReport<T>]) -> bool {
    reports.iter().all(|r| r.satisfied)
}

/// Smallest strict margin across reports.
pub fn min_strict_margin<T: Scalar>(reports: &[SideReport<T>]) -> T {
    reports
        .iter()
        .map(SideReport::strict_margin)
        .fold(None, |acc: Option<T>, m| match acc {
            Some(a) if a <= m => Some(a),
            _ => Some(m),
        })
        .unwrap_or_else(T::one)
}
