//! Projective representatives of affine hyperplanes and of points on lines
//! through the origin, together with the incidence predicates they support.
//!
//! A hyperplane `{v : f(v) = y}` is stored as the pair `[f, y]` up to a
//! nonzero common factor. A point `v = x e` on the line `L = R e` is stored as
//! the pair `[e, x]` with `[e, x] = [t e, x / t]`. Both are kept in a
//! canonical form so that projective equality is plain `==`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{dot, leading_sign, max_abs, norm_squared, scale_vec, Scalar};

/// Nonzero vector in `V`. Orientation is kept; see [`Direction::canonical`].
#[derive(Debug, Clone, PartialEq)]
pub struct Direction<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Direction<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::ZeroDirection);
        }
        Ok(Self { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| T::from_ratio(c, 1)).collect())
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn neg(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c.clone()).collect(),
        }
    }

    /// Canonical representative of the line `R e`, plus the signed factor `k`
    /// with `self = k * canonical`.
    ///
    /// The first nonzero coordinate is made positive; exact backends further
    /// reduce to integer coordinates with gcd 1, float backends to unit norm.
    pub fn canonical_with_factor(&self) -> (Self, T) {
        let mut k = T::projective_scale(&self.coords);
        if leading_sign(&self.coords) == Some(false) {
            k = -k;
        }
        let inv = T::one() / k.clone();
        (
            Self {
                coords: scale_vec(&self.coords, &inv),
            },
            k,
        )
    }

    pub fn canonical(&self) -> Self {
        self.canonical_with_factor().0
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// Affine hyperplane `{v : f(v) = y}` in canonical projective form.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane<T> {
    f: Vec<T>,
    y: T,
}

impl<T: Scalar> Hyperplane<T> {
    /// Canonicalizes `[f, y]`: the first nonzero coordinate of `f` becomes
    /// positive, and `f` is reduced to content 1 (exact) or unit norm (float),
    /// with `y` scaled by the same factor.
    pub fn new(f: Vec<T>, y: T) -> Result<Self> {
        let positive = leading_sign(&f).ok_or(Error::ZeroCovector)?;
        let mut k = T::projective_scale(&f);
        if !positive {
            k = -k;
        }
        let inv = T::one() / k;
        Ok(Self {
            f: scale_vec(&f, &inv),
            y: y * inv,
        })
    }

    pub fn covector(&self) -> &[T] {
        &self.f
    }

    pub fn offset(&self) -> &T {
        &self.y
    }

    pub fn dim(&self) -> usize {
        self.f.len()
    }

    /// `f(e)`.
    pub fn apply(&self, e: &Direction<T>) -> T {
        dot(&self.f, e.coords())
    }

    /// `f(e) = 0`; float backends accept a value negligible against
    /// `max|f| * |e|^2`.
    pub fn is_parallel(&self, e: &[T]) -> bool {
        annihilates(&self.f, e)
    }

    /// Where the line `R e` meets the hyperplane, as a multiple of `e`.
    pub fn incidence(&self, e: &Direction<T>) -> Result<Incidence<T>> {
        e.check_dim(self.dim())?;
        let fe = self.apply(e);
        Ok(if self.is_parallel(e.coords()) {
            Incidence::Parallel
        } else {
            Incidence::Finite(self.y.clone() / fe)
        })
    }

    /// `y f(e) >= x f(e)^2`: the hyperplane meets the closed ray
    /// `{s e : s >= x}` or is parallel to `e`.
    pub fn star_upper(&self, p: &HopfPoint<T>) -> Result<bool> {
        p.check_dim(self.dim())?;
        Ok(star_sides(&self.f, &self.y, p.direction().coords(), p.param()).0)
    }

    /// `y f(e) <= x f(e)^2`: the hyperplane meets the closed ray
    /// `{s e : s <= x}` or is parallel to `e`.
    pub fn star_lower(&self, p: &HopfPoint<T>) -> Result<bool> {
        p.check_dim(self.dim())?;
        Ok(star_sides(&self.f, &self.y, p.direction().coords(), p.param()).1)
    }

    /// `y - f(v)`; nonnegative means `v` lies on the side `f(v) <= y`.
    pub fn point_offset(&self, v: &[T]) -> T {
        self.y.clone() - dot(&self.f, v)
    }
}

/// Both sides of the bisection predicate for a raw representative:
/// `(y f(e) >= x f(e)^2, y f(e) <= x f(e)^2)`.
///
/// Rescaling `[f, y]` by any nonzero factor or `e` by a positive factor (with
/// `x` divided by it) leaves the pair unchanged; negating `e` and `x` swaps it.
pub fn star_sides<T: Scalar>(f: &[T], y: &T, e: &[T], x: &T) -> (bool, bool) {
    if annihilates(f, e) {
        return (true, true);
    }
    let residual = star_residual(f, y, e, x);
    (!residual.is_negative(), !residual.is_positive())
}

pub(crate) fn annihilates<T: Scalar>(f: &[T], e: &[T]) -> bool {
    let fe = dot(f, e);
    if T::EXACT {
        return fe.is_zero();
    }
    fe.is_negligible(&(max_abs(f) * norm_squared(e)))
}

/// `y f(e) - x f(e)^2`.
pub fn star_residual<T: Scalar>(f: &[T], y: &T, e: &[T], x: &T) -> T {
    let fe = dot(f, e);
    y.clone() * fe.clone() - x.clone() * fe.clone() * fe
}

/// Meeting point of a line through the origin with a hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub enum Incidence<T> {
    Parallel,
    /// The hyperplane contains `t e`.
    Finite(T),
}

/// Point `v = x e` on the line `R e`, stored as the canonical class `[e, x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfPoint<T> {
    e: Direction<T>,
    x: T,
}

impl<T: Scalar> HopfPoint<T> {
    /// Canonicalizes `e` and rescales `x` so that `x e` is unchanged.
    pub fn new(e: Direction<T>, x: T) -> Self {
        let (e, k) = e.canonical_with_factor();
        Self { e, x: x * k }
    }

    pub fn direction(&self) -> &Direction<T> {
        &self.e
    }

    pub fn param(&self) -> &T {
        &self.x
    }

    /// `v = x e`.
    pub fn point(&self) -> Vec<T> {
        scale_vec(self.e.coords(), &self.x)
    }

    pub fn dim(&self) -> usize {
        self.e.dim()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        self.e.check_dim(dim)
    }
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;
    use proptest::prelude::*;

    use super::*;
    use crate::scalar::{int, rat};

    type Q = BigRational;

    fn q(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&c| int(c)).collect()
    }

    fn plane(f: &[i64], y: Q) -> Hyperplane<Q> {
        Hyperplane::new(q(f), y).unwrap()
    }

    fn dir(e: &[i64]) -> Direction<Q> {
        Direction::from_ints(e).unwrap()
    }

    #[test]
    fn canonical_hyperplanes() {
        let h = plane(&[-2, 0], int(-4));
        assert_eq!(h.covector(), q(&[1, 0]).as_slice());
        assert_eq!(h.offset(), &int(2));

        let h = plane(&[0, 3], int(0));
        assert_eq!(h.covector(), q(&[0, 1]).as_slice());
        assert_eq!(h.offset(), &int(0));

        assert_eq!(
            Hyperplane::new(q(&[0, 0]), int(1)),
            Err(Error::ZeroCovector)
        );
    }

    #[test]
    fn float_canonical_hyperplane_has_unit_norm() {
        let h = Hyperplane::new(vec![-2.0f64, 0.0], -4.0).unwrap();
        assert_eq!(h.covector(), &[1.0, 0.0]);
        assert_eq!(*h.offset(), 2.0);
        let h = Hyperplane::new(vec![0.0f32, 3.0], 0.0).unwrap();
        assert_eq!(h.covector(), &[0.0, 1.0]);
    }

    #[test]
    fn incidence_examples() {
        let h = plane(&[1, 0], int(1));
        assert_eq!(h.incidence(&dir(&[0, 1])).unwrap(), Incidence::Parallel);
        assert_eq!(
            h.incidence(&dir(&[1, 1])).unwrap(),
            Incidence::Finite(int(1))
        );
        let h = plane(&[1, 1], int(0));
        assert_eq!(h.incidence(&dir(&[1, -1])).unwrap(), Incidence::Parallel);
        assert!(matches!(
            h.incidence(&dir(&[1, 1, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn star_examples() {
        let h = plane(&[1, 0], int(1));
        let p = HopfPoint::new(dir(&[1, 0]), int(1));
        assert!(h.star_upper(&p).unwrap() && h.star_lower(&p).unwrap());

        // incidence parameter t = 1 lies above x = 1/2
        let p = HopfPoint::new(dir(&[1, 1]), rat(1, 2));
        assert!(h.star_upper(&p).unwrap());
        assert!(!h.star_lower(&p).unwrap());

        let h = plane(&[1, 1], int(5));
        let p = HopfPoint::new(dir(&[1, -1]), int(7));
        assert!(h.star_upper(&p).unwrap() && h.star_lower(&p).unwrap());
    }

    #[test]
    fn hopf_point_canonicalization_preserves_v() {
        let p = HopfPoint::new(dir(&[-2, 4]), int(3));
        assert_eq!(p.direction().coords(), q(&[1, -2]).as_slice());
        assert_eq!(p.param(), &int(-6));
        assert_eq!(p.point(), q(&[-6, 12]));
        assert_eq!(p, HopfPoint::new(dir(&[2, -4]), int(-3)));
    }

    #[test]
    fn zero_direction_rejected() {
        assert_eq!(
            Direction::<Q>::from_ints(&[0, 0]),
            Err(Error::ZeroDirection)
        );
    }

    fn small() -> impl Strategy<Value = i64> {
        -6i64..=6
    }

    fn nonzero() -> impl Strategy<Value = i64> {
        prop_oneof![-6i64..=-1, 1i64..=6]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn star_is_representation_independent(
            f in prop::collection::vec(small(), 3),
            y in small(),
            e in prop::collection::vec(small(), 3),
            xn in small(), xd in 1i64..=4,
            t in nonzero(), td in 1i64..=3,
            s in nonzero(),
        ) {
            prop_assume!(f.iter().any(|&c| c != 0) && e.iter().any(|&c| c != 0));
            let x = rat(xn, xd);
            let t = rat(t, td);
            let base = Hyperplane::new(q(&f), int(y)).unwrap();
            let scaled = Hyperplane::new(
                q(&f).into_iter().map(|c| c * t.clone()).collect(),
                int(y) * t.clone(),
            ).unwrap();
            prop_assert_eq!(&base, &scaled);

            let p = HopfPoint::new(dir(&e), x.clone());
            let s = int(s);
            let rescaled = HopfPoint::new(
                Direction::new(q(&e).into_iter().map(|c| c * s.clone()).collect()).unwrap(),
                x.clone() / s.clone(),
            );
            prop_assert_eq!(&p, &rescaled);
            prop_assert_eq!(base.star_upper(&p).unwrap(), scaled.star_upper(&rescaled).unwrap());
            prop_assert_eq!(base.star_lower(&p).unwrap(), scaled.star_lower(&rescaled).unwrap());

            // raw representatives: positive rescaling preserves, antipode swaps
            let fy = (q(&f), int(y));
            let raw = star_sides(&fy.0, &fy.1, &q(&e), &x);
            let tf: Vec<Q> = fy.0.iter().map(|c| c.clone() * t.clone()).collect();
            prop_assert_eq!(raw, star_sides(&tf, &(fy.1.clone() * t.clone()), &q(&e), &x));
            let neg_e: Vec<Q> = q(&e).into_iter().map(|c| -c).collect();
            let flipped = star_sides(&fy.0, &fy.1, &neg_e, &-x.clone());
            prop_assert_eq!(raw, (flipped.1, flipped.0));
            // trichotomy
            prop_assert!(raw.0 || raw.1);
        }

        #[test]
        fn star_agrees_with_incidence_parameter(
            f in prop::collection::vec(small(), 2),
            y in small(),
            e in prop::collection::vec(small(), 2),
            xn in -20i64..=20, xd in 1i64..=4,
        ) {
            prop_assume!(f.iter().any(|&c| c != 0) && e.iter().any(|&c| c != 0));
            let h = Hyperplane::new(q(&f), int(y)).unwrap();
            let p = HopfPoint::new(dir(&e), rat(xn, xd));
            match h.incidence(p.direction()).unwrap() {
                Incidence::Parallel => {
                    prop_assert!(h.star_upper(&p).unwrap() && h.star_lower(&p).unwrap());
                }
                Incidence::Finite(t) => {
                    // dividing by f(e)^2 > 0 leaves t >= x whatever the sign of f(e)
                    prop_assert_eq!(h.star_upper(&p).unwrap(), &t >= p.param());
                    prop_assert_eq!(h.star_lower(&p).unwrap(), &t <= p.param());
                    let on_plane = h.point_offset(&scale_vec(p.direction().coords(), &t));
                    prop_assert!(on_plane.is_zero());
                }
            }
        }

        #[test]
        fn canonical_direction_is_projective_invariant(
            e in prop::collection::vec(small(), 3),
            t in nonzero(), td in 1i64..=5,
        ) {
            prop_assume!(e.iter().any(|&c| c != 0));
            let d = dir(&e);
            let t = rat(t, td);
            let scaled = Direction::new(q(&e).into_iter().map(|c| c * t.clone()).collect()).unwrap();
            prop_assert_eq!(d.canonical(), scaled.canonical());
            prop_assert_eq!(d.canonical(), d.neg().canonical());
            prop_assert!(d.canonical().is_canonical());
            prop_assert!(d.canonical().coords().iter().all(|c| c.is_integer()));
        }
    }
}
