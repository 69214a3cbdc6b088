//! Scalar backends.
//!
//! Every geometric and measure-theoretic routine in this crate is generic over
//! [`Scalar`], which is implemented for `f32`, `f64` and [`BigRational`]. The
//! rational backend is the exact mode: comparisons are decided without rounding
//! and canonical forms use integer coordinates of content one.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Ordered field element used by all routines in the crate.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// `true` for backends where every arithmetic operation is exact.
    const EXACT: bool;

    /// Converts an `f64`. Rational backends read the binary value exactly.
    fn from_f64(value: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Converts an exact rational, rounding on float backends.
    fn from_rational(value: &BigRational) -> Option<Self>;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    /// Positive factor that brings `coords` to canonical scale once divided out.
    ///
    /// Exact backends return the content (gcd of numerators over lcm of
    /// denominators); float backends return the Euclidean norm. Returns zero
    /// for the zero vector.
    fn projective_scale(coords: &[Self]) -> Self;

    /// Slack allowed when comparing a sum of `terms` weights against a
    /// threshold. Zero for exact backends.
    fn mass_slack(terms: usize) -> Self;

    /// Pivot test used by elimination routines: `true` when `self` is zero
    /// relative to `scale`.
    fn is_negligible(&self, scale: &Self) -> bool;
}

/// Sign of `coords` as dictated by the first nonzero entry, or `None` for zero.
pub fn leading_sign<T: Scalar>(coords: &[T]) -> Option<bool> {
    coords
        .iter()
        .find(|c| !c.is_zero())
        .map(|c| c.is_positive())
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn norm_squared<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

/// Largest absolute value among `coords` (zero for an empty slice).
pub fn max_abs<T: Scalar>(coords: &[T]) -> T {
    coords.iter().fold(T::zero(), |acc, c| {
        let a = c.abs();
        if a > acc {
            a
        } else {
            acc
        }
    })
}

pub fn scale_vec<T: Scalar>(v: &[T], factor: &T) -> Vec<T> {
    v.iter().map(|c| c.clone() * factor.clone()).collect()
}

/// Converts a vector between backends through `f64` (float targets) or an
/// exact dyadic read (rational targets).
pub fn convert_vec<S: Scalar, T: Scalar>(v: &[S]) -> Option<Vec<T>> {
    v.iter().map(|c| T::from_f64(c.to_f64())).collect()
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_f64(value: f64) -> Option<Self> {
                value.is_finite().then_some(value as $t)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn from_rational(value: &BigRational) -> Option<Self> {
                let v = <BigRational as Scalar>::to_f64(value);
                v.is_finite().then_some(v as $t)
            }

            fn from_ratio(numer: i64, denom: i64) -> Self {
                (numer as f64 / denom as f64) as $t
            }

            fn projective_scale(coords: &[Self]) -> Self {
                coords.iter().map(|c| c * c).sum::<$t>().sqrt()
            }

            fn mass_slack(terms: usize) -> Self {
                (terms.max(1) as $t) * 4.0 * <$t>::EPSILON
            }

            fn is_negligible(&self, scale: &Self) -> bool {
                self.abs() <= 1e-12 * scale.abs().max(<$t>::MIN_POSITIVE)
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_f64(value: f64) -> Option<Self> {
        BigRational::from_float(value)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn from_rational(value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn projective_scale(coords: &[Self]) -> Self {
        let mut gcd = BigInt::zero();
        let mut lcm = BigInt::one();
        for c in coords.iter().filter(|c| !c.is_zero()) {
            gcd = gcd.gcd(c.numer());
            lcm = lcm.lcm(c.denom());
        }
        if gcd.is_zero() {
            return BigRational::zero();
        }
        BigRational::new(gcd, lcm)
    }

    fn mass_slack(_terms: usize) -> Self {
        BigRational::zero()
    }

    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }
}

/// Builds a rational `numer/denom`; panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer-valued rational.
pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, an integer, or a decimal string (optionally with exponent)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p = BigInt::from_str_radix(p.trim(), 10).ok()?;
        let q = BigInt::from_str_radix(q.trim(), 10).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    if exponent.abs() > 4096 {
        return None;
    }
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let mut numer =
        BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
    if negative {
        numer = -numer;
    }
    let shift = exponent - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if shift >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-shift) as usize))
    };
    Some(value)
}

/// Renders a rational as `"p/q"`, or `"p"` when it is an integer.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}
