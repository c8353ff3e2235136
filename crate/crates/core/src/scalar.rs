//! Scalar abstraction shared by the exact (criterion) and floating (witness,
//! probe) code paths.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// A field element usable by the generic elimination routines.
///
/// Exact scalars test against zero; floating scalars test against a
/// tolerance relative to the magnitude of the matrix being reduced.
pub trait Scalar: Clone + Debug + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// `true` when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Zero test. `scale` is the largest magnitude in the surrounding
    /// computation and is ignored by exact scalars.
    fn is_negligible(&self, scale: &Self) -> bool;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn is_negligible(&self, scale: &Self) -> bool {
        self.abs() <= 1e-11 * scale.abs().max(f64::MIN_POSITIVE)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn is_negligible(&self, scale: &Self) -> bool {
        self.abs() <= 1e-5 * scale.abs().max(f32::MIN_POSITIVE)
    }

    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

/// Parse a rational from `"p/q"` or `"p"`. Rejects zero denominators.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => BigInt::from_str(t).ok().map(BigRational::from_integer),
    }
}

/// Exact string form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

pub fn is_integral(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// Scale a nonzero rational vector to the primitive integer vector with the
/// same direction (positive multiplier, gcd of entries 1).
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Multiply by the sign of the first nonzero entry so that entry is positive.
pub fn normalize_leading_sign<T: Scalar>(v: &mut [T]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}
