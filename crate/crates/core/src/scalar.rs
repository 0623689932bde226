//! Scalar abstractions shared by the exact and the numerical halves of the crate.
//!
//! [`Int`] covers the integer rings used for lattices and group-ring series
//! (`i64`, `i128`, `BigInt`). [`Real`] covers the floating types used by the
//! curve and partition-function engines (`f32`, `f64`, [`DoubleF64`]).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::Neg;

use num_complex::Complex;
use num_integer::Integer;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub use crate::ddouble::DoubleF64;

/// Integer scalar for lattice coordinates, Gram entries and SW coefficients.
pub trait Int:
    Clone
    + Debug
    + Display
    + Ord
    + Hash
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Clone
        + Debug
        + Display
        + Ord
        + Hash
        + Integer
        + Signed
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Converts a small machine integer into any [`Int`].
pub fn int<I: Int>(v: i64) -> I {
    I::from_i64(v).expect("small integer fits every Int")
}

/// Real scalar for the numerical engines.
pub trait Real:
    Copy
    + Debug
    + Display
    + PartialOrd
    + Num
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn abs(self) -> Self;
    fn epsilon() -> Self;
    fn pi() -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).unwrap() / Self::from_i64(den).unwrap()
    }

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(self) -> bool {
        self.to_f64_lossy().is_finite()
    }
}

macro_rules! impl_real_float {
    ($t:ty) => {
        impl Real for $t {
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            fn exp(self) -> Self {
                <$t>::exp(self)
            }
            fn sin(self) -> Self {
                <$t>::sin(self)
            }
            fn cos(self) -> Self {
                <$t>::cos(self)
            }
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
            fn epsilon() -> Self {
                <$t>::EPSILON
            }
            fn pi() -> Self {
                std::f64::consts::PI as $t
            }
        }
    };
}

impl_real_float!(f32);
impl_real_float!(f64);

pub fn c<R: Real>(re: f64, im: f64) -> Complex<R> {
    Complex::new(R::from_f64_lossy(re), R::from_f64_lossy(im))
}

pub fn c_ratio<R: Real>(num: i64, den: i64) -> Complex<R> {
    Complex::new(R::from_ratio(num, den), R::zero())
}

pub fn cabs<R: Real>(z: Complex<R>) -> R {
    let (a, b) = (z.re.abs(), z.im.abs());
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big == R::zero() {
        return R::zero();
    }
    let q = small / big;
    big * (R::one() + q * q).sqrt()
}

pub fn cexp<R: Real>(z: Complex<R>) -> Complex<R> {
    let r = z.re.exp();
    Complex::new(r * z.im.cos(), r * z.im.sin())
}

/// Principal square root (branch cut on the negative real axis).
pub fn csqrt<R: Real>(z: Complex<R>) -> Complex<R> {
    let zero = R::zero();
    if z.re == zero && z.im == zero {
        return Complex::new(zero, zero);
    }
    let two = R::one() + R::one();
    let m = cabs(z);
    if z.re >= zero {
        let t = ((m + z.re) / two).sqrt();
        Complex::new(t, z.im / (two * t))
    } else {
        let t = ((m - z.re) / two).sqrt();
        let t = if z.im < zero { -t } else { t };
        Complex::new(z.im / (two * t), t)
    }
}

/// Integer power, negative exponents allowed.
pub fn cpowi<R: Real>(z: Complex<R>, n: i64) -> Complex<R> {
    let mut base = if n < 0 {
        Complex::new(R::one(), R::zero()) / z
    } else {
        z
    };
    let mut e = n.unsigned_abs();
    let mut acc = Complex::new(R::one(), R::zero());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}

pub fn to_c64<R: Real>(z: Complex<R>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

pub fn from_c64<R: Real>(z: Complex<f64>) -> Complex<R> {
    Complex::new(R::from_f64_lossy(z.re), R::from_f64_lossy(z.im))
}

/// Converts an exact integer into a real, going through its decimal form when
/// it does not fit a machine word.
pub fn int_to_real<I: Int, R: Real>(v: &I) -> R {
    if let Some(x) = v.to_i64() {
        return R::from_i64(x).unwrap();
    }
    R::from_f64_lossy(v.to_f64().unwrap_or(f64::NAN))
}
