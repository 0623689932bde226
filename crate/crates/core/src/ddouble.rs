//! Double-double floating point: an unevaluated sum `hi + lo` of two `f64`
//! values carrying roughly 31 significant decimal digits.
//!
//! Only the operations the curve and partition-function engines need are
//! provided. The exponent range is that of `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default)]
pub struct DoubleF64 {
    hi: f64,
    lo: f64,
}

const LN2: DoubleF64 = DoubleF64 {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};
const PI: DoubleF64 = DoubleF64 {
    hi: std::f64::consts::PI,
    lo: 1.2246467991473532e-16,
};
const FRAC_PI_2: DoubleF64 = DoubleF64 {
    hi: std::f64::consts::FRAC_PI_2,
    lo: 6.123233995736766e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleF64 {
    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleF64 { hi, lo }
    }

    pub fn from_f64(v: f64) -> Self {
        DoubleF64 { hi: v, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (s, e) = quick_two_sum(p1, p2 + self.lo * b);
        DoubleF64 { hi: s, lo: e }
    }

    fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        DoubleF64 {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    fn round_f64(self) -> f64 {
        let r = self.hi.round();
        if r == self.hi {
            // hi already integral, lo decides ties
            let (s, _) = quick_two_sum(r, self.lo.round());
            s
        } else if (r - self.hi).abs() == 0.5 {
            (self.hi + self.lo).round()
        } else {
            r
        }
    }

    fn exp_dd(self) -> Self {
        if self.hi > 709.0 {
            return DoubleF64::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return DoubleF64::zero();
        }
        let k = (self.hi / LN2.hi).round();
        let r = (self - LN2.mul_f64(k)).ldexp(-10);
        // exp(r) - 1 by Taylor, |r| < 4e-4
        let mut term = r;
        let mut sum = r;
        for n in 2..=12 {
            term = term * r / DoubleF64::from_f64(n as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            sum = sum.mul_f64(2.0) + sum * sum;
        }
        (sum + DoubleF64::one()).ldexp(k as i32)
    }

    fn sin_cos_reduced(t: Self) -> (Self, Self) {
        let t2 = t * t;
        let mut s = t;
        let mut term = t;
        let mut n = 1.0;
        for _ in 0..20 {
            term = -(term * t2) / DoubleF64::from_f64((n + 1.0) * (n + 2.0));
            n += 2.0;
            s = s + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        let mut c = DoubleF64::one();
        let mut term = DoubleF64::one();
        let mut n = 0.0;
        for _ in 0..20 {
            term = -(term * t2) / DoubleF64::from_f64((n + 1.0) * (n + 2.0));
            n += 2.0;
            c = c + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        (s, c)
    }

    fn sin_cos_dd(self) -> (Self, Self) {
        let j = (self / FRAC_PI_2).round_f64();
        let t = self - FRAC_PI_2.mul_f64(j);
        let (s, c) = Self::sin_cos_reduced(t);
        match (j as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

impl PartialEq for DoubleF64 {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl fmt::Display for DoubleF64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == 0.0 {
            write!(f, "{}", self.hi)
        } else {
            write!(f, "{}{:+e}", self.hi, self.lo)
        }
    }
}

impl Add for DoubleF64 {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        DoubleF64 { hi, lo }
    }
}

impl Sub for DoubleF64 {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleF64 {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleF64 {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DoubleF64 {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        DoubleF64 { hi, lo }
    }
}

impl Div for DoubleF64 {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleF64 { hi, lo } + DoubleF64::from_f64(q3)
    }
}

impl Rem for DoubleF64 {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        let q = (self / b).hi.trunc();
        self - b.mul_f64(q)
    }
}

impl Zero for DoubleF64 {
    fn zero() -> Self {
        DoubleF64 { hi: 0.0, lo: 0.0 }
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleF64 {
    fn one() -> Self {
        DoubleF64 { hi: 1.0, lo: 0.0 }
    }
}

impl Num for DoubleF64 {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, _radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        s.parse::<f64>().map(DoubleF64::from_f64)
    }
}

impl FromPrimitive for DoubleF64 {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n - hi as i64) as f64;
        Some(DoubleF64 { hi, lo })
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(DoubleF64 { hi, lo })
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(DoubleF64::from_f64(n))
    }
}

impl ToPrimitive for DoubleF64 {
    fn to_i64(&self) -> Option<i64> {
        (self.hi + self.lo).to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        (self.hi + self.lo).to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        Some(self.hi + self.lo)
    }
}

impl Real for DoubleF64 {
    fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                DoubleF64::zero()
            } else {
                DoubleF64::from_f64(f64::NAN)
            };
        }
        let y = DoubleF64::from_f64(self.hi.sqrt());
        y + (self - y * y) / y.mul_f64(2.0)
    }
    fn exp(self) -> Self {
        self.exp_dd()
    }
    fn sin(self) -> Self {
        self.sin_cos_dd().0
    }
    fn cos(self) -> Self {
        self.sin_cos_dd().1
    }
    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }
    fn epsilon() -> Self {
        DoubleF64::from_f64(4.93038065763132e-32)
    }
    fn pi() -> Self {
        PI
    }
}
