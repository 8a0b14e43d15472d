//! Double-double and quad-double arithmetic, and the scalar abstraction
//! shared by the precision tiers of the eigensolver.
//!
//! A [`DoubleDouble`] stores `hi + lo` with `|lo| <= ulp(hi)/2`, giving about
//! 31 significant decimal digits. A [`QuadDouble`] carries four
//! non-overlapping components (about 62 digits); its kernels follow Hida,
//! Li and Bailey's QD library. Addition uses Knuth's TwoSum, products use an
//! FMA-based TwoProd.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    /// 2^-104, the unit roundoff of the format.
    pub const EPSILON: f64 = 4.930_380_657_631_324e-32;

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    /// Exact sum of two doubles.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    /// Exact product of two doubles.
    #[inline]
    pub fn from_product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let p2 = self.lo.mul_add(b, p2);
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    /// Square root by one Newton correction of the double estimate.
    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        if self.is_negative() {
            return Self { hi: f64::NAN, lo: f64::NAN };
        }
        let x = self.hi.sqrt();
        let residual = self - Self::from_product(x, x);
        let (hi, lo) = quick_two_sum(x, residual.hi / (2.0 * x));
        Self { hi, lo }
    }

    /// Midpoint of two values, exact up to the final renormalisation.
    #[inline]
    pub fn midpoint(self, other: Self) -> Self {
        (self + other).mul_f64(0.5)
    }
}

impl From<f64> for DoubleDouble {
    #[inline]
    fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl SubAssign for DoubleDouble {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl MulAssign for DoubleDouble {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Div for DoubleDouble {
    type Output = Self;

    /// Long division: three quotient digits.
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from(q3)
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} + {:e}", self.hi, self.lo)
    }
}

/// Arithmetic the eigensolver needs from a working precision.
pub trait Scalar:
    Copy
    + PartialOrd
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + From<f64>
{
    /// Unit roundoff of the format.
    const EPSILON: f64;

    fn to_f64(self) -> f64;
    /// `a * b`, exact when the format can hold it.
    fn exact_product(a: f64, b: f64) -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;

    fn zero() -> Self {
        Self::from(0.0)
    }

    fn half_sum(self, other: Self) -> Self {
        (self + other) * Self::from(0.5)
    }
}

impl Scalar for f64 {
    const EPSILON: f64 = f64::EPSILON / 2.0;

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn exact_product(a: f64, b: f64) -> Self {
        a * b
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

impl Scalar for DoubleDouble {
    const EPSILON: f64 = DoubleDouble::EPSILON;

    #[inline]
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
    #[inline]
    fn exact_product(a: f64, b: f64) -> Self {
        DoubleDouble::from_product(a, b)
    }
    #[inline]
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    #[inline]
    fn half_sum(self, other: Self) -> Self {
        self.midpoint(other)
    }
}

#[inline]
fn three_sum(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (a, t3) = two_sum(c, t1);
    let (b, c) = two_sum(t2, t3);
    (a, b, c)
}

#[inline]
fn three_sum2(a: f64, b: f64, c: f64) -> (f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (a, t3) = two_sum(c, t1);
    (a, t2 + t3)
}

/// Four-component extended float, `x[0] + x[1] + x[2] + x[3]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadDouble(pub [f64; 4]);

impl QuadDouble {
    pub const ZERO: Self = Self([0.0; 4]);
    /// 2^-209.
    pub const EPSILON: f64 = 1.215_432_671_457_254e-63;

    fn renorm(c0: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> Self {
        if !c0.is_finite() {
            return Self([c0, 0.0, 0.0, 0.0]);
        }
        let (s0, c4) = quick_two_sum(c3, c4);
        let (s0, c3) = quick_two_sum(c2, s0);
        let (s0, c2) = quick_two_sum(c1, s0);
        let (c0, c1) = quick_two_sum(c0, s0);

        let (mut s0, mut s1, mut s2, mut s3) = (c0, c1, 0.0, 0.0);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c2);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c3);
                if s3 != 0.0 {
                    s3 += c4;
                } else {
                    s2 += c4;
                }
            } else {
                (s1, s2) = quick_two_sum(s1, c3);
                if s2 != 0.0 {
                    (s2, s3) = quick_two_sum(s2, c4);
                } else {
                    (s1, s2) = quick_two_sum(s1, c4);
                }
            }
        } else {
            (s0, s1) = quick_two_sum(s0, c2);
            if s1 != 0.0 {
                (s1, s2) = quick_two_sum(s1, c3);
                if s2 != 0.0 {
                    (s2, s3) = quick_two_sum(s2, c4);
                } else {
                    (s1, s2) = quick_two_sum(s1, c4);
                }
            } else {
                (s0, s1) = quick_two_sum(s0, c3);
                if s1 != 0.0 {
                    (s1, s2) = quick_two_sum(s1, c4);
                } else {
                    (s0, s1) = quick_two_sum(s0, c4);
                }
            }
        }
        Self([s0, s1, s2, s3])
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0[0] + self.0[1]
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.0[0] < 0.0
    }

    pub fn abs(self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let a = self.0;
        let (p0, q0) = two_prod(a[0], b);
        let (p1, q1) = two_prod(a[1], b);
        let (p2, q2) = two_prod(a[2], b);
        let p3 = a[3] * b;
        let (s1, s2) = two_sum(q0, p1);
        let (s2, q1, p2) = three_sum(s2, q1, p2);
        let (q1, q2) = three_sum2(q1, q2, p3);
        Self::renorm(p0, s1, s2, q1, q2 + p2)
    }

    /// Square root by Newton iteration on `1/sqrt(x)`.
    pub fn sqrt(self) -> Self {
        if self.0[0] == 0.0 {
            return Self::ZERO;
        }
        if self.is_negative() {
            return Self([f64::NAN, 0.0, 0.0, 0.0]);
        }
        let half = self.mul_f64(0.5);
        let mut r = Self::from(1.0 / self.0[0].sqrt());
        for _ in 0..3 {
            // r += r (1/2 - (x/2) r^2)
            r = r + r * (Self::from(0.5) - half * r * r);
        }
        self * r
    }
}

impl From<f64> for QuadDouble {
    #[inline]
    fn from(v: f64) -> Self {
        Self([v, 0.0, 0.0, 0.0])
    }
}

impl From<DoubleDouble> for QuadDouble {
    #[inline]
    fn from(v: DoubleDouble) -> Self {
        Self([v.hi, v.lo, 0.0, 0.0])
    }
}

impl Add for QuadDouble {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let (s0, t0) = two_sum(a[0], b[0]);
        let (s1, t1) = two_sum(a[1], b[1]);
        let (s2, t2) = two_sum(a[2], b[2]);
        let (s3, t3) = two_sum(a[3], b[3]);
        let (s1, t0) = two_sum(s1, t0);
        let (s2, t0, t1) = three_sum(s2, t0, t1);
        let (s3, t0) = three_sum2(s3, t0, t2);
        Self::renorm(s0, s1, s2, s3, t0 + t1 + t3)
    }
}

impl Neg for QuadDouble {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        let a = self.0;
        Self([-a[0], -a[1], -a[2], -a[3]])
    }
}

impl Sub for QuadDouble {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for QuadDouble {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let (p0, q0) = two_prod(a[0], b[0]);
        let (p1, q1) = two_prod(a[0], b[1]);
        let (p2, q2) = two_prod(a[1], b[0]);
        let (p3, q3) = two_prod(a[0], b[2]);
        let (p4, q4) = two_prod(a[1], b[1]);
        let (p5, q5) = two_prod(a[2], b[0]);

        let (p1, p2, q0) = three_sum(p1, p2, q0);
        let (p2, q1, q2) = three_sum(p2, q1, q2);
        let (p3, p4, p5) = three_sum(p3, p4, p5);
        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        let s2 = s2 + (t0 + t1);

        let s1 = s1
            + (a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0] + q0 + q3 + q4 + q5);
        Self::renorm(p0, p1, s0, s1, s2)
    }
}

impl Div for QuadDouble {
    type Output = Self;

    /// Long division, five quotient digits.
    fn div(self, rhs: Self) -> Self {
        let b0 = rhs.0[0];
        let q0 = self.0[0] / b0;
        let r = self - rhs.mul_f64(q0);
        let q1 = r.0[0] / b0;
        let r = r - rhs.mul_f64(q1);
        let q2 = r.0[0] / b0;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.0[0] / b0;
        let r = r - rhs.mul_f64(q3);
        let q4 = r.0[0] / b0;
        Self::renorm(q0, q1, q2, q3, q4)
    }
}

impl PartialEq for QuadDouble {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for QuadDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        for (x, y) in self.0.iter().zip(&other.0) {
            match x.partial_cmp(y) {
                Some(Ordering::Equal) => continue,
                ord => return ord,
            }
        }
        Some(Ordering::Equal)
    }
}

impl Scalar for QuadDouble {
    const EPSILON: f64 = QuadDouble::EPSILON;

    #[inline]
    fn to_f64(self) -> f64 {
        QuadDouble::to_f64(self)
    }
    #[inline]
    fn exact_product(a: f64, b: f64) -> Self {
        QuadDouble::from(DoubleDouble::from_product(a, b))
    }
    #[inline]
    fn abs(self) -> Self {
        QuadDouble::abs(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        QuadDouble::sqrt(self)
    }
    #[inline]
    fn half_sum(self, other: Self) -> Self {
        (self + other).mul_f64(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_keeps_bits_lost_in_double() {
        let x = DoubleDouble::from(1.0) + DoubleDouble::from(1e-20);
        assert_eq!(x.hi, 1.0);
        assert_eq!(x.lo, 1e-20);
        let y = x - DoubleDouble::from(1.0);
        assert_eq!(y.to_f64(), 1e-20);
    }

    #[test]
    fn product_is_exact_for_two_doubles() {
        let a = 1.0 + f64::EPSILON;
        let p = DoubleDouble::from_product(a, a);
        // (1+e)^2 = 1 + 2e + e^2
        assert_eq!(p.hi, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(p.lo, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn division_and_sqrt_round_trip() {
        let three = DoubleDouble::from(3.0);
        let third = DoubleDouble::ONE / three;
        let back = third * three - DoubleDouble::ONE;
        assert!(back.to_f64().abs() < 1e-31);

        let two = DoubleDouble::from(2.0);
        let r = two.sqrt();
        let err = r * r - two;
        assert!(err.to_f64().abs() < 1e-31);
        assert_eq!(r.hi, std::f64::consts::SQRT_2);
    }

    #[test]
    fn ordering_uses_low_word() {
        let a = DoubleDouble::new(1.0, 1e-20);
        let b = DoubleDouble::new(1.0, 2e-20);
        assert!(a < b);
        assert!(-b < -a);
        assert!(a.midpoint(b) > a && a.midpoint(b) < b);
    }

    fn qd_residual(x: QuadDouble) -> f64 {
        x.0.iter().map(|c| c.abs()).sum()
    }

    #[test]
    fn quad_double_round_trips() {
        let three = QuadDouble::from(3.0);
        let third = QuadDouble::from(1.0) / three;
        assert!(qd_residual(third * three - QuadDouble::from(1.0)) < 1e-62);

        let two = QuadDouble::from(2.0);
        let r = two.sqrt();
        assert!(qd_residual(r * r - two) < 1e-62);
        assert_eq!(r.0[0], std::f64::consts::SQRT_2);

        // (1 + 2^-100)^2 - 1 - 2^-99 = 2^-200
        let tiny = 2f64.powi(-100);
        let x = QuadDouble::from(1.0) + QuadDouble::from(tiny);
        let y = x * x - QuadDouble::from(1.0) - QuadDouble::from(2.0 * tiny);
        assert_eq!(y.to_f64(), 2f64.powi(-200));
    }

    #[test]
    fn quad_double_ordering() {
        let a = QuadDouble::from(1.0) + QuadDouble::from(1e-40);
        let b = QuadDouble::from(1.0) + QuadDouble::from(2e-40);
        assert!(a < b);
        assert!(-b < -a);
        let m = a.half_sum(b);
        assert!(m > a && m < b);
        assert!((a.mul_f64(3.0) - a - a - a).to_f64().abs() < 1e-62);
    }
}

