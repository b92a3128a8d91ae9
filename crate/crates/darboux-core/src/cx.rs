//! Real-scalar abstraction and complex numbers over it.
//!
//! Numeric code in this crate is written once, generic over [`Real`], and run
//! with `f64` where speed matters (large n-gon scans) or [`Dd`] where the
//! tolerances demand headroom (defective eigenvalues, monodromy).

use crate::dd::Dd;
use std::fmt::{self, Debug};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

/// Floating-point scalar with the transcendental kit the solvers need.
pub trait Real:
    Copy
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(n: i64, d: i64) -> Self;
    fn to_f64(self) -> f64;
    /// Lossless widening into double-double.
    fn to_dd(self) -> Dd;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn powi(self, n: i32) -> Self;
    fn floor(self) -> Self;
    fn round(self) -> Self;
    fn pi() -> Self;
    fn tau() -> Self;
    /// Unit roundoff; convergence thresholds scale from this.
    fn eps() -> f64;
    fn max(self, other: Self) -> Self;
    fn min(self, other: Self) -> Self;
    fn is_finite(self) -> bool;
}

impl Real for f64 {
    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn from_i64(n: i64) -> f64 {
        n as f64
    }
    fn from_ratio(n: i64, d: i64) -> f64 {
        n as f64 / d as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn to_dd(self) -> Dd {
        Dd::from_f64(self)
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn exp(self) -> f64 {
        f64::exp(self)
    }
    fn ln(self) -> f64 {
        f64::ln(self)
    }
    fn sin_cos(self) -> (f64, f64) {
        f64::sin_cos(self)
    }
    fn powi(self, n: i32) -> f64 {
        f64::powi(self, n)
    }
    fn floor(self) -> f64 {
        f64::floor(self)
    }
    fn round(self) -> f64 {
        f64::round(self)
    }
    fn pi() -> f64 {
        std::f64::consts::PI
    }
    fn tau() -> f64 {
        std::f64::consts::TAU
    }
    fn eps() -> f64 {
        f64::EPSILON
    }
    fn max(self, other: f64) -> f64 {
        f64::max(self, other)
    }
    fn min(self, other: f64) -> f64 {
        f64::min(self, other)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Real for Dd {
    fn zero() -> Dd {
        Dd::ZERO
    }
    fn one() -> Dd {
        Dd::ONE
    }
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    fn from_i64(n: i64) -> Dd {
        Dd::from_i64(n)
    }
    fn from_ratio(n: i64, d: i64) -> Dd {
        Dd::from_ratio(n, d)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn to_dd(self) -> Dd {
        self
    }
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    fn exp(self) -> Dd {
        Dd::exp(self)
    }
    fn ln(self) -> Dd {
        Dd::ln(self)
    }
    fn sin_cos(self) -> (Dd, Dd) {
        Dd::sin_cos(self)
    }
    fn powi(self, n: i32) -> Dd {
        Dd::powi(self, n)
    }
    fn floor(self) -> Dd {
        Dd::floor(self)
    }
    fn round(self) -> Dd {
        Dd::round(self)
    }
    fn pi() -> Dd {
        Dd::PI
    }
    fn tau() -> Dd {
        Dd::TAU
    }
    fn eps() -> f64 {
        Dd::EPSILON
    }
    fn max(self, other: Dd) -> Dd {
        Dd::max(self, other)
    }
    fn min(self, other: Dd) -> Dd {
        Dd::min(self, other)
    }
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }
}

/// Complex number over a [`Real`] scalar.
#[derive(Clone, Copy, PartialEq)]
pub struct Cx<R> {
    pub re: R,
    pub im: R,
}

impl<R: Real> Cx<R> {
    #[inline]
    pub fn new(re: R, im: R) -> Cx<R> {
        Cx { re, im }
    }

    #[inline]
    pub fn zero() -> Cx<R> {
        Cx::new(R::zero(), R::zero())
    }

    #[inline]
    pub fn one() -> Cx<R> {
        Cx::new(R::one(), R::zero())
    }

    #[inline]
    pub fn i() -> Cx<R> {
        Cx::new(R::zero(), R::one())
    }

    #[inline]
    pub fn real(re: R) -> Cx<R> {
        Cx::new(re, R::zero())
    }

    pub fn from_f64s(re: f64, im: f64) -> Cx<R> {
        Cx::new(R::from_f64(re), R::from_f64(im))
    }

    #[inline]
    pub fn conj(self) -> Cx<R> {
        Cx::new(self.re, -self.im)
    }

    #[inline]
    pub fn norm_sqr(self) -> R {
        self.re * self.re + self.im * self.im
    }

    #[inline]
    pub fn abs(self) -> R {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(self) -> bool {
        self.re == R::zero() && self.im == R::zero()
    }

    pub fn recip(self) -> Cx<R> {
        let d = self.norm_sqr();
        Cx::new(self.re / d, -self.im / d)
    }

    pub fn scale(self, s: R) -> Cx<R> {
        Cx::new(self.re * s, self.im * s)
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(self) -> Cx<R> {
        if self.im == R::zero() {
            return if self.re < R::zero() {
                Cx::new(R::zero(), (-self.re).sqrt())
            } else {
                Cx::new(self.re.sqrt(), R::zero())
            };
        }
        let r = self.abs();
        let two = R::from_i64(2);
        let w = ((r + self.re.abs()) / two).sqrt();
        if self.re >= R::zero() {
            Cx::new(w, self.im / (w * two))
        } else {
            let v = self.im.abs() / (w * two);
            if self.im >= R::zero() {
                Cx::new(v, w)
            } else {
                Cx::new(v, -w)
            }
        }
    }

    /// e^z from the real exp and sin/cos.
    pub fn exp(self) -> Cx<R> {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cx::new(m * c, m * s)
    }

    /// Principal cube root, seeded in f64 polar form and polished by Newton
    /// on w^3 = z, so no high-precision arctangent is required.
    pub fn cbrt(self) -> Cx<R> {
        if self.is_zero() {
            return Cx::zero();
        }
        let rf = self.re.to_f64();
        let if_ = self.im.to_f64();
        let rad = (rf * rf + if_ * if_).sqrt().cbrt();
        let ang = if_.atan2(rf) / 3.0;
        let mut w: Cx<R> = Cx::from_f64s(rad * ang.cos(), rad * ang.sin());
        let three = Cx::real(R::from_i64(3));
        for _ in 0..3 {
            let w2 = w * w;
            w = w - (w * w2 - self) / (three * w2);
        }
        w
    }

    pub fn powi(self, n: i32) -> Cx<R> {
        if n == 0 {
            return Cx::one();
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut k = n.unsigned_abs();
        let mut acc = Cx::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn to_f64s(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl<R: Real> Add for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn add(self, rhs: Cx<R>) -> Cx<R> {
        Cx::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<R: Real> Sub for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn sub(self, rhs: Cx<R>) -> Cx<R> {
        Cx::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<R: Real> Mul for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn mul(self, rhs: Cx<R>) -> Cx<R> {
        Cx::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl<R: Real> Div for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn div(self, rhs: Cx<R>) -> Cx<R> {
        // Smith's algorithm avoids overflow from naive norm division.
        if rhs.im.abs() <= rhs.re.abs() {
            let r = rhs.im / rhs.re;
            let d = rhs.re + rhs.im * r;
            Cx::new((self.re + self.im * r) / d, (self.im - self.re * r) / d)
        } else {
            let r = rhs.re / rhs.im;
            let d = rhs.re * r + rhs.im;
            Cx::new((self.re * r + self.im) / d, (self.im * r - self.re) / d)
        }
    }
}

impl<R: Real> Neg for Cx<R> {
    type Output = Cx<R>;
    #[inline]
    fn neg(self) -> Cx<R> {
        Cx::new(-self.re, -self.im)
    }
}

impl<R: Real> AddAssign for Cx<R> {
    fn add_assign(&mut self, rhs: Cx<R>) {
        *self = *self + rhs;
    }
}

impl<R: Real> SubAssign for Cx<R> {
    fn sub_assign(&mut self, rhs: Cx<R>) {
        *self = *self - rhs;
    }
}

impl<R: Real> MulAssign for Cx<R> {
    fn mul_assign(&mut self, rhs: Cx<R>) {
        *self = *self * rhs;
    }
}

impl<R: Real> DivAssign for Cx<R> {
    fn div_assign(&mut self, rhs: Cx<R>) {
        *self = *self / rhs;
    }
}

impl<R: Real> Debug for Cx<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl<R: Real> fmt::Display for Cx<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64s();
        if im >= 0.0 {
            write!(f, "{re}+{im}i")
        } else {
            write!(f, "{re}{im}i")
        }
    }
}

pub type C64 = Cx<f64>;
pub type Cdd = Cx<Dd>;

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Cdd, b: Cdd, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol
    }

    #[test]
    fn field_ops() {
        let a: Cdd = Cx::from_f64s(1.5, -2.25);
        let b: Cdd = Cx::from_f64s(-0.5, 3.0);
        assert!(close(a * b / b, a, 1e-30));
        assert!(close(a + b - b, a, 0.0));
        assert!(close(a.recip() * a, Cx::one(), 1e-30));
    }

    #[test]
    fn principal_sqrt_branches() {
        let z: Cdd = Cx::from_f64s(-4.0, 0.0);
        let r = z.sqrt();
        assert!(close(r, Cx::from_f64s(0.0, 2.0), 1e-30));
        let w: Cdd = Cx::from_f64s(-3.0, -4.0);
        let s = w.sqrt();
        // Principal branch keeps Re >= 0.
        assert!(s.re >= Dd::ZERO);
        assert!(close(s * s, w, 1e-29));
        let p: Cdd = Cx::from_f64s(9.0, 0.0);
        assert!(close(p.sqrt(), Cx::from_f64s(3.0, 0.0), 1e-30));
    }

    #[test]
    fn principal_cbrt() {
        let z: Cdd = Cx::from_f64s(-8.0, 0.0);
        let c = z.cbrt();
        // Principal cube root of -8 is 1 + i sqrt(3).
        assert!(close(c * c * c, z, 1e-28));
        assert!(c.re.to_f64() > 0.9 && c.im.to_f64() > 1.7);
        let w: Cdd = Cx::from_f64s(27.0, 0.0);
        assert!(close(w.cbrt(), Cx::from_f64s(3.0, 0.0), 1e-29));
    }

    #[test]
    fn exp_rotation() {
        let z: Cdd = Cx::new(Dd::ZERO, Dd::PI);
        assert!(close(z.exp(), Cx::from_f64s(-1.0, 0.0), 1e-31));
        let y: Cdd = Cx::new(Dd::ONE, Dd::PI_2);
        let e = y.exp();
        assert!(close(e, Cx::new(Dd::ZERO, Dd::E), 1e-30));
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let z: Cdd = Cx::from_f64s(0.3, 0.7);
        assert!(close(z.powi(5), z * z * z * z * z, 1e-30));
        assert!(close(z.powi(-2) * z * z, Cx::one(), 1e-29));
    }
}
