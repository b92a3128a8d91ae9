//! Exact arithmetic: rationals, quadratic extensions, polynomials in one and
//! three variables, Sturm sequences, and exact dense matrices.
//!
//! Everything here is tolerance-free. The resultant locus of the three-body
//! decoupling search, the Euler quintic root isolation, and the exact W
//! spectra all come out of this layer.

pub mod mat;
pub mod mpoly;
pub mod poly;
pub mod quad;
pub mod sturm;

pub use mat::Mat;
pub use mpoly::MPoly;
pub use poly::Poly;
pub use quad::QuadExt;

use crate::cx::{Cdd, Cx};
use crate::dd::Dd;
use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arbitrary-precision rational; reduced form with positive denominator is
/// maintained by the backing implementation.
pub type Rat = num_rational::BigRational;

/// Commutative ring with identity, by-value ops.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
}

/// Ring in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {
    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }
    /// High-precision complex snapshot, for diagnostics and numeric handoff.
    fn to_cdd(&self) -> Cdd;
}

impl Ring for Rat {
    fn zero() -> Rat {
        Zero::zero()
    }
    fn one() -> Rat {
        One::one()
    }
    fn from_i64(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Field for Rat {
    fn to_cdd(&self) -> Cdd {
        Cx::real(rat_to_dd(self))
    }
}

impl<R: crate::cx::Real> Ring for Cx<R> {
    fn zero() -> Cx<R> {
        Cx::zero()
    }
    fn one() -> Cx<R> {
        Cx::one()
    }
    fn from_i64(n: i64) -> Cx<R> {
        Cx::real(R::from_i64(n))
    }
    fn is_zero(&self) -> bool {
        Cx::is_zero(*self)
    }
}

impl<R: crate::cx::Real> Field for Cx<R> {
    fn to_cdd(&self) -> Cdd {
        Cx::new(self.re.to_dd(), self.im.to_dd())
    }
}

/// Scalars that can certify rationality of their values. The exact
/// eigenvalue path runs over any such scalar: characteristic polynomial in
/// the scalar's own arithmetic, root hunting over the rationals.
pub trait ExactScalar: Field {
    fn as_rational(&self) -> Option<Rat>;
    fn from_rational(r: &Rat) -> Self;
}

impl ExactScalar for Rat {
    fn as_rational(&self) -> Option<Rat> {
        Some(self.clone())
    }
    fn from_rational(r: &Rat) -> Rat {
        r.clone()
    }
}

impl ExactScalar for QuadExt {
    fn as_rational(&self) -> Option<Rat> {
        self.as_rat()
    }
    fn from_rational(r: &Rat) -> QuadExt {
        QuadExt::from_rat(r.clone())
    }
}

/// Shorthand constructor.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// BigInt to double-double, accurate to the format's last ulp. Limbs are
/// folded in from the most significant end; each fold scales by an exact
/// power of two.
pub fn bigint_to_dd(x: &BigInt) -> Dd {
    let (sign, digits) = x.to_u32_digits();
    let mut acc = Dd::ZERO;
    let scale = Dd::from_f64(4294967296.0);
    for &limb in digits.iter().rev() {
        acc = acc * scale + Dd::from_i64(limb as i64);
    }
    if sign == Sign::Minus {
        acc = -acc;
    }
    acc
}

/// Rational to double-double with ~32 correct digits.
pub fn rat_to_dd(x: &Rat) -> Dd {
    bigint_to_dd(x.numer()) / bigint_to_dd(x.denom())
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    rat_to_dd(x).to_f64()
}

/// Parses `p/q`, integers, and decimal literals (optionally with exponent)
/// into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d: BigInt = den.trim().parse().map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rat::new(n, d));
    }
    // Decimal form: split mantissa/exponent, then shift the point.
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|er| format!("bad exponent in {s:?}: {er}"))?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(format!("no digits in {s:?}"));
    }
    let n: BigInt = digits.parse().map_err(|e| format!("bad number {s:?}: {e}"))?;
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        Rat::from_integer(n * ten.pow(shift as u32))
    } else {
        Rat::new(n, ten.pow((-shift) as u32))
    })
}

/// Exact square root of a nonnegative rational, when one exists. The
/// reduced numerator and denominator must both be perfect squares.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.numer().sign() == Sign::Minus {
        return None;
    }
    let ns = x.numer().sqrt();
    let ds = x.denom().sqrt();
    if &(&ns * &ns) == x.numer() && &(&ds * &ds) == x.denom() {
        Some(Rat::new(ns, ds))
    } else {
        None
    }
}

/// Signum as an i32: -1, 0, +1.
pub fn rat_sign(x: &Rat) -> i32 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bigint_to_dd_is_exact_for_wide_values() {
        let x = BigInt::parse_bytes(b"340282366920938463463374607431768211456", 10).unwrap(); // 2^128
        let d = bigint_to_dd(&x);
        let r = Dd::from_i64(2).powi(128);
        assert_eq!(d.hi, r.hi);
        assert!((d.lo - r.lo).abs() <= r.hi.abs() * 1e-30);
    }

    #[test]
    fn rat_to_dd_precision() {
        let x = rat(1, 7);
        let d = rat_to_dd(&x);
        let back = d.mul_f64(7.0) - Dd::ONE;
        assert!(back.abs().to_f64() < 1e-31);
        let neg = rat(-22, 7);
        assert!(rat_to_dd(&neg).to_f64() < -3.0);
    }

    #[test]
    fn rat_sqrt_detects_perfect_squares() {
        assert_eq!(rat_sqrt(&rat(49, 9)), Some(rat(7, 3)));
        assert_eq!(rat_sqrt(&rat(0, 1)), Some(rat(0, 1)));
        assert_eq!(rat_sqrt(&rat(2, 1)), None);
        assert_eq!(rat_sqrt(&rat(4, 6)), None);
        assert_eq!(rat_sqrt(&rat(-9, 1)), None);
        let wide = rat(1, 10_000_019 * 10_000_019);
        assert_eq!(rat_sqrt(&wide), Some(rat(1, 10_000_019)));
    }

    #[test]
    fn parse_rat_forms() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-3 / 4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("-1.5e-2").unwrap(), rat(-3, 200));
        assert_eq!(parse_rat("12").unwrap(), rat(12, 1));
        assert_eq!(parse_rat("2e3").unwrap(), rat(2000, 1));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }
}
