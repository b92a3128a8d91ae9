//! The quadratic extension Q(√d): exact arithmetic for the equilateral
//! triangle (d = 3) and the complex collinear configurations (d = −7).

use super::{rat_to_dd, Field, Rat, Ring};
use crate::cx::{Cdd, Cx};
use crate::dd::Dd;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// `a + b·√d` with rational `a`, `b` and a fixed square-free integer `d`.
///
/// The radicand is a runtime value rather than a type parameter; purely
/// rational elements carry `d = 0` and may combine with any extension.
/// Mixing two different nonzero radicands is a programming error and panics.
#[derive(Clone, PartialEq)]
pub struct QuadExt {
    pub a: Rat,
    pub b: Rat,
    pub d: i64,
}

impl QuadExt {
    pub fn new(a: Rat, b: Rat, d: i64) -> QuadExt {
        let mut q = QuadExt { a, b, d };
        q.normalize();
        q
    }

    pub fn from_rat(a: Rat) -> QuadExt {
        QuadExt { a, b: Rat::zero(), d: 0 }
    }

    /// √d itself.
    pub fn sqrt_of(d: i64) -> QuadExt {
        QuadExt { a: Rat::zero(), b: Ring::one(), d }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational part when `b = 0`.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    pub fn conj(&self) -> QuadExt {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm a² − d·b².
    pub fn norm(&self) -> Rat {
        self.a.clone() * self.a.clone() - Rat::from_i64(self.d) * self.b.clone() * self.b.clone()
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            self.d = 0;
        }
    }

    fn join_d(&self, other: &QuadExt) -> i64 {
        match (self.d, other.d) {
            (0, d) => d,
            (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("mixed quadratic extensions: sqrt({d1}) vs sqrt({d2})"),
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        let d = self.join_d(&rhs);
        QuadExt::new(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        self + (-rhs)
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        let d = self.join_d(&rhs);
        let dd = Rat::from_i64(d);
        QuadExt::new(
            self.a.clone() * rhs.a.clone() + dd * self.b.clone() * rhs.b.clone(),
            self.a * rhs.b + self.b * rhs.a,
            d,
        )
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    fn div(self, rhs: QuadExt) -> QuadExt {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt({}))", rhs.d);
        let conj = rhs.conj();
        let num = self * conj;
        QuadExt::new(num.a / n.clone(), num.b / n, num.d)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Ring for QuadExt {
    fn zero() -> QuadExt {
        QuadExt::from_rat(Rat::zero())
    }
    fn one() -> QuadExt {
        QuadExt::from_rat(Ring::one())
    }
    fn from_i64(n: i64) -> QuadExt {
        QuadExt::from_rat(Ring::from_i64(n))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl Field for QuadExt {
    fn to_cdd(&self) -> Cdd {
        let a = rat_to_dd(&self.a);
        let b = rat_to_dd(&self.b);
        if self.d >= 0 {
            let r = Dd::from_i64(self.d).sqrt();
            Cx::real(a + b * r)
        } else {
            let r = Dd::from_i64(-self.d).sqrt();
            Cx::new(a, b * r)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q(a: (i64, i64), b: (i64, i64), d: i64) -> QuadExt {
        QuadExt::new(rat(a.0, a.1), rat(b.0, b.1), d)
    }

    #[test]
    fn arithmetic_in_q_sqrt3() {
        let x = q((1, 2), (1, 3), 3);
        let y = q((-2, 1), (1, 1), 3);
        let p = x.clone() * y.clone();
        // (1/2 - 2) + (1/2*1 + 1/3*(-2)) sqrt3 + 1/3*1*3  => a = -1 + 1, ...
        assert_eq!(p.a, rat(0, 1));
        assert_eq!(p.b, rat(-1, 6));
        let r = p / y;
        assert_eq!(r, x);
    }

    #[test]
    fn inverse_against_norm() {
        let x = q((3, 1), (1, 1), -7);
        let inv = QuadExt::one() / x.clone();
        let prod = x * inv;
        assert!(prod == QuadExt::one());
    }

    #[test]
    fn rational_elements_mix_with_any_radicand() {
        let r = QuadExt::from_i64(5);
        let x = q((0, 1), (1, 1), 3);
        let s = r.clone() + x.clone();
        assert_eq!(s.d, 3);
        let t = r * x;
        assert_eq!(t.b, rat(5, 1));
    }

    #[test]
    #[should_panic(expected = "mixed quadratic extensions")]
    fn mixing_radicands_panics() {
        let _ = q((0, 1), (1, 1), 3) + q((0, 1), (1, 1), 5);
    }

    #[test]
    fn numeric_snapshot() {
        let x = q((1, 1), (1, 1), -7); // 1 + i sqrt7
        let z = x.to_cdd();
        assert!((z.re.to_f64() - 1.0).abs() < 1e-30);
        assert!((z.im.to_f64() - 7f64.sqrt()).abs() < 1e-15);
        let y = q((1, 2), (1, 2), 3);
        assert!((y.to_cdd().re.to_f64() - (0.5 + 0.5 * 3f64.sqrt())).abs() < 1e-15);
    }
}
