//! Polynomials in the three masses with rational coefficients. Only what the
//! collinear resultant computation needs: ring arithmetic and evaluation.

use super::{Rat, Ring};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent triple for (m1, m2, m3).
pub type Exp = (u8, u8, u8);

/// Sparse polynomial in m1, m2, m3 over the rationals. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq)]
pub struct MPoly {
    pub terms: BTreeMap<Exp, Rat>,
}

impl MPoly {
    pub fn constant(k: Rat) -> MPoly {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert((0, 0, 0), k);
        }
        MPoly { terms }
    }

    /// Single variable: 0 -> m1, 1 -> m2, 2 -> m3.
    pub fn var(i: usize) -> MPoly {
        let e = match i {
            0 => (1, 0, 0),
            1 => (0, 1, 0),
            2 => (0, 0, 1),
            _ => panic!("variable index out of range"),
        };
        let mut terms = BTreeMap::new();
        terms.insert(e, Rat::from_i64(1));
        MPoly { terms }
    }

    pub fn term(k: Rat, e: Exp) -> MPoly {
        let mut terms = BTreeMap::new();
        if !k.is_zero() {
            terms.insert(e, k);
        }
        MPoly { terms }
    }

    /// Linear combination c0 + c1*m1 + c2*m2 + c3*m3 from integer weights.
    pub fn linear(c0: i64, c1: i64, c2: i64, c3: i64) -> MPoly {
        let mut p = MPoly::constant(Rat::from_i64(c0));
        p = p + MPoly::term(Rat::from_i64(c1), (1, 0, 0));
        p = p + MPoly::term(Rat::from_i64(c2), (0, 1, 0));
        p = p + MPoly::term(Rat::from_i64(c3), (0, 0, 1));
        p
    }

    pub fn eval(&self, m: &[Rat; 3]) -> Rat {
        let mut acc = Rat::from_i64(0);
        for (&(a, b, c), k) in &self.terms {
            let mut t = k.clone();
            for _ in 0..a {
                t *= m[0].clone();
            }
            for _ in 0..b {
                t *= m[1].clone();
            }
            for _ in 0..c {
                t *= m[2].clone();
            }
            acc += t;
        }
        acc
    }

    /// The rational value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::from_i64(0)),
            1 => self.terms.get(&(0, 0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|&(a, b, c)| a as usize + b as usize + c as usize)
            .max()
            .unwrap_or(0)
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }
    fn one() -> Self {
        MPoly::constant(Rat::from_i64(1))
    }
    fn from_i64(n: i64) -> Self {
        MPoly::constant(Rat::from_i64(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        for (e, k) in rhs.terms {
            let entry = self.terms.entry(e).or_insert_with(|| Rat::from_i64(0));
            *entry += k;
            if entry.is_zero() {
                self.terms.remove(&e);
            }
        }
        self
    }
}

impl std::ops::Sub for MPoly {
    type Output = MPoly;
    fn sub(self, rhs: MPoly) -> MPoly {
        self + (-rhs)
    }
}

impl std::ops::Neg for MPoly {
    type Output = MPoly;
    fn neg(mut self) -> MPoly {
        for k in self.terms.values_mut() {
            *k = -k.clone();
        }
        self
    }
}

impl std::ops::Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        let mut out: BTreeMap<Exp, Rat> = BTreeMap::new();
        for (&(a1, b1, c1), k1) in &self.terms {
            for (&(a2, b2, c2), k2) in &rhs.terms {
                let e = (a1 + a2, b1 + b2, c1 + c2);
                let entry = out.entry(e).or_insert_with(|| Rat::from_i64(0));
                *entry += k1.clone() * k2.clone();
            }
        }
        out.retain(|_, k| !k.is_zero());
        MPoly { terms: out }
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b, c), k) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{k}")?;
            for (e, name) in [(a, "m1"), (b, "m2"), (c, "m3")] {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn arithmetic_and_eval() {
        let m1 = MPoly::var(0);
        let m2 = MPoly::var(1);
        let m3 = MPoly::var(2);
        let p = (m1.clone() + m2.clone()) * (m1.clone() - m3.clone())
            + MPoly::constant(rat(1, 2));
        let at = [rat(2, 1), rat(3, 1), rat(5, 1)];
        // (2+3)(2-5) + 1/2 = -15 + 1/2
        assert_eq!(p.eval(&at), rat(-29, 2));
        assert_eq!((m2.clone() - m2.clone()).terms.len(), 0);
        assert!(MPoly::zero().is_zero());
    }

    #[test]
    fn linear_builder() {
        let p = MPoly::linear(-1, -3, -2, 0);
        assert_eq!(p.eval(&[rat(1, 3), rat(1, 3), rat(1, 3)]), rat(-8, 3));
        assert_eq!(p.total_degree(), 1);
    }

    #[test]
    fn constant_detection() {
        let p = MPoly::linear(7, 0, 0, 0);
        assert_eq!(p.as_constant(), Some(rat(7, 1)));
        assert!(MPoly::var(1).as_constant().is_none());
    }
}
