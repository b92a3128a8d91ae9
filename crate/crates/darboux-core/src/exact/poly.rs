//! Dense univariate polynomials over an exact ring, with Euclidean division,
//! gcd, square-free parts, and Sylvester resultants.

use super::{Field, Ring};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients in ascending degree; the leading coefficient is nonzero
/// unless the polynomial is zero (empty vector).
#[derive(Clone, PartialEq)]
pub struct Poly<K> {
    pub c: Vec<K>,
}

impl<K: Ring> Poly<K> {
    pub fn zero() -> Poly<K> {
        Poly { c: vec![] }
    }

    pub fn one() -> Poly<K> {
        Poly { c: vec![K::one()] }
    }

    pub fn x() -> Poly<K> {
        Poly { c: vec![K::zero(), K::one()] }
    }

    pub fn constant(k: K) -> Poly<K> {
        Poly::from_coeffs(vec![k])
    }

    pub fn from_coeffs(c: Vec<K>) -> Poly<K> {
        let mut p = Poly { c };
        p.trim();
        p
    }

    /// `(t - r)` as a polynomial.
    pub fn linear_root(r: K) -> Poly<K> {
        Poly::from_coeffs(vec![-r, K::one()])
    }

    fn trim(&mut self) {
        while matches!(self.c.last(), Some(k) if k.is_zero()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn lc(&self) -> K {
        self.c.last().cloned().unwrap_or_else(K::zero)
    }

    pub fn coeff(&self, i: usize) -> K {
        self.c.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for k in self.c.iter().rev() {
            acc = acc * x.clone() + k.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Poly<K> {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, k)| k.clone() * K::from_i64(i as i64))
            .collect();
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, k: &K) -> Poly<K> {
        Poly::from_coeffs(self.c.iter().map(|a| a.clone() * k.clone()).collect())
    }

    /// Coefficient-wise map into another ring.
    pub fn map<L: Ring>(&self, f: impl Fn(&K) -> L) -> Poly<L> {
        Poly::from_coeffs(self.c.iter().map(f).collect())
    }

    /// Composition self(g(t)). Used for local shifts t -> t0 + tau.
    pub fn compose(&self, g: &Poly<K>) -> Poly<K> {
        let mut acc = Poly::zero();
        for k in self.c.iter().rev() {
            acc = acc * g.clone() + Poly::constant(k.clone());
        }
        acc
    }

    /// Reverses coefficients against a reference degree `n >= deg`:
    /// returns t^n * self(1/t).
    pub fn reverse(&self, n: usize) -> Poly<K> {
        let mut c = vec![K::zero(); n + 1];
        for (i, k) in self.c.iter().enumerate() {
            assert!(i <= n, "reverse degree below polynomial degree");
            c[n - i] = k.clone();
        }
        Poly::from_coeffs(c)
    }

    /// Sylvester-determinant resultant; works over any commutative ring.
    pub fn resultant(&self, other: &Poly<K>) -> K {
        let (dp, dq) = match (self.deg(), other.deg()) {
            (Some(a), Some(b)) => (a, b),
            // Conventions: res(0, q) = 0 except res of two nonzero constants.
            _ => return K::zero(),
        };
        if dp == 0 && dq == 0 {
            return K::one();
        }
        if dp == 0 {
            return pow_ring(self.lc(), dq);
        }
        if dq == 0 {
            return pow_ring(other.lc(), dp);
        }
        let n = dp + dq;
        // Sylvester matrix: dq rows of p's coefficients, dp rows of q's.
        let mut rows: Vec<Vec<K>> = Vec::with_capacity(n);
        for r in 0..dq {
            let mut row = vec![K::zero(); n];
            for (i, k) in self.c.iter().rev().enumerate() {
                row[r + i] = k.clone();
            }
            rows.push(row);
        }
        for r in 0..dp {
            let mut row = vec![K::zero(); n];
            for (i, k) in other.c.iter().rev().enumerate() {
                row[r + i] = k.clone();
            }
            rows.push(row);
        }
        det_ring(&rows)
    }
}

fn pow_ring<K: Ring>(base: K, mut e: usize) -> K {
    let mut acc = K::one();
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        e >>= 1;
    }
    acc
}

/// Determinant over a commutative ring by memoized Laplace expansion on
/// column subsets. Exponential in n, meant for the small Sylvester matrices
/// that appear here (n <= 8 or so).
pub fn det_ring<K: Ring>(m: &[Vec<K>]) -> K {
    let n = m.len();
    assert!(n <= 20, "ring determinant limited to small matrices");
    if n == 0 {
        return K::one();
    }
    // memo[mask] = determinant of the submatrix using the first popcount(mask)
    // rows and the column set `mask`.
    let mut memo: Vec<Option<K>> = vec![None; 1usize << n];
    memo[0] = Some(K::one());
    for mask in 1usize..(1usize << n) {
        let row = (mask as u32).count_ones() as usize - 1;
        let mut acc = K::zero();
        // Cofactor sign (-1)^(row + position-in-mask).
        let mut sign_pos = row % 2 == 0;
        for col in 0..n {
            if mask & (1 << col) != 0 {
                let sub = memo[mask & !(1 << col)].clone().expect("memo order");
                let term = m[row][col].clone() * sub;
                acc = if sign_pos { acc + term } else { acc - term };
                sign_pos = !sign_pos;
            }
        }
        memo[mask] = Some(acc);
    }
    memo[(1usize << n) - 1].clone().unwrap()
}

impl<K: Field> Poly<K> {
    /// Euclidean division: self = q * div + r with deg r < deg div.
    pub fn divmod(&self, div: &Poly<K>) -> (Poly<K>, Poly<K>) {
        let dd = div.deg().expect("division by zero polynomial");
        let lc = div.lc();
        let mut r = self.clone();
        let mut q = vec![K::zero(); self.c.len().saturating_sub(dd)];
        while let Some(dr) = r.deg() {
            if dr < dd {
                break;
            }
            let f = r.lc() / lc.clone();
            let shift = dr - dd;
            q[shift] = f.clone();
            for (i, k) in div.c.iter().enumerate() {
                let idx = i + shift;
                let sub = k.clone() * f.clone();
                r.c[idx] = r.c[idx].clone() - sub;
            }
            r.trim();
        }
        (Poly::from_coeffs(q), r)
    }

    pub fn monic(&self) -> Poly<K> {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.lc();
        self.map(|k| k.clone() / lc.clone())
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Poly<K>) -> Poly<K> {
        assert!(
            !(self.is_zero() && other.is_zero()),
            "gcd of two zero polynomials"
        );
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// p / gcd(p, p'), monic: same roots, all simple.
    pub fn square_free_part(&self) -> Poly<K> {
        assert!(!self.is_zero(), "square-free part of zero polynomial");
        if self.deg() == Some(0) {
            return Poly::one();
        }
        let g = self.gcd(&self.derivative());
        let (q, r) = self.divmod(&g);
        debug_assert!(r.is_zero());
        q.monic()
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, div: &Poly<K>) -> Poly<K> {
        let (q, r) = self.divmod(div);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

impl<K: Ring> Add for Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: Poly<K>) -> Poly<K> {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).cloned().unwrap_or_else(K::zero);
            let b = rhs.c.get(i).cloned().unwrap_or_else(K::zero);
            c.push(a + b);
        }
        Poly::from_coeffs(c)
    }
}

impl<K: Ring> Sub for Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: Poly<K>) -> Poly<K> {
        self + (-rhs)
    }
}

impl<K: Ring> Neg for Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly::from_coeffs(self.c.into_iter().map(|k| -k).collect())
    }
}

impl<K: Ring> Mul for Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: Poly<K>) -> Poly<K> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![K::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(c)
    }
}

impl<K: Ring> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, k) in self.c.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{k:?}")?,
                1 => write!(f, "({k:?})*t")?,
                _ => write!(f, "({k:?})*t^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Plain-text serialization: ascending coefficients, whitespace-separated.
pub fn poly_to_text(p: &Poly<super::Rat>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.c.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")
}

/// Inverse of [`poly_to_text`]; accepts `p/q` and decimal forms per
/// [`super::parse_rat`].
pub fn poly_from_text(s: &str) -> Result<Poly<super::Rat>, String> {
    let c = s
        .split_whitespace()
        .map(super::parse_rat)
        .collect::<Result<Vec<_>, _>>()?;
    if c.is_empty() {
        return Err("empty polynomial text".into());
    }
    Ok(Poly::from_coeffs(c))
}
