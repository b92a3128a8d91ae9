//! Exact dense matrices over a field: Gaussian elimination, nullspaces, and
//! characteristic polynomials via the Faddeev-LeVerrier recurrence.

use super::poly::Poly;
use super::{Field, Ring};
use std::fmt;

#[derive(Clone, PartialEq)]
pub struct Mat<K> {
    pub rows: usize,
    pub cols: usize,
    a: Vec<K>,
}

impl<K: Ring> Mat<K> {
    pub fn zeros(rows: usize, cols: usize) -> Mat<K> {
        Mat { rows, cols, a: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Mat<K> {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Mat<K> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, a: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> K) -> Mat<K> {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn transpose(&self) -> Mat<K> {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, rhs: &Mat<K>) -> Mat<K> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: Mat<K> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)].clone();
                if aik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] =
                        out[(i, j)].clone() + aik.clone() * rhs[(k, j)].clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = K::zero();
                for j in 0..self.cols {
                    s = s + self[(i, j)].clone() * v[j].clone();
                }
                s
            })
            .collect()
    }

    pub fn add(&self, rhs: &Mat<K>) -> Mat<K> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() + rhs[(i, j)].clone()
        })
    }

    pub fn sub(&self, rhs: &Mat<K>) -> Mat<K> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].clone() - rhs[(i, j)].clone()
        })
    }

    pub fn scale(&self, k: &K) -> Mat<K> {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() * k.clone())
    }

    pub fn trace(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let mut s = K::zero();
        for i in 0..self.rows {
            s = s + self[(i, i)].clone();
        }
        s
    }

    pub fn map<L: Ring>(&self, f: impl Fn(&K) -> L) -> Mat<L> {
        Mat::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &Mat<K>) -> Mat<K> {
        assert_eq!(self.cols, other.cols);
        let mut a = self.a.clone();
        a.extend_from_slice(&other.a);
        Mat { rows: self.rows + other.rows, cols: self.cols, a }
    }
}

impl<K: Field> Mat<K> {
    /// Monic characteristic polynomial det(xI - A), ascending coefficients.
    /// Faddeev-LeVerrier: division only by the integers 1..=n, so the result
    /// stays exact over any field of characteristic zero.
    pub fn charpoly(&self) -> Poly<K> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![K::zero(); n + 1];
        coeffs[n] = K::one();
        let mut m = Mat::<K>::identity(n);
        for k in 1..=n {
            m = self.mul(&m);
            let c = -(m.trace() / K::from_i64(k as i64));
            for i in 0..n {
                m[(i, i)] = m[(i, i)].clone() + c.clone();
            }
            coeffs[n - k] = c;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn det(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let p0 = self.charpoly().coeff(0);
        if n % 2 == 0 {
            p0
        } else {
            -p0
        }
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (Mat<K>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = K::one() / m[(r, c)].clone();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let sub = f.clone() * m[(r, j)].clone();
                        m[(i, j)] = m[(i, j)].clone() - sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace, one Vec per basis vector.
    pub fn nullspace(&self) -> Vec<Vec<K>> {
        let (r, pivots) = self.rref();
        let mut basis = vec![];
        let free: Vec<usize> =
            (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        for &f in &free {
            let mut v = vec![K::zero(); self.cols];
            v[f] = K::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of A x = b, or None if inconsistent. For underdetermined
    /// systems the free variables are set to zero.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![K::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.a.swap(i * self.cols + c, j * self.cols + c);
        }
    }
}

impl<K> std::ops::Index<(usize, usize)> for Mat<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        debug_assert!(i < self.rows && j < self.cols);
        &self.a[i * self.cols + j]
    }
}

impl<K> std::ops::IndexMut<(usize, usize)> for Mat<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.a[i * self.cols + j]
    }
}

impl<K: fmt::Debug> fmt::Debug for Mat<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.a[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}
