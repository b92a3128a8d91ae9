//! Complex dense linear algebra over any [`Real`] scalar, sized for the small
//! matrices of this crate (at most a few dozen rows). Eigenvalues go through
//! the characteristic polynomial and a simultaneous root iteration; ranks and
//! nullspaces go through a Jacobi eigensolve of the Gram matrix, which keeps
//! every decision tied to singular values rather than pivot luck.

use crate::cx::{Cx, Real};
use crate::dd::Dd;
use crate::exact::{self, Mat, Rat};
use crate::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct CMat<R: Real> {
    pub rows: usize,
    pub cols: usize,
    a: Vec<Cx<R>>,
}

impl<R: Real> CMat<R> {
    pub fn zeros(rows: usize, cols: usize) -> CMat<R> {
        CMat { rows, cols, a: vec![Cx::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> CMat<R> {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cx::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Cx<R>) -> CMat<R> {
        let mut m = CMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> CMat<R> {
        CMat::from_fn(rows, cols, |i, j| Cx::real(f(i, j)))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat<R> {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &CMat<R>) -> CMat<R> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: CMat<R> = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + aik * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Cx<R>]) -> Vec<Cx<R>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Cx::zero();
                for j in 0..self.cols {
                    s = s + self[(i, j)] * v[j];
                }
                s
            })
            .collect()
    }

    pub fn add(&self, rhs: &CMat<R>) -> CMat<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + rhs[(i, j)])
    }

    pub fn sub(&self, rhs: &CMat<R>) -> CMat<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - rhs[(i, j)])
    }

    pub fn scale(&self, k: Cx<R>) -> CMat<R> {
        CMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)] * k)
    }

    /// Subtracts k from the diagonal (A - kI).
    pub fn shift(&self, k: Cx<R>) -> CMat<R> {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] = m[(i, i)] - k;
        }
        m
    }

    pub fn trace(&self) -> Cx<R> {
        assert_eq!(self.rows, self.cols);
        let mut s = Cx::zero();
        for i in 0..self.rows {
            s = s + self[(i, i)];
        }
        s
    }

    pub fn max_abs(&self) -> R {
        let mut m = R::zero();
        for z in &self.a {
            m = m.max(z.abs());
        }
        m
    }

    pub fn vstack(&self, other: &CMat<R>) -> CMat<R> {
        assert_eq!(self.cols, other.cols);
        let mut a = self.a.clone();
        a.extend_from_slice(&other.a);
        CMat { rows: self.rows + other.rows, cols: self.cols, a }
    }

    pub fn hstack(&self, other: &CMat<R>) -> CMat<R> {
        assert_eq!(self.rows, other.rows);
        CMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    pub fn col(&self, j: usize) -> Vec<Cx<R>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn from_cols(cols: &[Vec<Cx<R>>]) -> CMat<R> {
        let rows = cols.first().map_or(0, |c| c.len());
        CMat::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn map_scalar<S: Real>(&self, f: impl Fn(&Cx<R>) -> Cx<S>) -> CMat<S> {
        CMat::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)]))
    }
}

impl<R: Real> std::ops::Index<(usize, usize)> for CMat<R> {
    type Output = Cx<R>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.a[i * self.cols + j]
    }
}

impl<R: Real> std::ops::IndexMut<(usize, usize)> for CMat<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.a[i * self.cols + j]
    }
}

impl<R: Real> std::fmt::Debug for CMat<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re.to_f64(), z.im.to_f64())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Exact rational matrix lifted to complex double-double entries.
pub fn cmat_from_rat(m: &Mat<Rat>) -> CMat<Dd> {
    CMat::from_fn(m.rows, m.cols, |i, j| Cx::real(exact::rat_to_dd(&m[(i, j)])))
}

/// Conjugate inner product <a, b> = sum conj(a_i) b_i.
pub fn cdot<R: Real>(a: &[Cx<R>], b: &[Cx<R>]) -> Cx<R> {
    assert_eq!(a.len(), b.len());
    let mut s = Cx::zero();
    for (x, y) in a.iter().zip(b) {
        s = s + x.conj() * *y;
    }
    s
}

pub fn vnorm<R: Real>(a: &[Cx<R>]) -> R {
    cdot(a, a).re.max(R::zero()).sqrt()
}

/// Monic characteristic polynomial by Faddeev-LeVerrier, coefficients
/// ascending. Exact in spirit (integer divisions only), so double-double
/// entries keep near-full precision.
pub fn charpoly<R: Real>(a: &CMat<R>) -> Vec<Cx<R>> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut coeffs = vec![Cx::zero(); n + 1];
    coeffs[n] = Cx::one();
    let mut m = CMat::<R>::identity(n);
    for k in 1..=n {
        m = a.mul(&m);
        let c = -(m.trace().scale(R::one() / R::from_i64(k as i64)));
        for i in 0..n {
            m[(i, i)] = m[(i, i)] + c;
        }
        coeffs[n - k] = c;
    }
    coeffs
}

/// All roots of a polynomial (ascending coefficients) by the Aberth-Ehrlich
/// simultaneous iteration. Multiple roots come back as tight clusters; with
/// double-double scalars a double root clusters at about 1e-16.
pub fn poly_roots<R: Real>(coeffs: &[Cx<R>]) -> Result<Vec<Cx<R>>> {
    let mut c: Vec<Cx<R>> = coeffs.to_vec();
    while matches!(c.last(), Some(z) if z.is_zero()) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = c[n];
    let c: Vec<Cx<R>> = c.iter().map(|z| *z * lead.recip()).collect();
    let dc: Vec<Cx<R>> = (1..=n)
        .map(|k| c[k].scale(R::from_i64(k as i64)))
        .collect();

    // Initial guesses on a staggered spiral inside the Cauchy disk.
    let mut radius = R::zero();
    for k in 0..n {
        radius = radius.max(c[k].abs());
    }
    radius = radius + R::one();
    let mut z: Vec<Cx<R>> = (0..n)
        .map(|k| {
            let angle = R::tau() * R::from_f64((k as f64 + 0.37) / n as f64);
            let (s, co) = angle.sin_cos();
            let r = radius * R::from_f64(0.4 + 0.6 * (k + 1) as f64 / n as f64);
            Cx::new(co * r, s * r)
        })
        .collect();

    let eps = R::from_f64(R::eps() * 16.0);
    let horner = |x: Cx<R>, poly: &[Cx<R>]| {
        let mut acc = Cx::zero();
        for k in poly.iter().rev() {
            acc = acc * x + *k;
        }
        acc
    };
    // Scale of p near x, for a backward-error stopping rule.
    let bound = |x: Cx<R>| {
        let ax = x.abs();
        let mut b = R::zero();
        let mut pw = R::one();
        for k in &c {
            b = b + k.abs() * pw;
            pw = pw * ax;
        }
        b
    };

    let mut done = vec![false; n];
    for _ in 0..1000 {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let p = horner(z[i], &c);
            if p.abs() <= eps * bound(z[i]) {
                done[i] = true;
                continue;
            }
            let dp = horner(z[i], &dc);
            let w = if dp.is_zero() {
                // Stationary point of p; nudge off it.
                Cx::real(R::from_f64(R::eps().sqrt()) * (R::one() + z[i].abs()))
            } else {
                p * dp.recip()
            };
            let mut repel = Cx::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if !d.is_zero() {
                        repel = repel + d.recip();
                    }
                }
            }
            let denom = Cx::one() - w * repel;
            let step = if denom.is_zero() { w } else { w * denom.recip() };
            z[i] = z[i] - step;
            if step.abs() <= eps * (R::one() + z[i].abs()) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            let mut out = z;
            out.sort_by(|a, b| {
                (a.re.to_f64(), a.im.to_f64())
                    .partial_cmp(&(b.re.to_f64(), b.im.to_f64()))
                    .unwrap()
            });
            return Ok(out);
        }
    }
    Err(Error::NoConvergence("root iteration stalled".into()))
}

/// Eigenvalues of a general square matrix, sorted by (re, im).
pub fn eigenvalues<R: Real>(a: &CMat<R>) -> Result<Vec<Cx<R>>> {
    poly_roots(&charpoly(a))
}

/// Groups nearby values; returns (centroid, members) sorted by centroid
/// (re, im). `tol` is absolute.
pub fn cluster_groups<R: Real>(vals: &[Cx<R>], tol: R) -> Vec<(Cx<R>, Vec<Cx<R>>)> {
    let mut rest: Vec<Cx<R>> = vals.to_vec();
    let mut out = vec![];
    while let Some(seed) = rest.pop() {
        let mut members = vec![seed];
        // Grow the cluster until closed under the tolerance.
        loop {
            let before = members.len();
            rest.retain(|v| {
                if members.iter().any(|m| (*v - *m).abs() <= tol) {
                    members.push(*v);
                    false
                } else {
                    true
                }
            });
            if members.len() == before {
                break;
            }
        }
        let k = R::from_i64(members.len() as i64);
        let mut sum = Cx::zero();
        for m in &members {
            sum = sum + *m;
        }
        out.push((sum.scale(R::one() / k), members));
    }
    out.sort_by(|a, b| {
        (a.0.re.to_f64(), a.0.im.to_f64())
            .partial_cmp(&(b.0.re.to_f64(), b.0.im.to_f64()))
            .unwrap()
    });
    out
}

/// Groups nearby values; returns (centroid, count) sorted by (re, im).
/// `tol` is absolute.
pub fn cluster<R: Real>(vals: &[Cx<R>], tol: R) -> Vec<(Cx<R>, usize)> {
    cluster_groups(vals, tol)
        .into_iter()
        .map(|(c, members)| (c, members.len()))
        .collect()
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations: returns eigenvalues ascending and a unitary matrix whose
/// columns are the matching eigenvectors.
pub fn hermitian_eigen<R: Real>(a: &CMat<R>) -> Result<(Vec<R>, CMat<R>)> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut m = a.clone();
    let mut v = CMat::<R>::identity(n);
    if n <= 1 {
        let vals = (0..n).map(|i| m[(i, i)].re).collect();
        return Ok((vals, v));
    }
    let scale = m.max_abs().max(R::one());
    let tol = R::from_f64(R::eps()) * scale * R::from_i64((8 * n * n) as i64);

    for _sweep in 0..60 {
        let mut off = R::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m[(p, q)].abs());
            }
        }
        if off <= tol {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| {
                m[(i, i)].re.to_f64().partial_cmp(&m[(j, j)].re.to_f64()).unwrap()
            });
            let vals = order.iter().map(|&i| m[(i, i)].re).collect();
            let vec = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
            return Ok((vals, vec));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let u = m[(p, q)];
                let r = u.abs();
                if r <= tol * R::from_f64(1e-3) {
                    m[(p, q)] = Cx::zero();
                    m[(q, p)] = Cx::zero();
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // Phase e makes the 2x2 block real; then a classical Jacobi
                // angle annihilates it.
                let e = u.scale(R::one() / r);
                let tau = (aqq - app) / (r + r);
                let t = {
                    let root = (R::one() + tau * tau).sqrt();
                    if tau < R::zero() {
                        -(R::one() / (-tau + root))
                    } else {
                        R::one() / (tau + root)
                    }
                };
                let cth = R::one() / (R::one() + t * t).sqrt();
                let sth = t * cth;
                let (cc, ss) = (Cx::real(cth), Cx::real(sth));
                // U[pp]=c, U[pq]=s, U[qp]=-s*conj(e), U[qq]=c*conj(e).
                let uqp = -(ss * e.conj());
                let uqq = cc * e.conj();
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * cc + miq * uqp;
                    m[(i, q)] = mip * ss + miq * uqq;
                }
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * cc + mqj * uqp.conj();
                    m[(q, j)] = mpj * ss + mqj * uqq.conj();
                }
                m[(p, q)] = Cx::zero();
                m[(q, p)] = Cx::zero();
                m[(p, p)] = Cx::real(m[(p, p)].re);
                m[(q, q)] = Cx::real(m[(q, q)].re);
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * cc + viq * uqp;
                    v[(i, q)] = vip * ss + viq * uqq;
                }
            }
        }
    }
    Err(Error::NoConvergence("Jacobi sweeps exhausted".into()))
}

/// Singular values (descending) and right singular vectors of a general
/// matrix, from a Jacobi eigensolve of the Gram matrix A^H A. Precision is
/// half the working precision, which double-double entries absorb.
pub struct GramSvd<R: Real> {
    pub singular: Vec<R>,
    /// Columns are right singular vectors, same order as `singular`.
    pub v: CMat<R>,
}

pub fn gram_svd<R: Real>(a: &CMat<R>) -> Result<GramSvd<R>> {
    let g = a.adjoint().mul(a);
    let (vals, vecs) = hermitian_eigen(&g)?;
    let n = vals.len();
    // Gram eigenvalues ascend; flip to descending singular values.
    let singular: Vec<R> = (0..n)
        .map(|i| vals[n - 1 - i].max(R::zero()).sqrt())
        .collect();
    let v = CMat::from_fn(g.rows, n, |i, j| vecs[(i, n - 1 - j)]);
    Ok(GramSvd { singular, v })
}

impl<R: Real> GramSvd<R> {
    /// Number of singular values above `rel_tol` times the largest.
    pub fn rank(&self, rel_tol: R) -> usize {
        let Some(top) = self.singular.first().copied() else {
            return 0;
        };
        if top <= R::zero() {
            return 0;
        }
        self.singular.iter().filter(|s| **s > rel_tol * top).count()
    }

    /// Orthonormal basis of the (numerical) right nullspace.
    pub fn nullspace(&self, rel_tol: R) -> Vec<Vec<Cx<R>>> {
        let r = self.rank(rel_tol);
        (r..self.singular.len()).map(|j| self.v.col(j)).collect()
    }
}

pub fn rank<R: Real>(a: &CMat<R>, rel_tol: R) -> Result<usize> {
    Ok(gram_svd(a)?.rank(rel_tol))
}

pub fn nullspace<R: Real>(a: &CMat<R>, rel_tol: R) -> Result<Vec<Vec<Cx<R>>>> {
    Ok(gram_svd(a)?.nullspace(rel_tol))
}

/// Solves A x = b by LU with partial pivoting. A must be square and
/// nonsingular at working precision.
pub fn lu_solve<R: Real>(a: &CMat<R>, b: &[Cx<R>]) -> Result<Vec<Cx<R>>> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(a.rows, b.len());
    let n = a.rows;
    let mut m = a.clone();
    let mut x: Vec<Cx<R>> = b.to_vec();
    for k in 0..n {
        let mut piv = k;
        let mut best = m[(k, k)].abs();
        for i in (k + 1)..n {
            let c = m[(i, k)].abs();
            if c > best {
                best = c;
                piv = i;
            }
        }
        if best <= R::zero() {
            return Err(Error::SingularConfiguration("singular linear system".into()));
        }
        if piv != k {
            for j in 0..n {
                let t = m[(k, j)];
                m[(k, j)] = m[(piv, j)];
                m[(piv, j)] = t;
            }
            x.swap(k, piv);
        }
        let inv = m[(k, k)].recip();
        for i in (k + 1)..n {
            let f = m[(i, k)] * inv;
            if f.is_zero() {
                continue;
            }
            for j in (k + 1)..n {
                let sub = f * m[(k, j)];
                m[(i, j)] = m[(i, j)] - sub;
            }
            x[i] = x[i] - f * x[k];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for j in (i + 1)..n {
            s = s - m[(i, j)] * x[j];
        }
        x[i] = s * m[(i, i)].recip();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx::C64;

    type Cm = CMat<f64>;

    #[test]
    fn hermitian_real_symmetric() {
        let a = Cm::from_real_fn(2, 2, |i, j| if i == j { 2.0 } else { 1.0 });
        let (vals, v) = hermitian_eigen(&a).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        // Columns are eigenvectors.
        for j in 0..2 {
            let col = v.col(j);
            let av = a.mul_vec(&col);
            for i in 0..2 {
                assert!((av[i] - col[i].scale(vals[j])).abs() < 1e-13);
            }
        }
        // Unitary.
        let vhv = v.adjoint().mul(&v);
        assert!(vhv.sub(&Cm::identity(2)).max_abs() < 1e-13);
    }

    #[test]
    fn hermitian_complex_entries() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let mut a = Cm::zeros(2, 2);
        a[(0, 0)] = C64::one();
        a[(1, 1)] = C64::one();
        a[(0, 1)] = C64::i();
        a[(1, 0)] = -C64::i();
        let (vals, _) = hermitian_eigen(&a).unwrap();
        assert!(vals[0].abs() < 1e-14);
        assert!((vals[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn roots_of_cubic() {
        // (x-1)(x-2)(x-3) = -6 + 11x - 6x^2 + x^3
        let c: Vec<C64> = [-6.0, 11.0, -6.0, 1.0]
            .iter()
            .map(|&x| C64::from_f64s(x, 0.0))
            .collect();
        let r = poly_roots(&c).unwrap();
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got.re - want).abs() < 1e-12, "{got:?} vs {want}");
            assert!(got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn roots_complex_pair_and_cluster() {
        // x^2 + 1
        let c: Vec<C64> = [1.0, 0.0, 1.0].iter().map(|&x| C64::from_f64s(x, 0.0)).collect();
        let r = poly_roots(&c).unwrap();
        let d = ((r[0] + C64::i()).abs() + (r[1] - C64::i()).abs())
            .min((r[0] - C64::i()).abs() + (r[1] + C64::i()).abs());
        assert!(d < 1e-14);
        // (x-1)^2: double root clusters within sqrt(eps) in f64.
        let c2: Vec<C64> = [1.0, -2.0, 1.0].iter().map(|&x| C64::from_f64s(x, 0.0)).collect();
        let r2 = poly_roots(&c2).unwrap();
        let cl = cluster(&r2, 1e-6);
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].1, 2);
        assert!((cl[0].0.re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn charpoly_matches_hand_computation() {
        // [[1,2],[3,4]]: x^2 - 5x - 2
        let a = Cm::from_real_fn(2, 2, |i, j| (1 + 2 * i + j) as f64);
        let c = charpoly(&a);
        assert!((c[0].re + 2.0).abs() < 1e-13);
        assert!((c[1].re + 5.0).abs() < 1e-13);
        assert!((c[2].re - 1.0).abs() < 1e-13);
        let ev = eigenvalues(&a).unwrap();
        let s = ev[0] + ev[1];
        assert!((s.re - 5.0).abs() < 1e-12);
    }

    #[test]
    fn gram_rank_and_nullspace() {
        // Rank-1 outer product with complex phase.
        let u = [C64::from_f64s(1.0, 0.5), C64::from_f64s(-2.0, 1.0), C64::one()];
        let a = Cm::from_fn(3, 3, |i, j| u[i] * u[j].conj());
        let svd = gram_svd(&a).unwrap();
        assert_eq!(svd.rank(1e-10), 1);
        let ns = svd.nullspace(1e-10);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(vnorm(&a.mul_vec(v)) < 1e-12);
            assert!((vnorm(v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lu_solves_and_rejects_singular() {
        let a = Cm::from_fn(3, 3, |i, j| {
            C64::from_f64s((i * j) as f64 + 1.0, if i == j { 0.5 } else { 0.0 })
        });
        let b = vec![C64::one(), C64::i(), C64::from_f64s(2.0, -1.0)];
        let x = lu_solve(&a, &b).unwrap();
        let ax = a.mul_vec(&x);
        for i in 0..3 {
            assert!((ax[i] - b[i]).abs() < 1e-13);
        }
        let s = Cm::from_real_fn(2, 2, |_, _| 1.0);
        assert!(lu_solve(&s, &[C64::one(), C64::zero()]).is_err());
    }

    #[test]
    fn dd_charpoly_precision() {
        use crate::dd::Dd;
        // Companion of x^3 - 2: roots should satisfy |r^3 - 2| ~ 1e-30.
        let mut a = CMat::<Dd>::zeros(3, 3);
        a[(0, 2)] = Cx::real(Dd::from_i64(2));
        a[(1, 0)] = Cx::one();
        a[(2, 1)] = Cx::one();
        let r = eigenvalues(&a).unwrap();
        for z in &r {
            let resid = (*z * *z * *z - Cx::real(Dd::from_i64(2))).abs();
            assert!(resid.to_f64() < 1e-28, "residual {}", resid.to_f64());
        }
    }
}
