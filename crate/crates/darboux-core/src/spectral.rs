//! Stability spectrum at a Darboux point: the mass-scaled Hessian of the
//! potential at multiplier -1, eigenvalue clusters with algebraic and
//! geometric multiplicities, rotation-decoupling witnesses, the aligned
//! block criterion, and the closed-form eigenvalue of the regular polygon.

use crate::cx::{Cx, Real};
use crate::dd::Dd;
use crate::exact::{ExactScalar, Field, Mat, Rat, Ring};
use crate::linalg::{self, CMat};
use crate::nbody::{normalize_multiplier, regular_ngon, w_from_config, DarbouxPoint};
use crate::{Error, Result};

/// Default relative tolerance for merging eigenvalues into clusters and for
/// the ranks behind geometric multiplicities.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Residual allowed when checking the four symmetry-forced eigenpairs.
const MANDATORY_TOL: f64 = 1e-9;

/// The mass-scaled Hessian together with the normalized point it belongs to.
/// The point's coordinates supply the trivial eigendirections (translations,
/// the configuration itself, and its quarter turn).
#[derive(Clone, Debug)]
pub struct StabilityMatrix<R: Real> {
    pub mat: CMat<R>,
    pub point: DarbouxPoint<Cx<R>>,
}

impl<R: Real> StabilityMatrix<R> {
    pub fn n(&self) -> usize {
        self.point.config.n()
    }

    /// The conjugate J^-1 W J, sharing W's spectrum. In the (x, y) block
    /// layout this swaps the diagonal blocks and negates the off-diagonal
    /// ones.
    pub fn conjugated(&self) -> CMat<R> {
        symplectic_conjugate(&self.mat)
    }

    /// Columns spanning the directions forced by the symmetries: the two
    /// translations, the configuration c (eigenvalue 2), and Jc
    /// (eigenvalue -1).
    pub fn trivial_directions(&self) -> Vec<Vec<Cx<R>>> {
        let n = self.n();
        let coords = self.point.config.coords();
        let mut tx = vec![Cx::zero(); 2 * n];
        let mut ty = vec![Cx::zero(); 2 * n];
        for i in 0..n {
            tx[i] = Cx::one();
            ty[n + i] = Cx::one();
        }
        let c = coords.to_vec();
        let mut jc = vec![Cx::zero(); 2 * n];
        for i in 0..n {
            jc[i] = -coords[n + i];
            jc[n + i] = coords[i];
        }
        vec![tx, ty, c, jc]
    }
}

/// Assembles the stability matrix, rescaling the point to multiplier -1
/// first.
pub fn stability_matrix<R: Real>(point: &DarbouxPoint<Cx<R>>) -> Result<StabilityMatrix<R>> {
    let normalized = normalize_multiplier(point.clone())?;
    let w = w_from_config(&normalized.config);
    let mat = CMat::from_fn(w.rows, w.cols, |i, j| w[(i, j)]);
    Ok(StabilityMatrix { mat, point: normalized })
}

/// Exact-arithmetic stability matrix at multiplier -1. Instead of extracting
/// a cube root of the multiplier, the Hessian of the unscaled point is
/// multiplied by the exact scalar -1/alpha, which equals the Hessian of the
/// rescaled configuration.
pub fn stability_matrix_exact<K: Field>(point: &DarbouxPoint<K>) -> Result<Mat<K>> {
    if point.multiplier.is_zero() {
        return Err(Error::DegenerateDarboux);
    }
    let w = w_from_config(&point.config);
    let scale = -(K::one() / point.multiplier.clone());
    Ok(w.scale(&scale))
}

/// J^-1 M J for the symplectic block rotation J = [[0, -I], [I, 0]].
pub fn symplectic_conjugate<R: Real>(m: &CMat<R>) -> CMat<R> {
    assert_eq!(m.rows, m.cols);
    assert_eq!(m.rows % 2, 0);
    let n = m.rows / 2;
    CMat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => m[(n + i, n + j)],
        (true, false) => -m[(n + i, j - n)],
        (false, true) => -m[(i - n, n + j)],
        (false, false) => m[(i - n, j - n)],
    })
}

/// Exact counterpart of [`symplectic_conjugate`].
pub fn symplectic_conjugate_exact<K: Ring>(m: &Mat<K>) -> Mat<K> {
    assert_eq!(m.rows, m.cols);
    assert_eq!(m.rows % 2, 0);
    let n = m.rows / 2;
    Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => m[(n + i, n + j)].clone(),
        (true, false) => -m[(n + i, j - n)].clone(),
        (false, true) => -m[(i - n, n + j)].clone(),
        (false, false) => m[(i - n, j - n)].clone(),
    })
}

/// One eigenvalue cluster.
#[derive(Clone, Debug)]
pub struct Cluster<R: Real> {
    pub eigenvalue: Cx<R>,
    pub algebraic: usize,
    pub geometric: usize,
}

/// Eigenvalue clusters of a matrix; algebraic multiplicities sum to the
/// dimension and geometric never exceeds algebraic.
#[derive(Clone, Debug)]
pub struct SpectralReport<R: Real> {
    pub clusters: Vec<Cluster<R>>,
    pub cluster_tolerance: f64,
    /// Set when two cluster centroids sit within a decade of the merge
    /// distance, i.e. the partition depends delicately on the tolerance.
    pub ambiguous: bool,
}

/// Numeric eigenvalue clustering. `cluster_tol` is relative to the spectral
/// radius (floored at 1) and also sets the floor of the rank threshold
/// behind the geometric multiplicities.
///
/// A k-fold root of the characteristic polynomial is only computable to
/// about eps^(1/k), so no single merge distance can both keep genuinely
/// distinct eigenvalues apart and reunite the shattered copies of a
/// high-multiplicity one. Groups are therefore merged exactly when their
/// combined width is explained by their combined size.
pub fn spectrum<R: Real>(a: &CMat<R>, cluster_tol: f64) -> Result<SpectralReport<R>> {
    assert_eq!(a.rows, a.cols);
    let vals = linalg::eigenvalues(a)?;
    let radius = spectral_radius(&vals);
    let spread = |k: usize| plausible_scatter(R::eps(), k, cluster_tol, radius);
    let partition = multiplicity_partition(&vals, cluster_tol, radius);
    let mut ambiguous = false;
    let mut clusters = Vec::with_capacity(partition.len());
    for g in &partition {
        let k = g.len();
        let (rep, width) = centroid_and_width(g);
        if 2.0 * width > spread(k) {
            ambiguous = true;
        }
        // Shifting by the centroid leaves singular values of the size of the
        // cluster's own scatter in the null directions, so the zero test is
        // absolute, not relative to the matrix norm.
        let thresh = 4.0 * width + cluster_tol * radius;
        let svd = linalg::gram_svd(&a.shift(rep))?;
        let zero = svd.singular.iter().filter(|s| s.to_f64() <= thresh).count();
        let geometric = zero.clamp(1, k);
        clusters.push(Cluster { eigenvalue: rep, algebraic: k, geometric });
    }
    clusters.sort_by(|a, b| {
        (a.eigenvalue.re.to_f64(), a.eigenvalue.im.to_f64())
            .partial_cmp(&(b.eigenvalue.re.to_f64(), b.eigenvalue.im.to_f64()))
            .unwrap()
    });
    // Flag partitions that a slightly different tolerance could re-draw.
    for i in 0..clusters.len() {
        for j in (i + 1)..clusters.len() {
            let d = (clusters[i].eigenvalue - clusters[j].eigenvalue).abs().to_f64();
            if d < 10.0 * spread(clusters[i].algebraic + clusters[j].algebraic) {
                ambiguous = true;
            }
        }
    }
    Ok(SpectralReport { clusters, cluster_tolerance: cluster_tol, ambiguous })
}

fn spectral_radius<R: Real>(vals: &[Cx<R>]) -> f64 {
    let mut radius = 1.0f64;
    for v in vals {
        radius = radius.max(v.abs().to_f64());
    }
    radius
}

/// Largest plausible scatter of the computed copies of a k-fold root.
fn plausible_scatter(eps: f64, k: usize, cluster_tol: f64, radius: f64) -> f64 {
    radius * cluster_tol.max(32.0 * eps.powf(1.0 / k as f64))
}

fn centroid_and_width<R: Real>(g: &[Cx<R>]) -> (Cx<R>, f64) {
    let mut sum = Cx::zero();
    for v in g {
        sum = sum + *v;
    }
    let rep = sum.scale(R::one() / R::from_i64(g.len() as i64));
    let mut width = 0.0f64;
    for v in g {
        width = width.max((*v - rep).abs().to_f64());
    }
    (rep, width)
}

/// Multiplicity-aware grouping of computed eigenvalues. Parts merge exactly
/// when their combined width is explained by their combined size, since no
/// single merge distance can both keep genuinely distinct eigenvalues apart
/// and reunite the shattered copies of a high-multiplicity one.
fn multiplicity_partition<R: Real>(
    vals: &[Cx<R>],
    cluster_tol: f64,
    radius: f64,
) -> Vec<Vec<Cx<R>>> {
    let n = vals.len();
    let spread = |k: usize| plausible_scatter(R::eps(), k, cluster_tol, radius);
    let diameter = |g: &[Cx<R>]| {
        let mut d = 0.0f64;
        for i in 0..g.len() {
            for j in (i + 1)..g.len() {
                d = d.max((g[i] - g[j]).abs().to_f64());
            }
        }
        d
    };
    let mut partition: Vec<Vec<Cx<R>>> =
        linalg::cluster_groups(vals, R::from_f64(spread(1)))
            .into_iter()
            .map(|(_, members)| members)
            .collect();
    for m in 2..=n {
        // Chain clusterings coarsen as the tolerance grows, so each current
        // part lies inside exactly one proposed group and every proposed
        // group is the exact union of the parts it covers.
        let proposal = linalg::cluster_groups(vals, R::from_f64(spread(m)));
        for (_, members) in &proposal {
            let inside: Vec<usize> = partition
                .iter()
                .enumerate()
                .filter(|(_, g)| members.contains(&g[0]))
                .map(|(i, _)| i)
                .collect();
            if inside.len() < 2 || diameter(members) > spread(members.len()) {
                continue;
            }
            let mut merged = Vec::new();
            for i in inside.iter().rev() {
                merged.append(&mut partition.remove(*i));
            }
            partition.push(merged);
        }
    }
    partition
}

/// One exact eigenvalue with its multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCluster {
    pub eigenvalue: Rat,
    pub algebraic: usize,
    pub geometric: usize,
}

/// Tolerance-free spectrum for matrices over an exact scalar, available when
/// the characteristic polynomial has rational coefficients and splits over
/// the rationals. Eigenvalues come back ascending.
pub fn exact_spectrum<K: ExactScalar>(a: &Mat<K>) -> Option<Vec<ExactCluster>> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let cp = a.charpoly();
    let mut rational = Vec::with_capacity(n + 1);
    for k in 0..=n {
        rational.push(cp.coeff(k).as_rational()?);
    }
    let cp = crate::exact::Poly::from_coeffs(rational);
    let roots = crate::exact::sturm::all_rational_roots(&cp)?;
    let mut out = Vec::with_capacity(roots.len());
    for (root, mult) in roots {
        let lam = K::from_rational(&root);
        let shifted = a.sub(&Mat::identity(n).scale(&lam));
        let geometric = n - shifted.rank();
        out.push(ExactCluster { eigenvalue: root, algebraic: mult, geometric });
    }
    Some(out)
}

fn eigen_residual<R: Real>(m: &CMat<R>, v: &[Cx<R>], lam: Cx<R>) -> f64 {
    let mut r = m.mul_vec(v);
    for (ri, vi) in r.iter_mut().zip(v.iter()) {
        *ri = *ri - lam * *vi;
    }
    linalg::vnorm(&r).to_f64() / linalg::vnorm(v).to_f64()
}

/// Confirms the four eigenpairs every multiplier -1 Darboux point must have:
/// the configuration at eigenvalue 2, its quarter turn at -1, and the two
/// translations at 0, each to a relative residual of 1e-9 (scaled by the
/// matrix norm).
pub fn mandatory_spectrum_check<R: Real>(w: &StabilityMatrix<R>) -> bool {
    let dirs = w.trivial_directions();
    let scale = w.mat.max_abs().to_f64().max(1.0);
    let lambdas = [Cx::zero(), Cx::zero(), Cx::from_i64(2), -Cx::one()];
    dirs.iter()
        .zip(lambdas.iter())
        .all(|(v, lam)| eigen_residual(&w.mat, v, *lam) <= MANDATORY_TOL * scale)
}

/// How a decoupling witness sits inside phase space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// v and Jv span a rotation-invariant plane.
    InvariantPlane,
    /// A single line with Jv parallel to v, which forces the (w, iw) shape.
    RankOne,
}

/// A common eigenvector of W and J^-1 W J beyond the symmetry-forced
/// directions.
#[derive(Clone, Debug)]
pub struct DecouplingWitness<R: Real> {
    pub lambda: Cx<R>,
    /// Dimension of the witness space after removing trivial directions.
    pub dimension: usize,
    pub kind: WitnessKind,
    pub vector: Vec<Cx<R>>,
    /// max of the two eigen-residuals of `vector`, relative to its norm.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct DecouplingReport<R: Real> {
    pub decoupled: bool,
    pub witnesses: Vec<DecouplingWitness<R>>,
    pub tolerance: f64,
    pub includes_trivial: bool,
}

fn orthonormalize<R: Real>(cols: &[Vec<Cx<R>>]) -> Vec<Vec<Cx<R>>> {
    let mut basis: Vec<Vec<Cx<R>>> = vec![];
    for col in cols {
        let mut v = col.clone();
        for b in &basis {
            let p = linalg::cdot(b, &v);
            for (vi, bi) in v.iter_mut().zip(b.iter()) {
                *vi = *vi - p * *bi;
            }
        }
        let norm = linalg::vnorm(&v);
        if norm.to_f64() > 1e-12 {
            let inv = Cx::real(R::one() / norm);
            for vi in v.iter_mut() {
                *vi = *vi * inv;
            }
            basis.push(v);
        }
    }
    basis
}

/// Searches for common eigenvectors of W and J^-1 W J at equal eigenvalue;
/// a nonempty result certifies a rotation-invariant subspace of the
/// variational equations. Trivial directions are projected out unless
/// `include_trivial` keeps them (only the translation plane at eigenvalue 0
/// ever shows up among them).
pub fn partial_decoupling<R: Real>(
    w: &StabilityMatrix<R>,
    tol: f64,
    include_trivial: bool,
) -> Result<DecouplingReport<R>> {
    let k = w.conjugated();
    let vals = linalg::eigenvalues(&w.mat)?;
    let radius = spectral_radius(&vals);
    let groups = multiplicity_partition(&vals, tol, radius);

    let trivial = w.trivial_directions();
    let t_basis = orthonormalize(&trivial);

    let mut witnesses = vec![];
    for g in groups {
        let (rep, width) = centroid_and_width(&g);
        let stack = w.mat.shift(rep).vstack(&k.shift(rep));
        // The centroid sits within the cluster's scatter of the true
        // eigenvalue, so the zero test on singular values is absolute.
        let zthresh = 4.0 * width + tol * radius;
        let svd = linalg::gram_svd(&stack)?;
        let common: Vec<Vec<Cx<R>>> = (0..svd.singular.len())
            .filter(|j| svd.singular[*j].to_f64() <= zthresh)
            .map(|j| svd.v.col(j))
            .collect();
        if common.is_empty() {
            continue;
        }
        let (dimension, vector) = if include_trivial {
            (common.len(), common[0].clone())
        } else {
            // Leaving the common space would destroy the eigen-relation, so
            // the trivial directions cannot simply be projected out of a
            // common vector. Instead, take the combination of the common
            // basis farthest from the trivial span: each singular value of
            // the projected-residue matrix measures the non-trivial content
            // of one combination, and counting them gives the dimension
            // beyond the trivial directions.
            let residues: Vec<Vec<Cx<R>>> = common
                .iter()
                .map(|b| {
                    let mut r = b.clone();
                    for t in &t_basis {
                        let p = linalg::cdot(t, &r);
                        for (ri, ti) in r.iter_mut().zip(t.iter()) {
                            *ri = *ri - p * *ti;
                        }
                    }
                    r
                })
                .collect();
            let rsvd = linalg::gram_svd(&CMat::from_cols(&residues))?;
            let dim = rsvd.singular.iter().filter(|s| s.to_f64() > tol).count();
            if dim == 0 {
                continue;
            }
            let a = rsvd.v.col(0);
            let mut x = vec![Cx::zero(); common[0].len()];
            for (aj, b) in a.iter().zip(common.iter()) {
                for (xi, bi) in x.iter_mut().zip(b.iter()) {
                    *xi = *xi + *aj * *bi;
                }
            }
            (dim, x)
        };
        // Rayleigh refit: the representative is a unit vector, so this is
        // the least-squares eigenvalue for it and stays accurate when the
        // cluster centroid is smeared by a high algebraic multiplicity.
        let wv = w.mat.mul_vec(&vector);
        let n2 = linalg::vnorm(&vector);
        let lam = linalg::cdot(&vector, &wv).scale(R::one() / (n2 * n2));
        let residual =
            eigen_residual(&w.mat, &vector, lam).max(eigen_residual(&k, &vector, lam));
        let kind =
            if dimension >= 2 { WitnessKind::InvariantPlane } else { WitnessKind::RankOne };
        witnesses.push(DecouplingWitness { lambda: lam, dimension, kind, vector, residual });
    }
    Ok(DecouplingReport {
        decoupled: !witnesses.is_empty(),
        witnesses,
        tolerance: tol,
        includes_trivial: include_trivial,
    })
}

/// Decoupling test for configurations on a line: W must carry the block form
/// diag(A, -A/2), and the verdict is whether the eigenvalue 0 of A has
/// algebraic multiplicity at least 2. One zero eigenvalue is always present
/// (the translation along the line), so the test reads the two lowest
/// characteristic coefficients rather than the determinant alone.
pub fn aligned_decoupling<R: Real>(w: &CMat<R>, tol: f64) -> Result<bool> {
    assert_eq!(w.rows, w.cols);
    if w.rows % 2 != 0 {
        return Err(Error::NotAligned("odd dimension".into()));
    }
    let n = w.rows / 2;
    let scale = R::from_f64(w.max_abs().to_f64().max(1e-300));
    let t = R::from_f64(tol);
    for i in 0..n {
        for j in 0..n {
            let off = w[(i, n + j)].abs().max(w[(n + i, j)].abs());
            let half = Cx::real(R::from_ratio(1, 2));
            let se = (w[(n + i, n + j)] + w[(i, j)] * half).abs();
            if off > t * scale || se > t * scale {
                return Err(Error::NotAligned(format!(
                    "block structure violated at ({i}, {j})"
                )));
            }
        }
    }
    let a = CMat::from_fn(n, n, |i, j| w[(i, j)]);
    let cp = linalg::charpoly(&a);
    let mut cscale = 1e-300f64;
    for c in &cp {
        cscale = cscale.max(c.abs().to_f64());
    }
    Ok(cp[0].abs().to_f64() <= tol * cscale && cp[1].abs().to_f64() <= tol * cscale)
}

/// Exact counterpart of [`aligned_decoupling`]: block structure by exact
/// equality, verdict from exact vanishing of the two lowest characteristic
/// coefficients of A.
pub fn aligned_decoupling_exact<K: Field>(w: &Mat<K>) -> Result<bool> {
    assert_eq!(w.rows, w.cols);
    if w.rows % 2 != 0 {
        return Err(Error::NotAligned("odd dimension".into()));
    }
    let n = w.rows / 2;
    let two = K::from_i64(2);
    for i in 0..n {
        for j in 0..n {
            let se = w[(n + i, n + j)].clone() * two.clone() + w[(i, j)].clone();
            if !w[(i, n + j)].is_zero() || !w[(n + i, j)].is_zero() || !se.is_zero() {
                return Err(Error::NotAligned(format!(
                    "block structure violated at ({i}, {j})"
                )));
            }
        }
    }
    let a = Mat::from_fn(n, n, |i, j| w[(i, j)].clone());
    let cp = a.charpoly();
    Ok(cp.coeff(0).is_zero() && cp.coeff(1).is_zero())
}

/// The distinguished eigenvalue of the equal-mass regular n-gon:
/// 2 - [2 sin(pi/n) / (1 - cos(pi/n))] / [sum_{j=1}^{n-1} 1/sin(pi j/n)].
pub fn equal_mass_lambda(n: usize) -> Result<Dd> {
    if n < 3 {
        return Err(Error::InvalidInput("polygon eigenvalue needs n >= 3".into()));
    }
    let theta = Dd::PI / Dd::from_i64(n as i64);
    let (s1, c1) = theta.sin_cos();
    // sin(j theta), cos(j theta) by angle addition from the j = 1 pair.
    let (mut s, mut c) = (s1, c1);
    let mut inv_sum = Dd::ZERO;
    for _ in 1..n {
        inv_sum = inv_sum + Dd::ONE / s;
        let s_next = s * c1 + c * s1;
        let c_next = c * c1 - s * s1;
        s = s_next;
        c = c_next;
    }
    let front = Dd::from_i64(2) * s1 / (Dd::ONE - c1);
    Ok(Dd::from_i64(2) - front / inv_sum)
}

/// Residual of the closed-form eigenpair on the regular n-gon: the wave
/// vector v_i = cos(2 tau i/n), v_{n+i} = sin(2 tau i/n) against the
/// eigenvalue from [`equal_mass_lambda`], for both W and J^-1 W J.
pub fn polygon_eigenvector_residual(n: usize) -> Result<f64> {
    let lam = Cx::real(equal_mass_lambda(n)?);
    let point = regular_ngon(n, Dd::ONE)?;
    let w = stability_matrix(&point)?;
    let k = w.conjugated();
    let mut v = vec![Cx::<Dd>::zero(); 2 * n];
    for i in 0..n {
        let angle = Dd::TAU * Dd::from_i64(2 * i as i64) / Dd::from_i64(n as i64);
        let (s, c) = angle.sin_cos();
        v[i] = Cx::real(c);
        v[n + i] = Cx::real(s);
    }
    Ok(eigen_residual(&w.mat, &v, lam).max(eigen_residual(&k, &v, lam)))
}

/// The two eigenvalues of the equilateral three-body configuration beyond
/// the mandatory set, for masses normalized to total 1:
/// (1 -+ 3 sqrt(m1^2 + m2^2 + m3^2 - m1 m2 - m2 m3 - m3 m1)) / 2,
/// returned ascending. They coincide (both 1/2) exactly at equal masses.
pub fn equilateral_lambda_pair<R: Real>(m: &[R; 3]) -> Result<(R, R)> {
    for mi in m {
        if !(mi.to_f64() > 0.0) {
            return Err(Error::InvalidInput("masses must be positive".into()));
        }
    }
    let total = m[0] + m[1] + m[2];
    let (a, b, c) = (m[0] / total, m[1] / total, m[2] / total);
    // Half the sum of squared mass differences; clamp roundoff negatives.
    let disc = a * a + b * b + c * c - a * b - b * c - c * a;
    let root = disc.max(R::zero()).sqrt();
    let half = R::from_ratio(1, 2);
    let three = R::from_i64(3);
    Ok((half * (R::one() - three * root), half * (R::one() + three * root)))
}
