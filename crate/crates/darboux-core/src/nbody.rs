//! Central configurations (Darboux points) of the planar n-body problem.
//!
//! A configuration stores, next to coordinates and masses, one recorded value
//! of every mutual distance. On real configurations the record is the usual
//! positive distance; on complexified ones it fixes the square-root branch so
//! that potentials, accelerations, and Hessians are evaluated consistently.
//! Builders for the classical families (Euler collinear, Lagrange
//! equilateral, regular polygons, and one equilateral-modulus complex
//! triangle) return Darboux points with the multiplier fitted and, on the
//! numeric path, normalized to -1.

use crate::cx::{Cdd, Cx, Real};
use crate::dd::Dd;
use crate::exact::{rat, rat_to_dd, Field, MPoly, Mat, Poly, QuadExt, Rat, Ring};
use crate::linalg::{lu_solve, CMat};
use crate::ode::{integrate_observed, OdeOptions};
use crate::{Error, Result};

/// Planar bodies with masses, coordinates in the layout (x1..xn, y1..yn),
/// and one recorded mutual distance per pair.
#[derive(Clone, Debug)]
pub struct Config<K: Field> {
    n: usize,
    masses: Vec<K>,
    coords: Vec<K>,
    dist: Vec<K>,
}

/// Position of the pair (i, k), i < k, in the upper-triangle distance list.
fn pair_index(n: usize, i: usize, k: usize) -> usize {
    debug_assert!(i < k && k < n);
    i * (2 * n - i - 1) / 2 + (k - i - 1)
}

/// Relative agreement required between a recorded distance squared and the
/// coordinate difference it claims to measure.
const DIST_CONSISTENCY: f64 = 1e-12;

impl<K: Field> Config<K> {
    /// Validates and assembles a configuration. The recorded distances must
    /// square to the coordinate differences; which square root was recorded
    /// is up to the caller.
    pub fn new(masses: Vec<K>, coords: Vec<K>, dist: Vec<K>) -> Result<Config<K>> {
        let n = masses.len();
        if n < 2 {
            return Err(Error::InvalidInput("need at least two bodies".into()));
        }
        if coords.len() != 2 * n {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                2 * n,
                coords.len()
            )));
        }
        if dist.len() != n * (n - 1) / 2 {
            return Err(Error::InvalidInput(format!(
                "expected {} recorded distances, got {}",
                n * (n - 1) / 2,
                dist.len()
            )));
        }
        for m in &masses {
            let v = m.to_cdd();
            let re = v.re.to_f64();
            if !(re > 0.0) || v.im.abs().to_f64() > 1e-12 * (1.0 + re) {
                return Err(Error::InvalidInput("masses must be positive reals".into()));
            }
        }
        let cfg = Config { n, masses, coords, dist };
        for i in 0..n {
            for k in (i + 1)..n {
                let r = cfg.dist(i, k).clone();
                if r.is_zero() {
                    return Err(Error::SingularConfiguration(format!(
                        "bodies {} and {} coincide",
                        i + 1,
                        k + 1
                    )));
                }
                let dx = cfg.coords[i].clone() - cfg.coords[k].clone();
                let dy = cfg.coords[n + i].clone() - cfg.coords[n + k].clone();
                let lhs = (r.clone() * r).to_cdd();
                let rhs = (dx.clone() * dx + dy.clone() * dy).to_cdd();
                let err = (lhs - rhs).abs().to_f64();
                if err > DIST_CONSISTENCY * lhs.abs().to_f64().max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "recorded distance of bodies {} and {} disagrees with coordinates",
                        i + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(cfg)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn masses(&self) -> &[K] {
        &self.masses
    }

    pub fn coords(&self) -> &[K] {
        &self.coords
    }

    /// Recorded distance of the unordered pair {i, k}.
    pub fn dist(&self, i: usize, k: usize) -> &K {
        let (i, k) = if i < k { (i, k) } else { (k, i) };
        &self.dist[pair_index(self.n, i, k)]
    }

    pub fn total_mass(&self) -> K {
        let mut m = K::zero();
        for mi in &self.masses {
            m = m + mi.clone();
        }
        m
    }

    /// Mass-weighted barycenter (x, y).
    pub fn barycenter(&self) -> (K, K) {
        let m = self.total_mass();
        let mut bx = K::zero();
        let mut by = K::zero();
        for i in 0..self.n {
            bx = bx + self.masses[i].clone() * self.coords[i].clone();
            by = by + self.masses[i].clone() * self.coords[self.n + i].clone();
        }
        (bx / m.clone(), by / m)
    }

    /// Same bodies translated so the barycenter sits at the origin.
    /// Distances depend on coordinate differences only and carry over.
    pub fn recentered(&self) -> Config<K> {
        let (bx, by) = self.barycenter();
        let mut coords = Vec::with_capacity(2 * self.n);
        for i in 0..self.n {
            coords.push(self.coords[i].clone() - bx.clone());
        }
        for i in 0..self.n {
            coords.push(self.coords[self.n + i].clone() - by.clone());
        }
        Config { n: self.n, masses: self.masses.clone(), coords, dist: self.dist.clone() }
    }

    /// Scales coordinates and recorded distances by s. The recorded branch
    /// follows the scaling, so the result validates by construction.
    pub fn scaled(&self, s: &K) -> Config<K> {
        Config {
            n: self.n,
            masses: self.masses.clone(),
            coords: self.coords.iter().map(|c| c.clone() * s.clone()).collect(),
            dist: self.dist.iter().map(|d| d.clone() * s.clone()).collect(),
        }
    }

    /// Mass-weighted squared norm sum m_i (x_i^2 + y_i^2), bilinear (no
    /// conjugation), so it can vanish on complex configurations.
    pub fn mass_weighted_norm2(&self) -> K {
        let mut out = K::zero();
        for i in 0..self.n {
            let x = self.coords[i].clone();
            let y = self.coords[self.n + i].clone();
            out = out + self.masses[i].clone() * (x.clone() * x + y.clone() * y);
        }
        out
    }

    /// Plain squared norm sum (x_i^2 + y_i^2), kept for sensitivity checks
    /// against the mass-weighted convention.
    pub fn plain_norm2(&self) -> K {
        let mut out = K::zero();
        for c in &self.coords {
            out = out + c.clone() * c.clone();
        }
        out
    }
}

impl<K: Field> Config<K> {
    /// High-precision complex snapshot of the same configuration, recorded
    /// branches included.
    pub fn numeric(&self) -> Config<Cdd> {
        Config {
            n: self.n,
            masses: self.masses.iter().map(Field::to_cdd).collect(),
            coords: self.coords.iter().map(Field::to_cdd).collect(),
            dist: self.dist.iter().map(Field::to_cdd).collect(),
        }
    }
}

impl<R: Real> Config<Cx<R>> {
    /// Builds a configuration from coordinates alone, recording the
    /// principal square root of each squared separation.
    pub fn from_coords(masses: Vec<Cx<R>>, coords: Vec<Cx<R>>) -> Result<Config<Cx<R>>> {
        let n = masses.len();
        if coords.len() != 2 * n {
            return Err(Error::InvalidInput(format!(
                "expected {} coordinates, got {}",
                2 * n,
                coords.len()
            )));
        }
        let mut dist = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for k in (i + 1)..n {
                let dx = coords[i] - coords[k];
                let dy = coords[n + i] - coords[n + k];
                let r = (dx * dx + dy * dy).sqrt();
                if r.is_zero() {
                    return Err(Error::SingularConfiguration(format!(
                        "bodies {} and {} coincide",
                        i + 1,
                        k + 1
                    )));
                }
                dist.push(r);
            }
        }
        Config::new(masses, coords, dist)
    }
}

/// Newtonian potential sum m_i m_k / r_ik over the recorded distances.
pub fn potential_value<K: Field>(cfg: &Config<K>) -> K {
    let mut v = K::zero();
    for i in 0..cfg.n {
        for k in (i + 1)..cfg.n {
            v = v + cfg.masses[i].clone() * cfg.masses[k].clone() / cfg.dist(i, k).clone();
        }
    }
    v
}

/// Acceleration a_i = (1/m_i) dV/dq_i = -sum_k m_k (q_i - q_k) / r_ik^3 in
/// the coordinate layout of the configuration.
pub fn mass_scaled_acceleration<K: Field>(cfg: &Config<K>) -> Vec<K> {
    let n = cfg.n;
    let mut out = vec![K::zero(); 2 * n];
    for i in 0..n {
        for k in (i + 1)..n {
            let r = cfg.dist(i, k).clone();
            let inv3 = K::one() / (r.clone() * r.clone() * r);
            let dx = (cfg.coords[i].clone() - cfg.coords[k].clone()) * inv3.clone();
            let dy = (cfg.coords[n + i].clone() - cfg.coords[n + k].clone()) * inv3;
            out[i] = out[i].clone() - cfg.masses[k].clone() * dx.clone();
            out[k] = out[k].clone() + cfg.masses[i].clone() * dx;
            out[n + i] = out[n + i].clone() - cfg.masses[k].clone() * dy.clone();
            out[n + k] = out[n + k].clone() + cfg.masses[i].clone() * dy;
        }
    }
    out
}

/// Least-squares multiplier of the proportionality a = alpha q under the
/// mass-weighted bilinear pairing. Falls back to a single-coordinate ratio
/// when the bilinear norm of the configuration vanishes.
pub fn fit_multiplier<K: Field>(cfg: &Config<K>) -> K {
    let a = mass_scaled_acceleration(cfg);
    let n = cfg.n;
    let mut num = K::zero();
    let mut den = K::zero();
    let mut scale = 0.0f64;
    for i in 0..n {
        let m = &cfg.masses[i];
        for j in [i, n + i] {
            let q = &cfg.coords[j];
            num = num + m.clone() * a[j].clone() * q.clone();
            den = den + m.clone() * q.clone() * q.clone();
            scale += (m.to_cdd() * q.to_cdd() * q.to_cdd()).abs().to_f64();
        }
    }
    if !den.is_zero() && den.to_cdd().abs().to_f64() > 1e-25 * scale {
        return num / den;
    }
    let mut best = 0usize;
    let mut best_abs = -1.0f64;
    for (j, q) in cfg.coords.iter().enumerate() {
        let qa = q.to_cdd().abs().to_f64();
        if qa > best_abs {
            best_abs = qa;
            best = j;
        }
    }
    if best_abs <= 0.0 {
        return K::zero();
    }
    a[best].clone() / cfg.coords[best].clone()
}

/// Largest coordinate-wise deviation |a_i - alpha q_i|.
pub fn darboux_residual<K: Field>(cfg: &Config<K>, alpha: &K) -> f64 {
    let a = mass_scaled_acceleration(cfg);
    let mut worst = 0.0f64;
    for (ai, qi) in a.iter().zip(cfg.coords.iter()) {
        let d = (ai.clone() - alpha.clone() * qi.clone()).to_cdd().abs().to_f64();
        worst = worst.max(d);
    }
    worst
}

/// A configuration satisfying a = alpha q after recentering, together with
/// the fitted multiplier and the residual of that proportionality.
#[derive(Clone, Debug)]
pub struct DarbouxPoint<K: Field> {
    pub config: Config<K>,
    pub multiplier: K,
    pub residual: f64,
}

impl<K: Field> DarbouxPoint<K> {
    /// High-precision complex snapshot; the residual is re-measured on the
    /// converted data.
    pub fn numeric(&self) -> DarbouxPoint<Cdd> {
        let config = self.config.numeric();
        let multiplier = self.multiplier.to_cdd();
        let residual = darboux_residual(&config, &multiplier);
        DarbouxPoint { config, multiplier, residual }
    }
}

/// Recenters the configuration, fits the multiplier, and accepts only if
/// the proportionality residual stays within `tol`.
pub fn darboux_point<K: Field>(cfg: &Config<K>, tol: f64) -> Result<DarbouxPoint<K>> {
    let cfg = cfg.recentered();
    let alpha = fit_multiplier(&cfg);
    let residual = darboux_residual(&cfg, &alpha);
    if !(residual <= tol) {
        return Err(Error::InvalidInput(format!(
            "not a Darboux point: residual {residual:.3e} exceeds {tol:.3e}"
        )));
    }
    Ok(DarbouxPoint { config: cfg, multiplier: alpha, residual })
}

/// Rescales a Darboux point so the multiplier becomes -1, using that the
/// multiplier transforms as alpha -> s^-3 alpha under q -> s q. The scale is
/// the principal cube root of -alpha; the multiplier and residual of the
/// result are refitted rather than asserted. Exact-arithmetic callers rescale
/// the stability matrix by -1/alpha instead, which needs no root extraction.
pub fn normalize_multiplier<R: Real>(d: DarbouxPoint<Cx<R>>) -> Result<DarbouxPoint<Cx<R>>> {
    if d.multiplier.abs().to_f64() < 1e-60 {
        return Err(Error::DegenerateDarboux);
    }
    let s = (-d.multiplier).cbrt();
    let cfg = d.config.scaled(&s);
    let alpha = fit_multiplier(&cfg);
    let residual = darboux_residual(&cfg, &alpha);
    Ok(DarbouxPoint { config: cfg, multiplier: alpha, residual })
}

/// Stability matrix of the configuration: the mass-scaled Hessian of the
/// potential, W[r][c] = (d a_r / d q_c) with a the mass-scaled acceleration.
/// Row r is divided by m_{r mod n}; the result is mass-weighted symmetric.
pub(crate) fn w_from_config<K: Field>(cfg: &Config<K>) -> Mat<K> {
    let n = cfg.n;
    let three = K::from_i64(3);
    let mut h = Mat::<K>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for k in (i + 1)..n {
            let dx = cfg.coords[i].clone() - cfg.coords[k].clone();
            let dy = cfg.coords[n + i].clone() - cfg.coords[n + k].clone();
            let r = cfg.dist(i, k).clone();
            let r3 = r.clone() * r.clone() * r.clone();
            let r5 = r3.clone() * r.clone() * r;
            let b = [
                [
                    three.clone() * dx.clone() * dx.clone() / r5.clone()
                        - K::one() / r3.clone(),
                    three.clone() * dx.clone() * dy.clone() / r5.clone(),
                ],
                [
                    three.clone() * dx.clone() * dy.clone() / r5.clone(),
                    three.clone() * dy.clone() * dy.clone() / r5 - K::one() / r3,
                ],
            ];
            let c = cfg.masses[i].clone() * cfg.masses[k].clone();
            for a in 0..2 {
                for bb in 0..2 {
                    let v = c.clone() * b[a][bb].clone();
                    h[(i + a * n, k + bb * n)] = h[(i + a * n, k + bb * n)].clone() - v.clone();
                    h[(k + a * n, i + bb * n)] = h[(k + a * n, i + bb * n)].clone() - v.clone();
                    h[(i + a * n, i + bb * n)] = h[(i + a * n, i + bb * n)].clone() + v.clone();
                    h[(k + a * n, k + bb * n)] = h[(k + a * n, k + bb * n)].clone() + v;
                }
            }
        }
    }
    Mat::from_fn(2 * n, 2 * n, |r, c| h[(r, c)].clone() / cfg.masses[r % n].clone())
}

/// Ascending coefficient rows (constant, m1, m2, m3) of the two collinear
/// quintics; `true` selects the complex-order variant.
fn quintic_rows(complex_order: bool) -> [[i64; 4]; 6] {
    if complex_order {
        [
            [0, -1, -1, 0],
            [0, -3, -2, 0],
            [0, -3, -1, 2],
            [0, -2, 1, 3],
            [0, 0, 2, 3],
            [0, 0, 1, 1],
        ]
    } else {
        [
            [0, -1, -1, 0],
            [0, -3, -2, 0],
            [0, -3, -1, 0],
            [0, 0, 1, 3],
            [0, 0, 2, 3],
            [0, 0, 1, 1],
        ]
    }
}

/// Collinear quintic in rho for masses (m1, m2, m3) at (rho, 0, -1),
/// recorded distances (rho, 1+rho, 1). Roots are exactly the values of rho
/// making that configuration a Darboux point.
pub fn euler_quintic(m: &[Rat; 3]) -> Poly<Rat> {
    quintic_from_rows(m, false)
}

/// Variant of [`euler_quintic`] for the recorded branch (rho, -(1+rho), 1),
/// whose roots give complex collinear Darboux points of the flipped middle
/// distance. Coefficients differ from the ordering quintic in the middle
/// degrees only.
pub fn euler_quintic_complex_order(m: &[Rat; 3]) -> Poly<Rat> {
    quintic_from_rows(m, true)
}

fn quintic_from_rows(m: &[Rat; 3], complex_order: bool) -> Poly<Rat> {
    let rows = quintic_rows(complex_order);
    let coeffs = rows
        .iter()
        .map(|row| {
            let mut c = rat(row[0], 1);
            for (j, w) in row[1..].iter().enumerate() {
                c += rat(*w, 1) * m[j].clone();
            }
            c
        })
        .collect();
    Poly::from_coeffs(coeffs)
}

/// Collinear quintic with the three masses kept symbolic, as a polynomial
/// in rho whose coefficients are linear forms in (m1, m2, m3).
pub fn euler_quintic_symbolic(complex_order: bool) -> Poly<MPoly> {
    let rows = quintic_rows(complex_order);
    let coeffs = rows
        .iter()
        .map(|row| MPoly::linear(row[0], row[1], row[2], row[3]))
        .collect();
    Poly::from_coeffs(coeffs)
}

/// Places masses (m1, m2, m3) at (rho, 0, -1) on the x-axis with the
/// recorded distances matching the quintic branch: (rho, 1+rho, 1), or
/// (rho, -(1+rho), 1) for the complex-order variant.
pub fn collinear_config<K: Field>(m: &[K; 3], rho: K, complex_order: bool) -> Result<Config<K>> {
    let coords = vec![
        rho.clone(),
        K::zero(),
        -K::one(),
        K::zero(),
        K::zero(),
        K::zero(),
    ];
    let r13 = if complex_order { -(K::one() + rho.clone()) } else { K::one() + rho.clone() };
    let dist = vec![rho, r13, K::one()];
    Config::new(m.to_vec(), coords, dist)
}

/// Threshold below which a quintic root is treated as a degenerate
/// configuration (a vanishing mutual distance) and skipped.
const DEGENERATE_ROOT: f64 = 1e-8;

/// Emits the collinear quintic for the given masses and one normalized
/// Darboux point per root, real and complex alike. Roots collapsing a
/// mutual distance are skipped; positive masses do not produce any.
pub fn euler_collinear(
    m: &[Rat; 3],
    complex_order: bool,
) -> Result<(Poly<Rat>, Vec<DarbouxPoint<Cx<Dd>>>)> {
    for mi in m {
        if rat_to_dd(mi).to_f64() <= 0.0 {
            return Err(Error::InvalidInput("masses must be positive".into()));
        }
    }
    let quintic = quintic_from_rows(m, complex_order);
    let coeffs: Vec<Cx<Dd>> = (0..=5).map(|d| Cx::real(rat_to_dd(&quintic.coeff(d)))).collect();
    let roots = crate::linalg::poly_roots(&coeffs)?;
    let md: [Cx<Dd>; 3] = [
        Cx::real(rat_to_dd(&m[0])),
        Cx::real(rat_to_dd(&m[1])),
        Cx::real(rat_to_dd(&m[2])),
    ];
    let mut points = Vec::new();
    for rho in roots {
        if rho.abs().to_f64() < DEGENERATE_ROOT
            || (rho + Cx::one()).abs().to_f64() < DEGENERATE_ROOT
        {
            continue;
        }
        let cfg = collinear_config(&md, rho, complex_order)?;
        let point = darboux_point(&cfg, 1e-12)?;
        points.push(normalize_multiplier(point)?);
    }
    Ok((quintic, points))
}

/// The complex collinear Darboux point of masses (1/7, 5/7, 1/7), built
/// exactly over Q(sqrt(-7)): rho = (-3 +/- i sqrt 7)/4 is the shared root of
/// the ordering quintic and 2 rho^2 + 3 rho + 2. The multiplier is left
/// unnormalized; exact spectral work rescales by -1/alpha instead.
pub fn complex_collinear_157(conjugate: bool) -> Result<DarbouxPoint<QuadExt>> {
    let b = if conjugate { rat(-1, 4) } else { rat(1, 4) };
    let rho = QuadExt::new(rat(-3, 4), b, -7);
    let m = [
        QuadExt::from_rat(rat(1, 7)),
        QuadExt::from_rat(rat(5, 7)),
        QuadExt::from_rat(rat(1, 7)),
    ];
    let cfg = collinear_config(&m, rho, false)?;
    let cfg = cfg.recentered();
    let alpha = fit_multiplier(&cfg);
    let mut exact_residual_zero = true;
    let a = mass_scaled_acceleration(&cfg);
    for (ai, qi) in a.iter().zip(cfg.coords().iter()) {
        if !(ai.clone() - alpha.clone() * qi.clone()).is_zero() {
            exact_residual_zero = false;
        }
    }
    if !exact_residual_zero {
        return Err(Error::InvalidInput(
            "shared quintic root failed the exact Darboux condition".into(),
        ));
    }
    Ok(DarbouxPoint { config: cfg, multiplier: alpha, residual: 0.0 })
}

/// Equilateral triangle of side 1 for arbitrary positive masses, recentered
/// and normalized to multiplier -1. Centrality of the equilateral shape is
/// independent of the mass values.
pub fn lagrange_equilateral<R: Real>(m: &[R; 3]) -> Result<DarbouxPoint<Cx<R>>> {
    let half = R::from_ratio(1, 2);
    let s3 = R::from_i64(3).sqrt();
    let masses = vec![Cx::real(m[0]), Cx::real(m[1]), Cx::real(m[2])];
    let coords = vec![
        Cx::zero(),
        Cx::one(),
        Cx::real(half),
        Cx::zero(),
        Cx::zero(),
        Cx::real(s3 * half),
    ];
    let dist = vec![Cx::one(), Cx::one(), Cx::one()];
    let cfg = Config::new(masses, coords, dist)?;
    normalize_multiplier(darboux_point(&cfg, 1e-12)?)
}

/// Exact equilateral triangle over Q(sqrt 3), side 1, recentered; the
/// multiplier is exactly minus the total mass, so masses summing to 1 come
/// out already normalized.
pub fn lagrange_exact(m: &[Rat; 3]) -> Result<DarbouxPoint<QuadExt>> {
    let masses: Vec<QuadExt> = m.iter().map(|x| QuadExt::from_rat(x.clone())).collect();
    let zero = QuadExt::from_rat(rat(0, 1));
    let one = QuadExt::from_rat(rat(1, 1));
    let coords = vec![
        zero.clone(),
        one.clone(),
        QuadExt::from_rat(rat(1, 2)),
        zero.clone(),
        zero.clone(),
        QuadExt::new(rat(0, 1), rat(1, 2), 3),
    ];
    let dist = vec![one.clone(), one.clone(), one];
    let cfg = Config::new(masses, coords, dist)?.recentered();
    let alpha = fit_multiplier(&cfg);
    let residual = darboux_residual(&cfg, &alpha);
    Ok(DarbouxPoint { config: cfg, multiplier: alpha, residual })
}

/// Regular n-gon of equal masses on a circle, normalized to multiplier -1.
/// Distances are recorded via the exact chord values 2 sin(pi j / n).
pub fn regular_ngon<R: Real>(n: usize, mass: R) -> Result<DarbouxPoint<Cx<R>>> {
    if n < 2 {
        return Err(Error::InvalidInput("polygon needs at least two vertices".into()));
    }
    if !(mass.to_f64() > 0.0) {
        return Err(Error::InvalidInput("mass must be positive".into()));
    }
    let nn = R::from_i64(n as i64);
    let mut coords = vec![Cx::zero(); 2 * n];
    for i in 0..n {
        let (s, c) = (R::tau() * R::from_i64(i as i64) / nn).sin_cos();
        coords[i] = Cx::real(c);
        coords[n + i] = Cx::real(s);
    }
    let mut dist = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for k in (i + 1)..n {
            let (s, _) = (R::pi() * R::from_i64((k - i) as i64) / nn).sin_cos();
            dist.push(Cx::real(R::from_i64(2) * s));
        }
    }
    let masses = vec![Cx::real(mass); n];
    let cfg = Config::new(masses, coords, dist)?;
    normalize_multiplier(darboux_point(&cfg, 1e-12)?)
}

/// Triangle with prescribed complex side values (d12, d13, d23): body 1 at
/// the origin, body 2 at (d12, 0), body 3 placed by the law of cosines with
/// the principal square root for its height. The given sides become the
/// recorded distances.
pub fn triangle_from_sides<R: Real>(
    masses: [Cx<R>; 3],
    d12: Cx<R>,
    d13: Cx<R>,
    d23: Cx<R>,
) -> Result<Config<Cx<R>>> {
    if d12.is_zero() {
        return Err(Error::SingularConfiguration("bodies 1 and 2 coincide".into()));
    }
    let two = Cx::real(R::from_i64(2));
    let x3 = (d12 * d12 + d13 * d13 - d23 * d23) / (two * d12);
    let y3 = (d13 * d13 - x3 * x3).sqrt();
    let coords = vec![Cx::zero(), d12, x3, Cx::zero(), Cx::zero(), y3];
    let dist = vec![d12, d13, d23];
    Config::new(masses.to_vec(), coords, dist)
}

/// Masses of the decoupling triangle: the unique positive solution (up to
/// relabeling) with total mass 1 built from sqrt 21 and
/// sqrt(126 + 42 sqrt 21).
pub fn irrational_triple_masses() -> (Dd, Dd, Dd) {
    let s21 = Dd::from_i64(21).sqrt();
    let inner = (Dd::from_i64(126) + Dd::from_i64(42) * s21).sqrt();
    let quarter = Dd::from_ratio(1, 4);
    let c84 = Dd::from_i64(84);
    let ma = quarter + (s21 + inner) / c84;
    let mb = Dd::from_ratio(1, 2) - s21 / Dd::from_i64(42);
    let mc = quarter + (s21 - inner) / c84;
    (ma, mb, mc)
}

/// Equilateral-modulus complex triangle carrying the irrational mass triple:
/// two sides record 1 and the side opposite mass B records a primitive cube
/// root of unity, so every recorded r^3 is 1 and the recentered multiplier
/// is exactly -1 for total mass 1. The default orientation takes
/// j = exp(-2 pi i / 3); `conjugate` flips the imaginary part.
pub fn irrational_triple(conjugate: bool) -> Result<DarbouxPoint<Cx<Dd>>> {
    let (ma, mb, mc) = irrational_triple_masses();
    let half = Dd::from_ratio(1, 2);
    let s3h = Dd::from_i64(3).sqrt() * half;
    let j = if conjugate { Cx::new(-half, s3h) } else { Cx::new(-half, -s3h) };
    let cfg = triangle_from_sides(
        [Cx::real(ma), Cx::real(mc), Cx::real(mb)],
        j,
        Cx::one(),
        Cx::one(),
    )?;
    darboux_point(&cfg, 1e-30)
}

/// Newton refinement of a guessed configuration toward a Darboux point in
/// the multiplier -1 form. The residual equation recenters the bodies, so
/// translations and the rotation both lie in the Jacobian kernel; the gauge
/// is fixed by pinning x1, y1, and y2 at their guessed values. Distances are
/// re-recorded on the principal branch after every update.
pub fn newton_refine<R: Real>(guess: &Config<Cx<R>>) -> Result<DarbouxPoint<Cx<R>>> {
    const MAX_ITER: usize = 50;
    let tol = 1e-12;
    let n = guess.n();
    let unknowns: Vec<usize> = (0..2 * n).filter(|j| ![0, n, n + 1].contains(j)).collect();
    let mut cfg = guess.clone();
    for _ in 0..=MAX_ITER {
        let f = gauge_residual(&cfg);
        let fmax = f.iter().map(|v| v.abs().to_f64()).fold(0.0f64, f64::max);
        if fmax <= tol {
            return darboux_point(&cfg, tol);
        }
        let w = w_from_config(&cfg);
        let masses = cfg.masses().to_vec();
        let total = cfg.total_mass();
        // J = W + I - P with P the per-block barycenter averaging.
        let jac = CMat::from_fn(2 * n, unknowns.len(), |r, cu| {
            let c = unknowns[cu];
            let mut v = w[(r, c)];
            if r == c {
                v = v + Cx::one();
            }
            if (r < n) == (c < n) {
                v = v - masses[c % n] / total;
            }
            v
        });
        let rhs: Vec<Cx<R>> = {
            let jt = jac.adjoint();
            let jf = jt.mul_vec(&f);
            jf.into_iter().map(|v| -v).collect()
        };
        let normal = jac.adjoint().mul(&jac);
        let delta = lu_solve(&normal, &rhs)?;
        let mut coords = cfg.coords().to_vec();
        for (j, d) in unknowns.iter().zip(delta.iter()) {
            coords[*j] = coords[*j] + *d;
        }
        cfg = Config::from_coords(masses, coords)?;
    }
    Err(Error::NoConvergence(format!(
        "newton refinement did not reach residual {tol:.1e} in {MAX_ITER} iterations"
    )))
}

/// Residual a(c) + (c - barycenter(c)) of the recentered multiplier -1
/// condition, evaluated without moving the bodies.
fn gauge_residual<R: Real>(cfg: &Config<Cx<R>>) -> Vec<Cx<R>> {
    let n = cfg.n();
    let a = mass_scaled_acceleration(cfg);
    let (bx, by) = cfg.barycenter();
    (0..2 * n)
        .map(|j| {
            let b = if j < n { bx } else { by };
            a[j] + cfg.coords()[j] - b
        })
        .collect()
}

/// Kinetic minus potential energy for momenta in the layout
/// (px1..pxn, py1..pyn), with the convention q'' = +dV/dq.
pub fn hamiltonian<K: Field>(cfg: &Config<K>, p: &[K]) -> Result<K> {
    let n = cfg.n();
    if p.len() != 2 * n {
        return Err(Error::InvalidInput(format!("expected {} momenta, got {}", 2 * n, p.len())));
    }
    let mut t = K::zero();
    let two = K::from_i64(2);
    for (j, pj) in p.iter().enumerate() {
        t = t + pj.clone() * pj.clone() / (two.clone() * cfg.masses()[j % n].clone());
    }
    Ok(t - potential_value(cfg))
}

/// Total angular momentum sum (x_i py_i - y_i px_i).
pub fn angular_momentum<K: Field>(cfg: &Config<K>, p: &[K]) -> Result<K> {
    let n = cfg.n();
    if p.len() != 2 * n {
        return Err(Error::InvalidInput(format!("expected {} momenta, got {}", 2 * n, p.len())));
    }
    let mut c = K::zero();
    for i in 0..n {
        c = c + cfg.coords()[i].clone() * p[n + i].clone()
            - cfg.coords()[n + i].clone() * p[i].clone();
    }
    Ok(c)
}

/// Phase-space scaling (p, q) -> (alpha p, alpha^-2 q), under which the
/// Hamiltonian picks up alpha^2 and the angular momentum alpha^-1. Recorded
/// distances follow the coordinates.
pub fn scale_phase<K: Field>(
    cfg: &Config<K>,
    p: &[K],
    alpha: &K,
) -> Result<(Config<K>, Vec<K>)> {
    if alpha.is_zero() {
        return Err(Error::InvalidInput("scaling parameter must be nonzero".into()));
    }
    if p.len() != 2 * cfg.n() {
        return Err(Error::InvalidInput(format!(
            "expected {} momenta, got {}",
            2 * cfg.n(),
            p.len()
        )));
    }
    let inv2 = K::one() / (alpha.clone() * alpha.clone());
    let scaled = cfg.scaled(&inv2);
    let pnew = p.iter().map(|x| x.clone() * alpha.clone()).collect();
    Ok((scaled, pnew))
}

/// One accepted integrator step of the radial two-body problem.
#[derive(Clone, Copy, Debug)]
pub struct RadialSample<R> {
    pub t: R,
    pub phi: R,
    pub phi_dot: R,
}

/// Integrates the radial equation phi'' = C^2/phi^3 - 1/phi^2 from phi(0) =
/// phi0 with the outward initial speed fixed by the energy H, returning all
/// accepted steps. A trajectory approaching phi = 0 is rejected.
pub fn radial_trajectory<R: Real>(
    c: R,
    h: R,
    phi0: R,
    t_end: R,
    opts: &OdeOptions,
) -> Result<Vec<RadialSample<R>>> {
    if !(phi0.to_f64() > 0.0) {
        return Err(Error::InvalidInput("initial radius must be positive".into()));
    }
    let two = R::from_i64(2);
    let mut v2 = two * h - c * c / (phi0 * phi0) + two / phi0;
    // A circular orbit sits exactly on the barrier; tolerate cancellation
    // noise there but reject energies genuinely below it.
    let scale = (two * h).abs().to_f64() + (c * c / (phi0 * phi0)).to_f64().abs()
        + (two / phi0).to_f64().abs();
    if v2.to_f64() < -1e-12 * scale.max(1.0) {
        return Err(Error::InvalidInput(
            "energy is below the effective potential at the initial radius".into(),
        ));
    }
    if v2.to_f64() < 0.0 {
        v2 = R::zero();
    }
    let c2 = c * c;
    let mut samples: Vec<RadialSample<R>> = Vec::new();
    let rhs = |_t: R, y: &[Cx<R>]| {
        let phi = y[0];
        let phi3 = phi * phi * phi;
        vec![y[1], Cx::real(c2) / phi3 - Cx::one() / (phi * phi)]
    };
    let y0 = [Cx::real(phi0), Cx::real(v2.sqrt())];
    integrate_observed(rhs, R::zero(), t_end, &y0, opts, |t, y| {
        samples.push(RadialSample { t, phi: y[0].re, phi_dot: y[1].re });
    })?;
    let floor = 1e-8 * phi0.to_f64();
    if samples.iter().any(|s| s.phi.to_f64() <= floor) {
        return Err(Error::SingularConfiguration(
            "radial trajectory reached the collision".into(),
        ));
    }
    Ok(samples)
}

/// Largest deviation of the conic energy relation
/// phi_dot^2/2 + C^2/(2 phi^2) - 1/phi - H along a trajectory sample.
pub fn conic_energy_residual<R: Real>(c: R, h: R, samples: &[RadialSample<R>]) -> Result<R> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("empty trajectory sample".into()));
    }
    let half = R::from_ratio(1, 2);
    let mut worst = R::zero();
    for s in samples {
        if s.phi.abs().to_f64() < 1e-300 {
            return Err(Error::SingularConfiguration(
                "trajectory sample touches phi = 0".into(),
            ));
        }
        let e = half * s.phi_dot * s.phi_dot + half * c * c / (s.phi * s.phi)
            - R::one() / s.phi
            - h;
        worst = worst.max(e.abs());
    }
    Ok(worst)
}
