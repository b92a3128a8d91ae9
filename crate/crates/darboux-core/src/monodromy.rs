//! Numerical monodromy of the variational equation: analytic continuation
//! of the fundamental solution matrix along loops in the complex time
//! plane, one generator per finite singular point, and an abelianity
//! certificate for the identity component of the differential Galois group
//! (for equations all of whose singular points are regular, the monodromy
//! group is Zariski-dense in the Galois group).
//!
//! Loop geometry is deterministic: each generator is a "lollipop" from the
//! base point, a corridor at height r in the upper half-plane, and a full
//! counterclockwise circle of radius r around the target, r being half the
//! distance to the nearest other singular point. With the corridors in the
//! upper half-plane and branch cuts drawn straight down, a loop's homotopy
//! class is read off from its cut crossings, which fixes the product
//! relation: generators multiplied in ascending order of singularity
//! location, each new factor on the left, equal the counterclockwise
//! enclosing loop, i.e. the inverse of the loop at infinity.

use crate::cx::{Cdd, Cx};
use crate::dd::Dd;
use crate::ode::{integrate, OdeOptions};
use crate::variational::{indicial_exponents, EquationPoint, VariationalEquation};
use crate::{Error, Result};

/// Commutator size below which the monodromy generators are reported
/// abelian; deviations within a factor 100 above it are inconclusive.
pub const ABELIANITY_THRESHOLD: f64 = 1e-6;

/// Polygon resolution of the circular arcs. Clearance shrinks only by
/// cos(pi/ARC_SEGMENTS) relative to the ideal circle.
const ARC_SEGMENTS: usize = 24;

type M2 = [[Cdd; 2]; 2];

fn ident2() -> M2 {
    [[Cx::one(), Cx::zero()], [Cx::zero(), Cx::one()]]
}

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[Cx::zero(); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn sub2(a: &M2, b: &M2) -> M2 {
    let mut out = [[Cx::zero(); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = a[i][j] - b[i][j];
        }
    }
    out
}

fn det2(m: &M2) -> Cdd {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn inv2(m: &M2) -> M2 {
    let d = det2(m);
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

/// Spectral norm of a 2x2 complex matrix, through the closed-form singular
/// values: s^2 solves s^4 - |M|_F^2 s^2 + |det M|^2 = 0.
fn op_norm2(m: &M2) -> f64 {
    let mut f2 = Dd::ZERO;
    for row in m {
        for entry in row {
            f2 = f2 + entry.norm_sqr();
        }
    }
    let d2 = det2(m).norm_sqr();
    let gap = (f2 * f2 - Dd::from_i64(4) * d2).max(Dd::ZERO);
    (((f2 + gap.sqrt()) / Dd::from_i64(2)).sqrt()).to_f64()
}

/// Eigenvalues of a 2x2 complex matrix, unordered.
fn eig2(m: &M2) -> (Cdd, Cdd) {
    let tr = m[0][0] + m[1][1];
    let s = (tr * tr - det2(m).scale(Dd::from_i64(4))).sqrt();
    let half = Dd::from_ratio(1, 2);
    ((tr + s).scale(half), (tr - s).scale(half))
}

/// An eigenvector for an (approximate) eigenvalue, when the matrix is not
/// scalar there.
fn eigenvector2(m: &M2, mu: Cdd) -> Option<[Cdd; 2]> {
    let a = m[0][0] - mu;
    let b = m[0][1];
    let c = m[1][0];
    let d = m[1][1] - mu;
    let v1 = [b, -a];
    let v2 = [d, -c];
    let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
    let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
    let (v, n) = if n1.to_f64() >= n2.to_f64() { (v1, n1) } else { (v2, n2) };
    let scale = m.iter().flatten().map(|z| z.abs().to_f64()).fold(1.0, f64::max);
    if n.sqrt().to_f64() <= 1e-25 * scale {
        return None;
    }
    Some(v)
}

/// Sine of the angle between M v and the line through v.
fn line_residual(m: &M2, v: &[Cdd; 2]) -> f64 {
    let w = [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
    let vv = v[0].norm_sqr() + v[1].norm_sqr();
    let vw = v[0].conj() * w[0] + v[1].conj() * w[1];
    let coef = vw.scale(Dd::ONE / vv);
    let r = [w[0] - v[0] * coef, w[1] - v[1] * coef];
    let wn = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt().to_f64();
    if wn == 0.0 {
        return 0.0;
    }
    (r[0].norm_sqr() + r[1].norm_sqr()).sqrt().to_f64() / wn
}

/// How badly M fails to map the line of `from` onto the line of `to`.
fn maps_line_residual(m: &M2, from: &[Cdd; 2], to: &[Cdd; 2]) -> f64 {
    let w = [m[0][0] * from[0] + m[0][1] * from[1], m[1][0] * from[0] + m[1][1] * from[1]];
    let tt = to[0].norm_sqr() + to[1].norm_sqr();
    let tw = to[0].conj() * w[0] + to[1].conj() * w[1];
    let coef = tw.scale(Dd::ONE / tt);
    let r = [w[0] - to[0] * coef, w[1] - to[1] * coef];
    let wn = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt().to_f64();
    if wn == 0.0 {
        return 0.0;
    }
    (r[0].norm_sqr() + r[1].norm_sqr()).sqrt().to_f64() / wn
}

/// Closed loop in the complex time plane, described by straight segments
/// between consecutive waypoints.
#[derive(Clone, Debug)]
pub struct LoopPath {
    pub base_point: Cdd,
    /// First and last waypoint equal the base point.
    pub waypoints: Vec<Cdd>,
    /// `None` for a contractible loop; the enclosing loop around every
    /// finite singular point carries `Infinity` (its transport is the
    /// inverse of the monodromy at infinity).
    pub encircled: Option<EquationPoint>,
    /// Smallest distance from the path to any singular point.
    pub clearance: f64,
}

fn seg_point_distance(a: Cdd, b: Cdd, p: Cdd) -> f64 {
    let v = b - a;
    let vv = v.norm_sqr().to_f64();
    if vv == 0.0 {
        return (p - a).abs().to_f64();
    }
    let t = ((p - a).conj() * v).re.to_f64() / vv;
    let t = t.clamp(0.0, 1.0);
    (p - (a + v.scale(Dd::from_f64(t)))).abs().to_f64()
}

fn path_clearance(waypoints: &[Cdd], sings: &[Cdd]) -> f64 {
    let mut best = f64::INFINITY;
    for w in waypoints.windows(2) {
        for s in sings {
            best = best.min(seg_point_distance(w[0], w[1], *s));
        }
    }
    best
}

impl LoopPath {
    /// Wraps an explicit waypoint list, validating closure and measuring
    /// the clearance against the equation's finite singular points.
    pub fn from_waypoints(
        eq: &VariationalEquation,
        waypoints: Vec<Cdd>,
        encircled: Option<EquationPoint>,
    ) -> Result<LoopPath> {
        if waypoints.len() < 2 {
            return Err(Error::InvalidInput("a loop needs at least two waypoints".into()));
        }
        let first = waypoints[0];
        let last = *waypoints.last().unwrap();
        if (first - last).abs().to_f64() > 0.0 {
            return Err(Error::InvalidInput("loop waypoints must close up exactly".into()));
        }
        let sings = finite_singular_points(eq);
        let clearance = path_clearance(&waypoints, &sings);
        if clearance <= 0.0 {
            return Err(Error::InvalidInput("loop passes through a singular point".into()));
        }
        Ok(LoopPath { base_point: first, waypoints, encircled, clearance })
    }
}

/// Finite singular points of the equation (zeros of the leading
/// coefficient), deduplicated and sorted by real then imaginary part.
pub fn finite_singular_points(eq: &VariationalEquation) -> Vec<Cdd> {
    let c2 = eq.c * eq.c;
    let two_h = eq.h.scale(Dd::from_i64(2));
    let scale = c2.abs().to_f64().max(two_h.abs().to_f64()).max(2.0);
    let mut pts = vec![Cx::zero()];
    if two_h.abs().to_f64() > 1e-25 * scale {
        // 2h t^2 + 2t - c^2 = 0.
        let s = (Cx::one() + two_h * c2).sqrt();
        let den = two_h;
        pts.push((-Cx::one() + s) / den);
        pts.push((-Cx::one() - s) / den);
    } else if c2.abs().to_f64() > 1e-25 * scale {
        pts.push(c2.scale(Dd::from_ratio(1, 2)));
    }
    let mut out: Vec<Cdd> = Vec::new();
    for p in pts {
        let dup = out
            .iter()
            .any(|q| (*q - p).abs().to_f64() <= 1e-12 * (1.0 + p.abs().to_f64()));
        if !dup {
            out.push(p);
        }
    }
    out.sort_by(|a, b| {
        (a.re.to_f64(), a.im.to_f64())
            .partial_cmp(&(b.re.to_f64(), b.im.to_f64()))
            .unwrap()
    });
    out
}

fn circle_arc(center: Cdd, radius: Dd) -> Vec<Cdd> {
    // Full counterclockwise turn starting and ending at the top.
    (0..=ARC_SEGMENTS)
        .map(|j| {
            let ang = Dd::PI / Dd::from_i64(2)
                + Dd::TAU * Dd::from_i64(j as i64) / Dd::from_i64(ARC_SEGMENTS as i64);
            let (s, c) = ang.sin_cos();
            center + Cx::new(c, s).scale(radius)
        })
        .collect()
}

/// Lollipop loop around one finite singular point: up from the base to
/// height r, horizontally to above the target, once counterclockwise
/// around the circle of radius r, and back the same way.
pub fn loop_around(eq: &VariationalEquation, singularity: Cdd, base: Cdd) -> Result<LoopPath> {
    let sings = finite_singular_points(eq);
    let is_target = |p: &Cdd| (*p - singularity).abs().to_f64() <= 1e-10 * (1.0 + p.abs().to_f64());
    if !sings.iter().any(is_target) {
        return Err(Error::InvalidInput(
            "loop target is not a singular point of the equation".into(),
        ));
    }
    let nearest_other = sings
        .iter()
        .filter(|p| !is_target(p))
        .map(|p| (*p - singularity).abs())
        .fold(None::<Dd>, |acc, d| Some(acc.map_or(d, |a| a.min(d))));
    let radius = match nearest_other {
        Some(d) => d / Dd::from_i64(2),
        None => (base - singularity).abs() / Dd::from_i64(2),
    };
    if radius.to_f64() <= 0.0 {
        return Err(Error::SingularConfiguration("coincident singular points".into()));
    }
    let lift = Cx::new(Dd::ZERO, radius);
    let mut waypoints = vec![base, base + lift];
    waypoints.extend(circle_arc(singularity, radius));
    waypoints.push(base + lift);
    waypoints.push(base);
    let path = LoopPath::from_waypoints(
        eq,
        waypoints,
        Some(EquationPoint::Finite(singularity)),
    )?;
    if path.clearance < 0.05 * radius.to_f64() {
        return Err(Error::Inconclusive(
            "loop corridor passes too close to another singular point".into(),
        ));
    }
    Ok(path)
}

/// Counterclockwise circle enclosing every finite singular point, reached
/// from the base along a straight segment to the circle's top.
pub fn enclosing_loop(eq: &VariationalEquation, base: Cdd) -> Result<LoopPath> {
    let sings = finite_singular_points(eq);
    let reach = sings.iter().map(|p| p.abs().to_f64()).fold(1.0, f64::max);
    let radius = Dd::from_f64(2.0 * reach);
    let top = Cx::new(Dd::ZERO, radius);
    let mut waypoints = vec![base, top];
    waypoints.extend(circle_arc(Cx::zero(), radius).into_iter().skip(1));
    waypoints.push(base);
    LoopPath::from_waypoints(eq, waypoints, Some(EquationPoint::Infinity))
}

/// Small square based at the base point, encircling nothing.
pub fn contractible_loop(eq: &VariationalEquation, base: Cdd) -> Result<LoopPath> {
    let sings = finite_singular_points(eq);
    let dist = sings
        .iter()
        .map(|p| (*p - base).abs().to_f64())
        .fold(f64::INFINITY, f64::min);
    if !dist.is_finite() || dist <= 0.0 {
        return Err(Error::InvalidInput("base point sits on a singular point".into()));
    }
    let d = Dd::from_f64(dist / 4.0);
    let waypoints = vec![
        base,
        base + Cx::new(d, Dd::ZERO),
        base + Cx::new(d, d),
        base + Cx::new(Dd::ZERO, d),
        base,
    ];
    LoopPath::from_waypoints(eq, waypoints, None)
}

/// Transport of the fundamental matrix along a closed loop.
#[derive(Clone, Debug)]
pub struct FundamentalMatrix {
    /// Columns are the two basis solutions, initial data (1,0) and (0,1) at
    /// the base point; rows are (X, X').
    pub entries: M2,
    pub path: LoopPath,
    /// Entrywise difference between runs at the working and 32x tighter
    /// tolerance, combined with the Wronskian transport defect
    /// |det - exp(integral of -q/p)|.
    pub estimated_error: f64,
}

fn transport(eq: &VariationalEquation, waypoints: &[Cdd], tol: f64) -> Result<(M2, Cdd)> {
    let opts = OdeOptions {
        rtol: tol.max(1e-28),
        atol: (tol * 1e-3).max(1e-30),
        max_steps: 2_000_000,
    };
    // State: (x1, x1', x2, x2', u) with u accumulating the Abel integral.
    let mut y =
        vec![Cx::one(), Cx::zero(), Cx::zero(), Cx::one(), Cx::zero()];
    for w in waypoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        let dz = b - a;
        if dz.abs().to_f64() == 0.0 {
            continue;
        }
        y = integrate(
            |s: Dd, y: &[Cdd]| {
                let z = a + dz.scale(s);
                let p = eq.p(z);
                let q = eq.q(z);
                vec![
                    y[1] * dz,
                    (eq.lambda * y[0] - q * y[1]) / p * dz,
                    y[3] * dz,
                    (eq.lambda * y[2] - q * y[3]) / p * dz,
                    -q / p * dz,
                ]
            },
            Dd::ZERO,
            Dd::ONE,
            &y,
            &opts,
        )?;
    }
    Ok(([[y[0], y[2]], [y[1], y[3]]], y[4]))
}

/// Continues the basis solution pair around the loop and returns the
/// transport matrix at the base point, with an a-posteriori error bound
/// from a second run at 32x tighter tolerance.
///
/// Transports with large unipotent parts amplify integration error by the
/// size of their off-diagonal entries; commutator-level diagnostics on
/// such matrices need a correspondingly tighter working tolerance.
pub fn continue_solution(
    eq: &VariationalEquation,
    path: &LoopPath,
    tol: f64,
) -> Result<FundamentalMatrix> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if path.clearance <= 0.0 {
        return Err(Error::InvalidInput("path touches a singular point".into()));
    }
    let (coarse, _) = transport(eq, &path.waypoints, tol)?;
    let (fine, u) = transport(eq, &path.waypoints, tol / 32.0)?;
    let mut halving = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            halving = halving.max((fine[i][j] - coarse[i][j]).abs().to_f64());
        }
    }
    let abel_defect = (det2(&fine) - u.exp()).abs().to_f64();
    Ok(FundamentalMatrix {
        entries: fine,
        path: path.clone(),
        estimated_error: halving.max(abel_defect).max(1e-30),
    })
}

/// Monodromy generators in a common basis, with the standard consistency
/// diagnostics.
#[derive(Clone, Debug)]
pub struct MonodromyReport {
    /// One generator per finite singular point, ascending by location.
    pub generators: Vec<FundamentalMatrix>,
    /// Transport around the counterclockwise loop enclosing all finite
    /// singular points (inverse of the monodromy at infinity).
    pub enclosing: FundamentalMatrix,
    /// Largest operator-norm deviation of a pairwise generator commutator
    /// from the identity.
    pub max_commutator_deviation: f64,
    /// Relative defect of the pinned product relation: generators composed
    /// in ascending location order, each new factor on the left, against
    /// the enclosing transport.
    pub product_relation_deviation: f64,
    /// Per singular point (finite ones, then infinity): distance between
    /// the generator's eigenvalues and exp(2 pi i rho) of the indicial
    /// exponents, as multisets.
    pub local_exponent_match: Vec<(EquationPoint, f64)>,
}

fn exponent_eigen_deviation(got: (Cdd, Cdd), exponents: (Cdd, Cdd)) -> f64 {
    let turn = |r: Cdd| (Cx::i().scale(Dd::TAU) * r).exp();
    let (e1, e2) = (turn(exponents.0), turn(exponents.1));
    let (l1, l2) = got;
    let a = (l1 - e1).abs().to_f64().max((l2 - e2).abs().to_f64());
    let b = (l1 - e2).abs().to_f64().max((l2 - e1).abs().to_f64());
    a.min(b)
}

/// One loop per finite singular point plus the enclosing relation check,
/// all transports expressed in the base-point basis.
pub fn monodromy_generators(
    eq: &VariationalEquation,
    base: Cdd,
    tol: f64,
) -> Result<MonodromyReport> {
    let sings = finite_singular_points(eq);
    if sings.is_empty() {
        return Err(Error::InvalidInput("the equation has no finite singular point".into()));
    }
    let p_scale = eq.c.abs().to_f64().max(1.0);
    if eq.p(base).abs().to_f64() <= 1e-12 * p_scale {
        return Err(Error::InvalidInput("base point must be an ordinary point".into()));
    }
    let mut generators = Vec::with_capacity(sings.len());
    for s in &sings {
        let path = loop_around(eq, *s, base)?;
        generators.push(continue_solution(eq, &path, tol)?);
    }
    let enclosing = continue_solution(eq, &enclosing_loop(eq, base)?, tol)?;

    let mut max_commutator_deviation = 0.0_f64;
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            let a = &generators[i].entries;
            let b = &generators[j].entries;
            let comm = mul2(&mul2(a, b), &mul2(&inv2(a), &inv2(b)));
            max_commutator_deviation =
                max_commutator_deviation.max(op_norm2(&sub2(&comm, &ident2())));
        }
    }

    let mut product = ident2();
    for g in &generators {
        product = mul2(&g.entries, &product);
    }
    let product_relation_deviation = op_norm2(&sub2(&product, &enclosing.entries))
        / op_norm2(&enclosing.entries).max(1.0);

    let mut local_exponent_match = Vec::new();
    for (g, s) in generators.iter().zip(&sings) {
        let exps = indicial_exponents(eq, EquationPoint::Finite(*s))?;
        local_exponent_match.push((
            EquationPoint::Finite(*s),
            exponent_eigen_deviation(eig2(&g.entries), exps),
        ));
    }
    if let Ok(exps) = indicial_exponents(eq, EquationPoint::Infinity) {
        let m_inf = inv2(&enclosing.entries);
        local_exponent_match
            .push((EquationPoint::Infinity, exponent_eigen_deviation(eig2(&m_inf), exps)));
    }

    Ok(MonodromyReport {
        generators,
        enclosing,
        max_commutator_deviation,
        product_relation_deviation,
        local_exponent_match,
    })
}

fn unity_defect(mu: Cdd, max_order: usize) -> f64 {
    let mut pw = Cx::one();
    let mut best = f64::INFINITY;
    for _ in 0..max_order {
        pw = pw * mu;
        best = best.min((pw - Cx::one()).abs().to_f64());
    }
    best
}

fn rayleigh(m: &M2, v: &[Cdd; 2]) -> Cdd {
    let w = [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
    let vv = v[0].norm_sqr() + v[1].norm_sqr();
    (v[0].conj() * w[0] + v[1].conj() * w[1]).scale(Dd::ONE / vv)
}

/// Decides whether the identity component of the group generated by the
/// monodromy matrices is abelian.
///
/// Small pairwise commutators certify the group itself abelian. Otherwise
/// the group can still have an abelian identity component in exactly two
/// ways for 2x2 matrices: every generator fixes a common line and acts on
/// it by a root of unity (the closure is then finite-by-unipotent), or the
/// generators permute a common pair of lines (the closure normalizes a
/// torus). Deviations inside the band [threshold, 100 threshold] are never
/// converted into a verdict.
pub fn abelianity_certificate(report: &MonodromyReport, threshold: f64) -> Result<bool> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidInput("threshold must be positive".into()));
    }
    let worst_err = report
        .generators
        .iter()
        .chain(std::iter::once(&report.enclosing))
        .map(|g| g.estimated_error)
        .fold(0.0, f64::max);
    if worst_err > threshold / 10.0 {
        return Err(Error::Inconclusive(format!(
            "integration error {worst_err:.2e} too large for threshold {threshold:.2e}"
        )));
    }
    let dev = report.max_commutator_deviation;
    if dev < threshold {
        return Ok(true);
    }
    if dev <= 100.0 * threshold {
        return Err(Error::Inconclusive(format!(
            "commutator deviation {dev:.2e} falls in the noise band"
        )));
    }
    let mats: Vec<&M2> = report.generators.iter().map(|g| &g.entries).collect();
    let band = |x: f64| x > threshold && x <= 100.0 * threshold;

    // Candidate invariant lines: eigenvectors of every generator.
    let mut lines: Vec<[Cdd; 2]> = Vec::new();
    for m in &mats {
        let (l1, l2) = eig2(m);
        for mu in [l1, l2] {
            if let Some(v) = eigenvector2(m, mu) {
                lines.push(v);
            }
        }
    }
    let mut best_line = f64::INFINITY;
    let mut best_vec = None;
    for v in &lines {
        let r = mats.iter().map(|m| line_residual(m, v)).fold(0.0, f64::max);
        if r < best_line {
            best_line = r;
            best_vec = Some(*v);
        }
    }
    if best_line <= threshold {
        // Triangularizable: the identity component is abelian exactly when
        // the action on the common line has finite order throughout.
        let v = best_vec.expect("a line was found");
        let mut worst_unity = 0.0_f64;
        for m in &mats {
            worst_unity = worst_unity.max(unity_defect(rayleigh(m, &v), 24));
        }
        if worst_unity <= threshold {
            return Ok(true);
        }
        if band(worst_unity) {
            return Err(Error::Inconclusive(
                "common-line eigenvalues sit in the root-of-unity noise band".into(),
            ));
        }
        return Ok(false);
    }
    if band(best_line) {
        return Err(Error::Inconclusive("invariant-line residual falls in the noise band".into()));
    }

    // Candidate preserved pairs: eigenvector pairs of generators with well
    // separated eigenvalues.
    let mut best_pair = f64::INFINITY;
    for m in &mats {
        let (l1, l2) = eig2(m);
        if (l1 - l2).abs().to_f64() <= threshold {
            continue;
        }
        let (Some(v1), Some(v2)) = (eigenvector2(m, l1), eigenvector2(m, l2)) else {
            continue;
        };
        let r = mats
            .iter()
            .map(|k| {
                let keep = maps_line_residual(k, &v1, &v1).max(maps_line_residual(k, &v2, &v2));
                let swap = maps_line_residual(k, &v1, &v2).max(maps_line_residual(k, &v2, &v1));
                keep.min(swap)
            })
            .fold(0.0, f64::max);
        best_pair = best_pair.min(r);
    }
    if best_pair <= threshold {
        return Ok(true);
    }
    if band(best_pair) {
        return Err(Error::Inconclusive("line-pair residual falls in the noise band".into()));
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Cdd {
        Cx::from_f64s(re, 0.0)
    }

    #[test]
    fn matrix_helpers_agree_with_hand_values() {
        let a: M2 = [[c(3.0), Cx::zero()], [Cx::zero(), c(4.0)]];
        assert!((op_norm2(&a) - 4.0).abs() < 1e-28);
        let n: M2 = [[Cx::zero(), c(2.0)], [Cx::zero(), Cx::zero()]];
        assert!((op_norm2(&n) - 2.0).abs() < 1e-28);
        let b: M2 = [[Cx::zero(), Cx::one()], [-Cx::one(), Cx::zero()]];
        let ab = mul2(&a, &b);
        assert!((ab[0][1] - c(3.0)).abs().to_f64() < 1e-28);
        assert!((ab[1][0] + c(4.0)).abs().to_f64() < 1e-28);
        let id = mul2(&b, &inv2(&b));
        assert!(op_norm2(&sub2(&id, &ident2())) < 1e-28);
        let (l1, l2) = eig2(&a);
        assert!((l1 - c(4.0)).abs().to_f64() < 1e-28 || (l2 - c(4.0)).abs().to_f64() < 1e-28);
    }

    #[test]
    fn singular_points_match_the_normal_form_locations() {
        let eq = VariationalEquation::normal_form(c(3.0), c(0.5));
        let pts = finite_singular_points(&eq);
        assert_eq!(pts.len(), 3);
        assert!((pts[0] - Cx::real(Dd::from_ratio(-9, 7))).abs().to_f64() < 1e-25);
        assert!(pts[1].abs().to_f64() < 1e-25);
        assert!((pts[2] - Cx::one()).abs().to_f64() < 1e-25);

        // The double root at C = 1 collapses to a single reported point.
        let merged = VariationalEquation::normal_form(c(1.0), c(2.0));
        assert_eq!(finite_singular_points(&merged).len(), 2);

        let parabolic =
            VariationalEquation::normal_form(Cx::real(Dd::from_i64(2).sqrt()), c(2.0));
        let pts = finite_singular_points(&parabolic);
        assert_eq!(pts.len(), 2);
        assert!((pts[1] - Cx::one()).abs().to_f64() < 1e-25);
    }

    #[test]
    fn loop_geometry_is_clean() {
        let eq = VariationalEquation::normal_form(c(3.0), c(0.5));
        let base = Cx::from_f64s(0.5, 0.0);
        let path = loop_around(&eq, Cx::zero(), base).unwrap();
        assert_eq!(path.waypoints.first(), path.waypoints.last());
        // Radius 1/2 to the nearest singularity at t = 1, shaved only by
        // the polygonal arc.
        assert!(path.clearance > 0.49 && path.clearance <= 0.5);
        assert_eq!(path.encircled, Some(EquationPoint::Finite(Cx::zero())));

        let big = enclosing_loop(&eq, base).unwrap();
        assert!(big.clearance > 0.4);
        assert_eq!(big.encircled, Some(EquationPoint::Infinity));

        assert!(loop_around(&eq, c(0.25), base).is_err());
    }

    #[test]
    fn contractible_transport_is_the_identity() {
        let eq = VariationalEquation::normal_form(c(3.0), c(0.5));
        let base = Cx::from_f64s(0.5, 0.0);
        let path = contractible_loop(&eq, base).unwrap();
        let m = continue_solution(&eq, &path, 1e-12).unwrap();
        assert!(op_norm2(&sub2(&m.entries, &ident2())) <= 1e-10);
        assert!(m.estimated_error <= 1e-10);
    }

    #[test]
    fn wronskian_transport_matches_the_residues() {
        // Residues of q/p pin the determinants: det = 1 around t = 0 and
        // det = -1 around t = 1 for generic C.
        let eq = VariationalEquation::normal_form(c(3.0), c(0.5));
        let base = Cx::from_f64s(0.5, 0.0);
        let m0 = continue_solution(&eq, &loop_around(&eq, Cx::zero(), base).unwrap(), 1e-12)
            .unwrap();
        assert!((det2(&m0.entries) - Cx::one()).abs().to_f64() <= 1e-9);
        let m1 = continue_solution(&eq, &loop_around(&eq, Cx::one(), base).unwrap(), 1e-12)
            .unwrap();
        assert!((det2(&m1.entries) + Cx::one()).abs().to_f64() <= 1e-9);
    }
}
