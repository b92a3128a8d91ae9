//! The second-order equation governing normal perturbations along the
//! homothetic orbit of a Darboux point,
//!
//! ```text
//! t (-C^2 + 2t + 2H t^2) X'' + (C^2 - t) X' = lambda X,
//! ```
//!
//! Fuchsian on the Riemann sphere. This module classifies the conserved
//! pair (C, H) into the rows of the integrability table, matches spectral
//! values against each row's allowed family, locates singular points with
//! their exponents and logarithm obstructions, verifies the closed-form
//! solutions at lambda in {0, -1}, runs an exact product-form solution
//! search, and applies the hypergeometric truncation criterion in the two
//! confluent regimes.

use crate::cx::{Cdd, Cx};
use crate::dd::Dd;
use crate::exact::{rat, rat_sqrt, Field, Mat, Poly, Rat, Ring};
use crate::{Error, Result};
use num_traits::{Signed, ToPrimitive};

/// Largest index tried when matching a spectral value against the allowed
/// integer families.
pub const DEFAULT_K_BOUND: i64 = 1_000_000;

/// Window for identifying a floating C (or C^2, or a vanishing coefficient)
/// with one of the critical values 0, 1, sqrt(2).
const CONFLUENCE_TOL: f64 = 1e-12;

/// A floating value must land within this of an exact family member (or an
/// integer index) to be reported as a match.
const MATCH_TOL: f64 = 1e-9;

/// Tail degrees beyond this are outside the range the product search is
/// meant for; the integer families are matched analytically instead.
const DEGREE_CAP: usize = 256;

fn cint(n: i64) -> Cdd {
    Cx::real(Dd::from_i64(n))
}

fn cratio(n: i64, d: i64) -> Cdd {
    Cx::real(Dd::from_ratio(n, d))
}

/// Row of the integrability table for a conserved pair (C, H). The product
/// C^2 H is constant along the admissible rescalings, so the row depends
/// only on that product and on which of C, H vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// C = H = 0: the equation degenerates and no spectral value is excluded.
    BothZero,
    /// C = 0 with H nonzero.
    ZeroC,
    /// H = 0 with C nonzero; scaling representative C = sqrt(2).
    ZeroH,
    /// C^2 H = -1/2; scaling representative C = 1.
    MinusHalf,
    /// Every other orbit.
    Generic,
}

/// A regime together with a representative C on the same scaling orbit,
/// normalized so that the companion value is H = C^2/2 - 1.
#[derive(Clone, Copy, Debug)]
pub struct LevelClass {
    pub regime: Regime,
    pub representative_c: Cdd,
}

/// Classifies a conserved pair. Vanishing tests use the same absolute
/// window as the confluence detection on C.
pub fn level_class(c: Cdd, h: Cdd) -> LevelClass {
    let c_zero = c.abs().to_f64() <= CONFLUENCE_TOL;
    let h_zero = h.abs().to_f64() <= CONFLUENCE_TOL;
    let invariant = c * c * h;
    if c_zero && h_zero {
        return LevelClass { regime: Regime::BothZero, representative_c: Cx::zero() };
    }
    if c_zero {
        return LevelClass { regime: Regime::ZeroC, representative_c: Cx::zero() };
    }
    if h_zero {
        return LevelClass { regime: Regime::ZeroH, representative_c: Cx::real(Dd::from_i64(2).sqrt()) };
    }
    if (invariant + cratio(1, 2)).abs().to_f64() <= CONFLUENCE_TOL {
        return LevelClass { regime: Regime::MinusHalf, representative_c: Cx::one() };
    }
    // On the normalized orbit H = C^2/2 - 1 the invariant reads C^4/2 - C^2,
    // so the representative square solves u^2 - 2u - 2 C^2 H = 0.
    let u = Cx::one() + (Cx::one() + invariant.scale(Dd::from_i64(2))).sqrt();
    LevelClass { regime: Regime::Generic, representative_c: u.sqrt() }
}

/// Outcome of testing one spectral value against a regime's allowed family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub regime: Regime,
    /// Whether lambda lies in the regime's allowed family, i.e. whether an
    /// abelian identity component of the differential Galois group remains
    /// possible at this Darboux point.
    pub abelian_possible: bool,
    /// Index into the regime's integer family, when one matched.
    pub matched_k: Option<i64>,
}

/// Rounds a floating index to the nearest integer and accepts it when it is
/// real, in range, and reproduces lambda within the match window.
fn snap_to_family(k: Cdd, lambda: Cdd, k_bound: i64, family: impl Fn(i64) -> Dd) -> Option<i64> {
    let re = k.re.to_f64();
    if !re.is_finite() || !(-0.5..=k_bound as f64 + 0.5).contains(&re) {
        return None;
    }
    let kr = re.round() as i64;
    if kr < 0 || kr > k_bound {
        return None;
    }
    let spread = MATCH_TOL * 1.0_f64.max(k.abs().to_f64());
    if k.im.to_f64().abs() > spread || (re - kr as f64).abs() > spread {
        return None;
    }
    let gap = (lambda - Cx::real(family(kr))).abs().to_f64();
    (gap <= MATCH_TOL * 1.0_f64.max(lambda.abs().to_f64())).then_some(kr)
}

/// The k with lambda = (k-1)(k+2)/2, if lambda lies in that family. The
/// quadratic is inverted analytically: k = (-1 + sqrt(9 + 8 lambda))/2; the
/// other square-root branch maps k to -k-1 and repeats the same values.
fn quadratic_family_index(lambda: Cdd, k_bound: i64) -> Option<i64> {
    let s = (cint(9) + lambda.scale(Dd::from_i64(8))).sqrt();
    let k = (s - Cx::one()).scale(Dd::from_ratio(1, 2));
    snap_to_family(k, lambda, k_bound, |k| {
        Dd::from_i64(k - 1) * Dd::from_i64(k + 2) / Dd::from_i64(2)
    })
}

/// The k with lambda = -k^2, if lambda lies in that family.
fn square_family_index(lambda: Cdd, k_bound: i64) -> Option<i64> {
    let k = (-lambda).sqrt();
    snap_to_family(k, lambda, k_bound, |k| -(Dd::from_i64(k) * Dd::from_i64(k)))
}

/// Tests a spectral value against the allowed family of a regime:
/// (k-1)(k+2)/2 for the two zero rows, -k^2 on the minus-half level, {0, -1}
/// generically, and everything when both invariants vanish.
pub fn allowed_lambda(regime: Regime, lambda: Cdd, k_bound: i64) -> Verdict {
    let (abelian_possible, matched_k) = match regime {
        Regime::BothZero => (true, None),
        Regime::ZeroC | Regime::ZeroH => match quadratic_family_index(lambda, k_bound) {
            Some(k) => (true, Some(k)),
            None => (false, None),
        },
        Regime::MinusHalf => match square_family_index(lambda, k_bound) {
            Some(k) => (true, Some(k)),
            None => (false, None),
        },
        Regime::Generic => {
            let tol = MATCH_TOL * 1.0_f64.max(lambda.abs().to_f64());
            let near = |v: i64| (lambda - cint(v)).abs().to_f64() <= tol;
            (near(0) || near(-1), None)
        }
    };
    Verdict { regime, abelian_possible, matched_k }
}

/// Exact counterpart of [`allowed_lambda`]: membership must hold literally,
/// with the index recovered through an exact square root.
pub fn allowed_lambda_exact(regime: Regime, lambda: &Rat, k_bound: i64) -> Verdict {
    let in_bound = |k: Rat| -> Option<i64> {
        if !k.is_integer() || k.is_negative() {
            return None;
        }
        let k = k.numer().to_i64()?;
        (k <= k_bound).then_some(k)
    };
    let (abelian_possible, matched_k) = match regime {
        Regime::BothZero => (true, None),
        Regime::ZeroC | Regime::ZeroH => {
            let found = rat_sqrt(&(rat(9, 1) + rat(8, 1) * lambda.clone()))
                .map(|s| (s - rat(1, 1)) / rat(2, 1))
                .and_then(in_bound);
            (found.is_some(), found)
        }
        Regime::MinusHalf => {
            let found = rat_sqrt(&(-lambda.clone())).and_then(in_bound);
            (found.is_some(), found)
        }
        Regime::Generic => (lambda.is_zero() || *lambda == rat(-1, 1), None),
    };
    Verdict { regime, abelian_possible, matched_k }
}

/// Coefficients of t(-C^2 + 2t + 2Ht^2) X'' + (C^2 - t) X' = lambda X over
/// the complex field.
#[derive(Clone, Copy, Debug)]
pub struct VariationalEquation {
    pub c: Cdd,
    pub h: Cdd,
    pub lambda: Cdd,
}

impl VariationalEquation {
    pub fn new(c: Cdd, h: Cdd, lambda: Cdd) -> VariationalEquation {
        VariationalEquation { c, h, lambda }
    }

    /// Equation on the scaling representative, where H = C^2/2 - 1.
    pub fn normal_form(c: Cdd, lambda: Cdd) -> VariationalEquation {
        let h = (c * c).scale(Dd::from_ratio(1, 2)) - Cx::one();
        VariationalEquation { c, h, lambda }
    }

    /// Leading coefficient t(-C^2 + 2t + 2Ht^2).
    pub fn p(&self, t: Cdd) -> Cdd {
        t * (-(self.c * self.c) + t.scale(Dd::from_i64(2)) + self.h * t * t * cint(2))
    }

    /// Middle coefficient C^2 - t.
    pub fn q(&self, t: Cdd) -> Cdd {
        self.c * self.c - t
    }

    /// p X'' + q X' - lambda X for a candidate jet at one point.
    pub fn residual(&self, t: Cdd, x: Cdd, dx: Cdd, ddx: Cdd) -> Cdd {
        self.p(t) * ddx + self.q(t) * dx - self.lambda * x
    }

    fn p_poly(&self) -> Poly<Cdd> {
        Poly::from_coeffs(vec![
            Cx::zero(),
            -(self.c * self.c),
            cint(2),
            self.h.scale(Dd::from_i64(2)),
        ])
    }

    fn q_poly(&self) -> Poly<Cdd> {
        Poly::from_coeffs(vec![self.c * self.c, -Cx::one()])
    }
}

/// A point on the Riemann sphere of the independent variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EquationPoint {
    Finite(Cdd),
    Infinity,
}

/// Which critical C a floating input was identified with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confluence {
    /// C = 0: the movable singular point merges with t = 0.
    CZero,
    /// C = 1: the movable singular point merges with t = 1.
    COne,
    /// C = sqrt(2): the movable singular point escapes to infinity.
    CSqrtTwo,
}

/// Singular points of the normal-form equation (H = C^2/2 - 1).
#[derive(Clone, Debug)]
pub struct Singularities {
    /// Finite locations first, then the point at infinity.
    pub points: Vec<EquationPoint>,
    pub confluence: Option<Confluence>,
}

/// Locates the singular points {0, 1, C^2/(2 - C^2), infinity} of the
/// normal-form equation, merging or discarding the movable one at the three
/// critical values of C. The equation sees only C^2, so both signs of C are
/// tested against each critical value.
pub fn singularities(c: Cdd) -> Singularities {
    let near = |target: Dd| {
        let t = Cx::real(target);
        (c - t).abs().to_f64().min((c + t).abs().to_f64()) <= CONFLUENCE_TOL
    };
    let confluence = if near(Dd::ZERO) {
        Some(Confluence::CZero)
    } else if near(Dd::ONE) {
        Some(Confluence::COne)
    } else if near(Dd::from_i64(2).sqrt()) {
        Some(Confluence::CSqrtTwo)
    } else {
        None
    };
    let mut points = vec![EquationPoint::Finite(Cx::zero()), EquationPoint::Finite(Cx::one())];
    if confluence.is_none() {
        let c2 = c * c;
        points.push(EquationPoint::Finite(c2 / (cint(2) - c2)));
    }
    points.push(EquationPoint::Infinity);
    Singularities { points, confluence }
}

/// Local coefficient series at a singular point, normalized so the X''
/// series vanishes to order exactly two: a(s) X'' + b(s) X' + e(s) X with
/// ord a = 2 and, at a regular singular point, ord b >= 1.
struct LocalForm {
    a: Vec<Cdd>,
    b: Vec<Cdd>,
    e: Vec<Cdd>,
    regular: bool,
}

fn coeff_at(v: &[Cdd], i: usize) -> Cdd {
    v.get(i).copied().unwrap_or_else(Cx::zero)
}

/// Index of the first coefficient that is nonzero relative to the largest
/// one. The window is far below any meaningful coefficient of this family
/// but above double-double roundoff.
fn series_order(v: &[Cdd]) -> usize {
    let scale = v.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max);
    if scale == 0.0 {
        return v.len();
    }
    v.iter().position(|x| x.abs().to_f64() > scale * 1e-25).unwrap_or(v.len())
}

fn pad_front(mut v: Vec<Cdd>, pad: usize) -> Vec<Cdd> {
    let mut out = vec![Cx::zero(); pad];
    out.append(&mut v);
    out
}

fn local_form(eq: &VariationalEquation, point: EquationPoint) -> Result<LocalForm> {
    let (a_raw, b_raw, e_raw) = match point {
        EquationPoint::Finite(t0) => {
            let shift = Poly::from_coeffs(vec![t0, Cx::one()]);
            (eq.p_poly().compose(&shift).c, eq.q_poly().compose(&shift).c, vec![-eq.lambda])
        }
        EquationPoint::Infinity => {
            // Under t = 1/u, with pr(u) = u^3 p(1/u) and qr(u) = u q(1/u),
            // the equation becomes u pr Y'' + (2 pr - u qr) Y' - lambda Y = 0.
            let pr = eq.p_poly().reverse(3).c;
            let qr = eq.q_poly().reverse(1).c;
            let a = (0..=4)
                .map(|j| if j == 0 { Cx::zero() } else { coeff_at(&pr, j - 1) })
                .collect();
            let b = (0..=3)
                .map(|j| {
                    let uq = if j == 0 { Cx::zero() } else { coeff_at(&qr, j - 1) };
                    coeff_at(&pr, j).scale(Dd::from_i64(2)) - uq
                })
                .collect();
            (a, b, vec![-eq.lambda])
        }
    };
    let mu = series_order(&a_raw);
    if mu == 0 {
        return Err(Error::NotSingular(format!("{point:?} is an ordinary point of the equation")));
    }
    if mu > 2 {
        return Err(Error::Inconclusive(
            "irregular singular point: the leading coefficient vanishes past order two".into(),
        ));
    }
    let regular = series_order(&b_raw) + 1 >= mu;
    let pad = 2 - mu;
    Ok(LocalForm {
        a: pad_front(a_raw, pad),
        b: pad_front(b_raw, pad),
        e: pad_front(e_raw, pad),
        regular,
    })
}

/// Roots of a r^2 + b r + cterm, larger real part first (ties by imaginary
/// part).
fn quadratic_roots(a: Cdd, b: Cdd, cterm: Cdd) -> (Cdd, Cdd) {
    let s = (b * b - a * cterm * cint(4)).sqrt();
    let den = a.scale(Dd::from_i64(2));
    let r1 = (-b + s) / den;
    let r2 = (-b - s) / den;
    let key = |z: Cdd| (z.re.to_f64(), z.im.to_f64());
    if key(r2) > key(r1) {
        (r2, r1)
    } else {
        (r1, r2)
    }
}

fn indicial_roots(lf: &LocalForm) -> (Cdd, Cdd) {
    let a2 = coeff_at(&lf.a, 2);
    let b1 = coeff_at(&lf.b, 1);
    let e0 = coeff_at(&lf.e, 0);
    quadratic_roots(a2, b1 - a2, e0)
}

/// Indicial exponents at a singular point, larger real part first. Ordinary
/// points are rejected rather than padded with {0, 1}.
pub fn indicial_exponents(eq: &VariationalEquation, point: EquationPoint) -> Result<(Cdd, Cdd)> {
    let lf = local_form(eq, point)?;
    if !lf.regular {
        return Err(Error::Inconclusive("irregular singular point: exponents are undefined".into()));
    }
    Ok(indicial_roots(&lf))
}

/// Coefficient blocking a logarithm-free second solution at a resonant
/// regular singular point. The exponents must differ by a nonnegative
/// integer N; the Frobenius series from the smaller exponent meets a zero
/// indicial value at step N, and the accumulated right-hand side there is
/// returned. Only its vanishing locus is meaningful; the normalization is a
/// byproduct of the recurrence. Equal exponents always force the logarithm,
/// reported as a unit obstruction.
pub fn log_obstruction(
    eq: &VariationalEquation,
    point: EquationPoint,
    series_order: usize,
) -> Result<Cdd> {
    let lf = local_form(eq, point)?;
    if !lf.regular {
        return Err(Error::Inconclusive("irregular singular point: no Frobenius series".into()));
    }
    let (r1, r2) = indicial_roots(&lf);
    let diff = r1 - r2;
    let rounded = diff.re.to_f64().round();
    if rounded < -0.5 || (diff - Cx::real(Dd::from_f64(rounded))).abs().to_f64() > MATCH_TOL {
        return Err(Error::InvalidInput(
            "exponents do not differ by a nonnegative integer, so no logarithm obstruction is defined"
                .into(),
        ));
    }
    let n = rounded as usize;
    if series_order < n {
        return Err(Error::InvalidInput(format!(
            "series order {series_order} does not reach the resonance step {n}"
        )));
    }
    if n == 0 {
        return Ok(Cx::one());
    }
    let a2 = coeff_at(&lf.a, 2);
    let b1 = coeff_at(&lf.b, 1);
    let e0 = coeff_at(&lf.e, 0);
    let indicial = |r: Cdd| a2 * r * (r - Cx::one()) + b1 * r + e0;
    let mut x = vec![Cx::one()];
    for m in 1..=n {
        let mut rhs = Cx::zero();
        for (d, xd) in x.iter().enumerate() {
            let rho = r2 + cint(d as i64);
            let ca = coeff_at(&lf.a, m - d + 2);
            let cb = coeff_at(&lf.b, m - d + 1);
            let ce = coeff_at(&lf.e, m - d);
            rhs += *xd * (ca * rho * (rho - Cx::one()) + cb * rho + ce);
        }
        if m == n {
            return Ok(rhs);
        }
        x.push(-rhs / indicial(r2 + cint(m as i64)));
    }
    unreachable!("the resonance step returns inside the loop");
}

/// Local report at one singular point.
#[derive(Clone, Debug)]
pub struct SingularityData {
    pub location: EquationPoint,
    /// Ordered by descending real part.
    pub exponents: (Cdd, Cdd),
    /// Present at resonant points (exponent difference a nonnegative
    /// integer); zero means the local solutions stay logarithm-free.
    pub log_obstruction: Option<Cdd>,
    pub regular: bool,
}

/// Exponents plus, where defined, the logarithm obstruction at one point.
pub fn singularity_data(eq: &VariationalEquation, point: EquationPoint) -> Result<SingularityData> {
    let exponents = indicial_exponents(eq, point)?;
    let diff = exponents.0 - exponents.1;
    let rounded = diff.re.to_f64().round();
    let resonant =
        rounded >= -0.5 && (diff - Cx::real(Dd::from_f64(rounded))).abs().to_f64() <= MATCH_TOL;
    let log_obstruction = if resonant {
        Some(log_obstruction(eq, point, rounded as usize + 5)?)
    } else {
        None
    };
    Ok(SingularityData { location: point, exponents, log_obstruction, regular: true })
}

/// Closed-form solution report at one of the two spectral values that are
/// allowed in every regime.
#[derive(Clone, Debug)]
pub struct ExplicitSolutionReport {
    pub lambda: i64,
    /// Human-readable forms of the solutions checked.
    pub descriptions: Vec<String>,
    /// Largest relative residual over the sample set.
    pub max_residual: f64,
    pub samples: usize,
}

/// Sample points on a circle that clears every finite singular point of the
/// normal-form equation for this C.
fn sample_circle(c: Cdd, count: usize) -> Result<Vec<Cdd>> {
    let sing = singularities(c);
    let radius = 0.2;
    for (re, im) in [(0.4, 0.25), (0.45, 0.6), (0.3, -0.55)] {
        let center = Cx::from_f64s(re, im);
        let clear = sing.points.iter().all(|p| match p {
            EquationPoint::Finite(z) => (*z - center).abs().to_f64() >= radius + 0.05,
            EquationPoint::Infinity => true,
        });
        if clear {
            return Ok((0..count)
                .map(|j| {
                    let ang = Dd::TAU * Dd::from_i64(j as i64) / Dd::from_i64(count as i64);
                    let (s, co) = ang.sin_cos();
                    center + Cx::new(co, s).scale(Dd::from_f64(radius))
                })
                .collect());
        }
    }
    Err(Error::InvalidInput("no sample circle clears the finite singular points".into()))
}

/// Verifies the closed-form solutions of the normal-form equation at
/// lambda = 0 or lambda = -1 on 50 sample points away from the
/// singularities.
///
/// Writing g = (C^2 - 2) t^2 + 2t - C^2 for the quadratic factor of the
/// leading coefficient (p = t g), the pair at lambda = -1 is t - C^2 and
/// sqrt(g); at lambda = 0 it is the constant 1 and an antiderivative of
/// t/sqrt(g), whose residual needs only X' and X'', so the logarithm in its
/// closed form is never evaluated. Every sample uses one branch of sqrt(g)
/// consistently, which is all a second-order relation can see.
pub fn explicit_solution(c: Cdd, lambda: i64) -> Result<ExplicitSolutionReport> {
    if lambda != 0 && lambda != -1 {
        return Err(Error::InvalidInput(
            "closed forms are available at lambda = 0 and lambda = -1 only".into(),
        ));
    }
    let eq = VariationalEquation::normal_form(c, cint(lambda));
    let c2 = c * c;
    let two = Dd::from_i64(2);
    let g2 = c2 - cint(2);
    let g = |t: Cdd| (g2 * t + cint(2)) * t - c2;
    let dg = |t: Cdd| g2.scale(two) * t + cint(2);
    let ddg = g2.scale(two);
    let pts = sample_circle(c, 50)?;
    let mut worst = 0.0_f64;
    {
        let mut check = |t: Cdd, x: Cdd, dx: Cdd, ddx: Cdd| {
            let r = eq.residual(t, x, dx, ddx).abs().to_f64();
            let scale = 1.0_f64
                .max((eq.p(t) * ddx).abs().to_f64())
                .max((eq.q(t) * dx).abs().to_f64())
                .max((eq.lambda * x).abs().to_f64());
            worst = worst.max(r / scale);
        };
        for &t in &pts {
            let gv = g(t);
            let dgv = dg(t);
            let s = gv.sqrt();
            if lambda == -1 {
                check(t, t - c2, Cx::one(), Cx::zero());
                let ddx = ((gv * ddg).scale(two) - dgv * dgv) / (gv * s).scale(Dd::from_i64(4));
                check(t, s, dgv / s.scale(two), ddx);
            } else {
                check(t, Cx::one(), Cx::zero(), Cx::zero());
                // The antiderivative itself never enters: lambda = 0 removes
                // the X term from the equation.
                let ddx = (gv.scale(two) - t * dgv) / (gv * s).scale(two);
                check(t, Cx::zero(), t / s, ddx);
            }
        }
    }
    let mut descriptions = if lambda == -1 {
        vec!["t - C^2".to_string(), "sqrt((t - 1) * ((C^2 - 2) t + C^2))".to_string()]
    } else {
        vec![
            "1".to_string(),
            "antiderivative of t / sqrt((t - 1) * ((C^2 - 2) t + C^2)), a square-root plus logarithm pair"
                .to_string(),
        ]
    };
    if lambda == -1 && (c2 - Cx::one()).abs().to_f64() <= CONFLUENCE_TOL {
        descriptions
            .push("at C^2 = 1 the pair is dependent: the square root collapses onto t - C^2".into());
    }
    Ok(ExplicitSolutionReport { lambda, descriptions, max_residual: worst, samples: pts.len() })
}

fn p_poly_rat(c2: &Rat) -> Poly<Rat> {
    Poly::from_coeffs(vec![rat(0, 1), -c2.clone(), rat(2, 1), c2.clone() - rat(2, 1)])
}

fn q_poly_rat(c2: &Rat) -> Poly<Rat> {
    Poly::from_coeffs(vec![c2.clone(), rat(-1, 1)])
}

/// Exact analogue of the order-two normalization: returns the indicial data
/// (a2, b1, e0) of a(s) X'' + b(s) X' + e X at s = 0.
fn exact_order2(a: &[Rat], b: &[Rat], e: &[Rat]) -> Result<(Rat, Rat, Rat)> {
    let order = |v: &[Rat]| v.iter().position(|x| !x.is_zero()).unwrap_or(v.len());
    let mu = order(a);
    if mu == 0 {
        return Err(Error::NotSingular("the leading coefficient does not vanish here".into()));
    }
    if mu > 2 || order(b) + 1 < mu {
        return Err(Error::Inconclusive("irregular singular point".into()));
    }
    let at = |v: &[Rat], i: usize| v.get(i).cloned().unwrap_or_else(|| rat(0, 1));
    let e0 = if mu == 2 { at(e, 0) } else { rat(0, 1) };
    Ok((at(a, mu), at(b, mu - 1), e0))
}

fn exact_indicial(c2: &Rat, lambda: &Rat, point: Option<&Rat>) -> Result<(Rat, Rat, Rat)> {
    let p = p_poly_rat(c2);
    let q = q_poly_rat(c2);
    match point {
        Some(t0) => {
            let shift = Poly::from_coeffs(vec![t0.clone(), rat(1, 1)]);
            exact_order2(&p.compose(&shift).c, &q.compose(&shift).c, &[-lambda.clone()])
        }
        None => {
            let pr = p.reverse(3).c;
            let qr = q.reverse(1).c;
            let at = |v: &[Rat], i: usize| v.get(i).cloned().unwrap_or_else(|| rat(0, 1));
            let a: Vec<Rat> = (0..=4)
                .map(|j| if j == 0 { rat(0, 1) } else { at(&pr, j - 1) })
                .collect();
            let b: Vec<Rat> = (0..=3)
                .map(|j| {
                    let uq = if j == 0 { rat(0, 1) } else { at(&qr, j - 1) };
                    rat(2, 1) * at(&pr, j) - uq
                })
                .collect();
            exact_order2(&a, &b, &[-lambda.clone()])
        }
    }
}

/// Rational roots of a r^2 + b r + c, ascending; empty when the discriminant
/// is not a rational square.
fn rational_quadratic_roots(a: &Rat, b: &Rat, c: &Rat) -> Vec<Rat> {
    if a.is_zero() {
        if b.is_zero() {
            return vec![];
        }
        return vec![-c.clone() / b.clone()];
    }
    let disc = b.clone() * b.clone() - rat(4, 1) * a.clone() * c.clone();
    match rat_sqrt(&disc) {
        None => vec![],
        Some(s) => {
            let den = rat(2, 1) * a.clone();
            let r1 = (-b.clone() + s.clone()) / den.clone();
            let r2 = (-b.clone() - s) / den;
            if r1 == r2 {
                vec![r1]
            } else {
                let mut v = vec![r1, r2];
                v.sort();
                v
            }
        }
    }
}

/// Product-form solution prod_i (t - t_i)^{m_i} * P(t): exponents read off
/// the indicial roots at the finite singular points, polynomial tail P.
#[derive(Clone, Debug)]
pub struct ProductSolution {
    pub c_squared: Rat,
    pub lambda: Rat,
    /// Finite singular locations with their nonzero exponents, ascending by
    /// location.
    pub factors: Vec<(Rat, Rat)>,
    /// Monic polynomial tail.
    pub tail: Poly<Rat>,
}

impl ProductSolution {
    /// X'/X and its derivative at t.
    fn log_derivative(&self, t: Cdd) -> (Cdd, Cdd) {
        let mut w = Cx::zero();
        let mut dw = Cx::zero();
        for (loc, m) in &self.factors {
            let mc = m.to_cdd();
            let dz = t - loc.to_cdd();
            w += mc / dz;
            dw -= mc / (dz * dz);
        }
        let tail = self.tail.map(|x| x.to_cdd());
        let d1 = tail.derivative();
        let d2 = d1.derivative();
        let pv = tail.eval(&t);
        let lp = d1.eval(&t) / pv;
        (w + lp, dw + d2.eval(&t) / pv - lp * lp)
    }

    /// Relative residual of the defining equation at t, computed through the
    /// logarithmic derivative W = X'/X, so fractional powers never need a
    /// branch: the equation divided by X reads p (W' + W^2) + q W - lambda.
    pub fn relative_residual(&self, t: Cdd) -> f64 {
        let (w, dw) = self.log_derivative(t);
        let c2 = self.c_squared.to_cdd();
        let lam = self.lambda.to_cdd();
        let p = t * (-c2 + t.scale(Dd::from_i64(2)) + (c2 - cint(2)) * t * t);
        let q = c2 - t;
        let terms = [p * (dw + w * w), q * w, -lam];
        let total = (terms[0] + terms[1] + terms[2]).abs().to_f64();
        let scale =
            terms.iter().fold(1.0_f64, |acc, term| acc.max(term.abs().to_f64()));
        total / scale
    }

    /// Value of the product form at t, taking principal square roots for the
    /// half-integer exponents this family produces.
    pub fn value_at(&self, t: Cdd) -> Result<Cdd> {
        let mut acc = self.tail.map(|x| x.to_cdd()).eval(&t);
        for (loc, m) in &self.factors {
            let doubled = m.clone() * rat(2, 1);
            if !doubled.is_integer() {
                return Err(Error::InvalidInput(
                    "factor exponent is not a half-integer; no canonical branch".into(),
                ));
            }
            let n = doubled
                .numer()
                .to_i32()
                .ok_or_else(|| Error::InvalidInput("factor exponent overflows".into()))?;
            acc = acc * (t - loc.to_cdd()).sqrt().powi(n);
        }
        Ok(acc)
    }

    /// Short display form, e.g. `t^2 * sqrt(t - 1) * (t - 2/3)`.
    pub fn describe(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (loc, m) in &self.factors {
            let inner = if loc.is_zero() {
                "t".to_string()
            } else if loc.is_negative() {
                format!("t + {}", -loc.clone())
            } else {
                format!("t - {loc}")
            };
            let wrapped = if loc.is_zero() { inner.clone() } else { format!("({inner})") };
            parts.push(if *m == rat(1, 1) {
                wrapped
            } else if *m == rat(1, 2) {
                format!("sqrt({inner})")
            } else if m.is_integer() {
                format!("{wrapped}^{m}")
            } else {
                format!("{wrapped}^({m})")
            });
        }
        if self.tail != Poly::from_coeffs(vec![rat(1, 1)]) {
            parts.push(format!("({})", tail_text(&self.tail)));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" * ")
        }
    }
}

/// Renders a rational polynomial in descending powers of t.
fn tail_text(p: &Poly<Rat>) -> String {
    let deg = match p.deg() {
        None => return "0".to_string(),
        Some(d) => d,
    };
    let mut out = String::new();
    for k in (0..=deg).rev() {
        let coeff = p.coeff(k);
        if coeff.is_zero() {
            continue;
        }
        let neg = coeff.is_negative();
        let mag = if neg { -coeff } else { coeff };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let show_mag = k == 0 || mag != rat(1, 1);
        if show_mag {
            out.push_str(&mag.to_string());
        }
        if k > 0 {
            if show_mag {
                out.push(' ');
            }
            out.push('t');
            if k > 1 {
                out.push_str(&format!("^{k}"));
            }
        }
    }
    out
}

fn times_monomial(p: &Poly<Rat>, k: usize) -> Poly<Rat> {
    if p.is_zero() {
        return Poly::zero();
    }
    let mut c = vec![rat(0, 1); k];
    c.extend(p.c.iter().cloned());
    Poly::from_coeffs(c)
}

/// Solves for a degree-d polynomial tail P making prod (t - t_i)^{m_i} P a
/// solution, by exact undetermined coefficients. The transformed equation
/// is cleared of denominators with D = prod (t - t_i), using that S = X'/X
/// of the product part satisfies S D and S' D^2 polynomial.
fn solve_tail(
    p: &Poly<Rat>,
    q: &Poly<Rat>,
    lambda: &Rat,
    factors: &[(Rat, Rat)],
    d: usize,
) -> Option<Poly<Rat>> {
    let active: Vec<(Rat, Rat)> =
        factors.iter().filter(|(_, m)| !m.is_zero()).cloned().collect();
    let mut d1 = Poly::<Rat>::one();
    for (loc, _) in &active {
        d1 = d1 * Poly::linear_root(loc.clone());
    }
    let mut sd1 = Poly::<Rat>::zero();
    let mut spd1 = Poly::<Rat>::zero();
    for (i, (_, mi)) in active.iter().enumerate() {
        let mut rest = Poly::<Rat>::one();
        for (j, (loc_j, _)) in active.iter().enumerate() {
            if i != j {
                rest = rest * Poly::linear_root(loc_j.clone());
            }
        }
        sd1 = sd1 + rest.scale(mi);
        spd1 = spd1 - (rest.clone() * rest).scale(mi);
    }
    let d1sq = d1.clone() * d1.clone();
    let a2p = p.clone() * d1sq.clone();
    let a1p = (p.clone() * sd1.scale(&rat(2, 1)) + q.clone() * d1.clone()) * d1.clone();
    let a0p = p.clone() * (sd1.clone() * sd1.clone() + spd1) + q.clone() * sd1 * d1
        - d1sq.scale(lambda);
    let cols: Vec<Poly<Rat>> = (0..=d)
        .map(|e| {
            let mut col = times_monomial(&a0p, e);
            if e >= 1 {
                col = col + times_monomial(&a1p, e - 1).scale(&rat(e as i64, 1));
            }
            if e >= 2 {
                col = col + times_monomial(&a2p, e - 2).scale(&rat((e * (e - 1)) as i64, 1));
            }
            col
        })
        .collect();
    let rows = cols.iter().map(|c| c.c.len()).max().unwrap_or(0);
    if rows == 0 {
        // The whole operator vanished on polynomials of this degree.
        return Some(Poly::one());
    }
    let mat = Mat::from_fn(rows, d + 1, |r, e| cols[e].coeff(r));
    let tail = Poly::from_coeffs(mat.nullspace().into_iter().next()?).monic();
    // The nullspace already enforces this; keep the check as a guard against
    // coefficient assembly drift.
    let residual = a2p * tail.derivative().derivative() + a1p * tail.derivative()
        + a0p * tail.clone();
    residual.is_zero().then_some(tail)
}

/// Exact search for product-form solutions of the normal-form equation with
/// C^2 rational (sqrt(2) enters through c_squared = 2). Exponents at each
/// finite singular point are drawn from its rational indicial roots, the
/// total degree from the roots at infinity; candidates are tried smallest
/// total degree first and the tail is found by exact undetermined
/// coefficients, so any returned solution is verified. `Ok(None)` means no
/// solution of this shape exists within the degree cap.
pub fn polynomial_solution_search(c_squared: &Rat, lambda: &Rat) -> Result<Option<ProductSolution>> {
    let p = p_poly_rat(c_squared);
    let q = q_poly_rat(c_squared);
    let mut locs = vec![rat(0, 1), rat(1, 1)];
    if *c_squared != rat(2, 1) {
        let third = c_squared.clone() / (rat(2, 1) - c_squared.clone());
        if !locs.contains(&third) {
            locs.push(third);
        }
    }
    let mut choices: Vec<(Rat, Vec<Rat>)> = Vec::new();
    for loc in locs {
        let (a2, b1, e0) = exact_indicial(c_squared, lambda, Some(&loc))?;
        let roots = rational_quadratic_roots(&a2, &(b1 - a2.clone()), &e0);
        if roots.is_empty() {
            return Ok(None);
        }
        choices.push((loc, roots));
    }
    let (ia, ib, ie) = exact_indicial(c_squared, lambda, None)?;
    let mut totals: Vec<Rat> = rational_quadratic_roots(&ia, &(ib - ia.clone()), &ie)
        .into_iter()
        .map(|r| -r)
        .collect();
    if totals.is_empty() {
        return Ok(None);
    }
    totals.sort();
    let sizes: Vec<usize> = choices.iter().map(|(_, r)| r.len()).collect();
    let combos: usize = sizes.iter().product();
    let mut capped = false;
    for total in &totals {
        for code in 0..combos {
            let mut sel = Vec::with_capacity(choices.len());
            let mut ix = code;
            for ((loc, roots), size) in choices.iter().zip(&sizes) {
                sel.push((loc.clone(), roots[ix % size].clone()));
                ix /= size;
            }
            let msum = sel.iter().fold(rat(0, 1), |acc, (_, m)| acc + m.clone());
            let degree = total.clone() - msum;
            if !degree.is_integer() || degree.is_negative() {
                continue;
            }
            let d = match degree.numer().to_usize() {
                Some(d) if d <= DEGREE_CAP => d,
                _ => {
                    capped = true;
                    continue;
                }
            };
            if let Some(tail) = solve_tail(&p, &q, lambda, &sel, d) {
                let mut factors: Vec<(Rat, Rat)> =
                    sel.into_iter().filter(|(_, m)| !m.is_zero()).collect();
                factors.sort_by(|x, y| x.0.cmp(&y.0));
                return Ok(Some(ProductSolution {
                    c_squared: c_squared.clone(),
                    lambda: lambda.clone(),
                    factors,
                    tail,
                }));
            }
        }
    }
    if capped {
        return Err(Error::Inconclusive(format!(
            "candidate tail degree exceeds the search cap {DEGREE_CAP}"
        )));
    }
    Ok(None)
}

fn nonpositive_integer(z: Cdd) -> bool {
    let re = z.re.to_f64();
    z.im.to_f64().abs() <= MATCH_TOL && (re - re.round()).abs() <= MATCH_TOL && re.round() <= 0.0
}

/// In the two confluent regimes the equation reduces to a Gauss
/// hypergeometric equation, and the relevant solution truncates exactly when
/// a numerator parameter is a non-positive integer. Both square-root
/// branches of the index are tried. At C = sqrt(2), with
/// lambda = (k-1)(k+2)/2, the numerator pairs are [1 - k/2, k/2 + 3/2] and
/// [2 + k/2, 3/2 - k/2]; at C = 1 they are [2 -+ i sqrt(lambda),
/// 1 -+ i sqrt(lambda)].
pub fn hypergeometric_truncation(c: Cdd, lambda: Cdd) -> Result<bool> {
    let near = |target: Dd| {
        let t = Cx::real(target);
        (c - t).abs().to_f64().min((c + t).abs().to_f64()) <= CONFLUENCE_TOL
    };
    let half = Dd::from_ratio(1, 2);
    if near(Dd::from_i64(2).sqrt()) {
        let s = (cint(9) + lambda.scale(Dd::from_i64(8))).sqrt();
        for k in [(s - Cx::one()).scale(half), (-s - Cx::one()).scale(half)] {
            let kh = k.scale(half);
            let params = [
                Cx::one() - kh,
                kh + cratio(3, 2),
                kh + cint(2),
                cratio(3, 2) - kh,
            ];
            if params.iter().any(|z| nonpositive_integer(*z)) {
                return Ok(true);
            }
        }
        Ok(false)
    } else if near(Dd::ONE) {
        let w = Cx::i() * lambda.sqrt();
        for sig in [w, -w] {
            let params = [cint(2) - sig, Cx::one() - sig];
            if params.iter().any(|z| nonpositive_integer(*z)) {
                return Ok(true);
            }
        }
        Ok(false)
    } else {
        Err(Error::InvalidInput(
            "the hypergeometric reduction exists only at C = 1 and C = sqrt(2)".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Cdd {
        Cx::from_f64s(re, 0.0)
    }

    fn assert_close(a: Cdd, b: Cdd, tol: f64) {
        assert!((a - b).abs().to_f64() <= tol, "{a:?} vs {b:?}");
    }

    #[test]
    fn level_class_pins() {
        let lc = level_class(c(1.0), c(-0.5));
        assert_eq!(lc.regime, Regime::MinusHalf);
        assert_close(lc.representative_c, Cx::one(), 1e-30);

        assert_eq!(level_class(c(0.0), c(0.0)).regime, Regime::BothZero);
        assert_eq!(level_class(c(0.0), Cx::i()).regime, Regime::ZeroC);

        let zh = level_class(c(3.0), c(0.0));
        assert_eq!(zh.regime, Regime::ZeroH);
        assert_close(zh.representative_c * zh.representative_c, c(2.0), 1e-30);

        // C^2 H = 4 lands on the generic row with representative C = 2.
        let gen = level_class(c(1.0), c(4.0));
        assert_eq!(gen.regime, Regime::Generic);
        assert_close(gen.representative_c, c(2.0), 1e-30);
    }

    #[test]
    fn level_class_is_scaling_invariant() {
        for sigma in [c(2.0), c(1.0 / 3.0), Cx::from_f64s(1.0, 1.0)] {
            let base = level_class(c(2.0), c(1.0));
            let scaled = level_class(c(2.0) * sigma, c(1.0) / (sigma * sigma));
            assert_eq!(base.regime, scaled.regime);
            assert_close(base.representative_c, scaled.representative_c, 1e-28);

            let mh = level_class(Cx::one() * sigma, c(-0.5) / (sigma * sigma));
            assert_eq!(mh.regime, Regime::MinusHalf);
        }
    }

    #[test]
    fn allowed_lambda_pins() {
        let v = allowed_lambda(Regime::ZeroC, c(2.0), DEFAULT_K_BOUND);
        assert!(v.abelian_possible);
        assert_eq!(v.matched_k, Some(2));

        assert!(!allowed_lambda(Regime::Generic, c(0.5), DEFAULT_K_BOUND).abelian_possible);
        assert!(allowed_lambda(Regime::Generic, c(0.0), DEFAULT_K_BOUND).abelian_possible);
        assert!(allowed_lambda(Regime::Generic, c(-1.0), DEFAULT_K_BOUND).abelian_possible);

        let mh = allowed_lambda(Regime::MinusHalf, c(-4.0), DEFAULT_K_BOUND);
        assert!(mh.abelian_possible);
        assert_eq!(mh.matched_k, Some(2));

        assert!(allowed_lambda(Regime::BothZero, Cx::from_f64s(0.3, 1.7), DEFAULT_K_BOUND)
            .abelian_possible);

        // Near misses outside the match window are rejected; drift inside it
        // still snaps to the family member.
        assert!(!allowed_lambda(Regime::ZeroC, c(2.0 + 1e-6), DEFAULT_K_BOUND).abelian_possible);
        assert!(allowed_lambda(Regime::MinusHalf, c(-4.0 + 1e-12), DEFAULT_K_BOUND).abelian_possible);
        assert!(!allowed_lambda(Regime::ZeroH, Cx::from_f64s(2.0, 1e-4), DEFAULT_K_BOUND)
            .abelian_possible);
    }

    #[test]
    fn allowed_lambda_exact_inverts_the_families() {
        let v = allowed_lambda_exact(Regime::ZeroC, &rat(5, 1), DEFAULT_K_BOUND);
        assert_eq!(v.matched_k, Some(3));
        assert!(!allowed_lambda_exact(Regime::ZeroC, &rat(7, 2), DEFAULT_K_BOUND).abelian_possible);
        assert_eq!(
            allowed_lambda_exact(Regime::MinusHalf, &rat(-9, 1), DEFAULT_K_BOUND).matched_k,
            Some(3)
        );
        assert!(!allowed_lambda_exact(Regime::MinusHalf, &rat(-8, 1), DEFAULT_K_BOUND)
            .abelian_possible);
        assert!(allowed_lambda_exact(Regime::Generic, &rat(-1, 1), DEFAULT_K_BOUND).abelian_possible);
        assert!(!allowed_lambda_exact(Regime::Generic, &rat(1, 2), DEFAULT_K_BOUND).abelian_possible);

        // The analytic inversion reaches indices enumeration never would.
        let k = 999_999_i64;
        let lam = rat(k - 1, 1) * rat(k + 2, 1) / rat(2, 1);
        assert_eq!(
            allowed_lambda_exact(Regime::ZeroH, &lam, DEFAULT_K_BOUND).matched_k,
            Some(k)
        );
        assert!(!allowed_lambda_exact(Regime::ZeroH, &lam, 10).abelian_possible);
    }

    #[test]
    fn singularities_pins() {
        let s = singularities(c(3.0));
        assert_eq!(s.confluence, None);
        assert_eq!(s.points.len(), 4);
        match s.points[2] {
            EquationPoint::Finite(t3) => assert_close(t3, Cx::real(Dd::from_ratio(-9, 7)), 1e-25),
            EquationPoint::Infinity => panic!("third point should be finite"),
        }

        assert_eq!(singularities(c(1.0)).confluence, Some(Confluence::COne));
        assert_eq!(singularities(c(1.0)).points.len(), 3);
        assert_eq!(singularities(c(-1.0)).confluence, Some(Confluence::COne));
        assert_eq!(
            singularities(Cx::real(Dd::from_i64(2).sqrt())).confluence,
            Some(Confluence::CSqrtTwo)
        );
        assert_eq!(singularities(c(1e-13)).confluence, Some(Confluence::CZero));
    }

    #[test]
    fn indicial_exponent_pins() {
        let eq = VariationalEquation::normal_form(c(3.0), c(0.5));
        let (r1, r2) = indicial_exponents(&eq, EquationPoint::Finite(Cx::zero())).unwrap();
        assert_close(r1, c(2.0), 1e-28);
        assert_close(r2, Cx::zero(), 1e-28);

        let (r1, r2) = indicial_exponents(&eq, EquationPoint::Finite(Cx::one())).unwrap();
        assert_close(r1, c(0.5), 1e-28);
        assert_close(r2, Cx::zero(), 1e-28);

        let third = Cx::real(Dd::from_ratio(-9, 7));
        let (r1, r2) = indicial_exponents(&eq, EquationPoint::Finite(third)).unwrap();
        assert_close(r1, c(0.5), 1e-25);
        assert_close(r2, Cx::zero(), 1e-25);

        let (r1, r2) = indicial_exponents(&eq, EquationPoint::Infinity).unwrap();
        assert_close(r1, Cx::zero(), 1e-28);
        assert_close(r2, c(-1.0), 1e-28);

        // At C = 1 the merged point carries exponents +-sqrt(-lambda).
        let merged = VariationalEquation::normal_form(c(1.0), c(-1.0));
        let (r1, r2) = indicial_exponents(&merged, EquationPoint::Finite(Cx::one())).unwrap();
        assert_close(r1, c(1.0), 1e-28);
        assert_close(r2, c(-1.0), 1e-28);

        match indicial_exponents(&eq, EquationPoint::Finite(c(0.25))) {
            Err(Error::NotSingular(_)) => {}
            other => panic!("expected a not-singular error, got {other:?}"),
        }
    }

    #[test]
    fn log_obstruction_tracks_lambda_squared_plus_lambda() {
        let at_zero = |lam: f64| {
            let eq = VariationalEquation::normal_form(c(3.0), c(lam));
            log_obstruction(&eq, EquationPoint::Finite(Cx::zero()), 10).unwrap()
        };
        assert!(at_zero(0.5).abs().to_f64() > 1e-3);
        assert!(at_zero(0.0).abs().to_f64() <= 1e-28);
        assert!(at_zero(-1.0).abs().to_f64() <= 1e-28);

        // The obstruction is proportional to lambda^2 + lambda at fixed C.
        let ratio = at_zero(1.0) / at_zero(2.0);
        assert_close(ratio, cratio(2, 6), 1e-25);

        let eq = VariationalEquation::normal_form(c(3.0), c(0.5));
        match log_obstruction(&eq, EquationPoint::Finite(Cx::zero()), 1) {
            Err(Error::InvalidInput(_)) => {}
            other => panic!("series order below the resonance should fail, got {other:?}"),
        }
        // At t = 1 the exponents differ by 1/2: no obstruction is defined.
        match log_obstruction(&eq, EquationPoint::Finite(Cx::one()), 10) {
            Err(Error::InvalidInput(_)) => {}
            other => panic!("non-integer difference should fail, got {other:?}"),
        }
    }

    #[test]
    fn singularity_data_reports_the_resonance() {
        let eq = VariationalEquation::normal_form(c(3.0), c(0.5));
        let at0 = singularity_data(&eq, EquationPoint::Finite(Cx::zero())).unwrap();
        assert!(at0.regular);
        assert!(at0.log_obstruction.unwrap().abs().to_f64() > 1e-3);
        let at1 = singularity_data(&eq, EquationPoint::Finite(Cx::one())).unwrap();
        assert!(at1.log_obstruction.is_none());
    }

    #[test]
    fn explicit_solution_pins() {
        for lam in [0, -1] {
            for cc in [c(3.0), Cx::real(Dd::from_i64(2).sqrt()), Cx::from_f64s(2.0, 1.0)] {
                let rep = explicit_solution(cc, lam).unwrap();
                assert_eq!(rep.samples, 50);
                assert!(rep.max_residual <= 1e-25, "residual {} at {cc:?}", rep.max_residual);
            }
        }
        let dep = explicit_solution(c(1.0), -1).unwrap();
        assert!(dep.max_residual <= 1e-25);
        assert_eq!(dep.descriptions.len(), 3);
        assert!(explicit_solution(c(3.0), 7).is_err());
    }

    #[test]
    fn product_search_pins() {
        // Generic C = 3 at lambda = 0: the constant solution.
        let sol = polynomial_solution_search(&rat(9, 1), &rat(0, 1)).unwrap().unwrap();
        assert!(sol.factors.is_empty());
        assert_eq!(sol.tail, Poly::from_coeffs(vec![rat(1, 1)]));

        // lambda = 1/2 admits nothing of product shape.
        assert!(polynomial_solution_search(&rat(9, 1), &rat(1, 2)).unwrap().is_none());

        // Parabolic C^2 = 2 at lambda = 2: X = t^2.
        let sol = polynomial_solution_search(&rat(2, 1), &rat(2, 1)).unwrap().unwrap();
        assert!(sol.factors.is_empty());
        assert_eq!(sol.tail, Poly::from_coeffs(vec![rat(0, 1), rat(0, 1), rat(1, 1)]));
        assert_eq!(sol.describe(), "(t^2)");

        // Merged C = 1 at lambda = -1: both basis solutions are of product
        // shape; the lower total degree wins, giving (t - 1/2)/(t - 1)
        // rather than t - 1.
        let sol = polynomial_solution_search(&rat(1, 1), &rat(-1, 1)).unwrap().unwrap();
        assert_eq!(sol.factors, vec![(rat(1, 1), rat(-1, 1))]);
        assert_eq!(sol.tail, Poly::from_coeffs(vec![rat(-1, 2), rat(1, 1)]));
        let probe = Cx::from_f64s(0.3, 5.0);
        assert!(sol.relative_residual(probe) <= 1e-28);
        let shifted = (probe - cratio(1, 2)) / (probe - Cx::one());
        assert_close(sol.value_at(probe).unwrap(), shifted, 1e-28);
    }

    #[test]
    fn truncation_pins() {
        let root2 = Cx::real(Dd::from_i64(2).sqrt());
        assert!(hypergeometric_truncation(root2, c(5.0)).unwrap());
        assert!(hypergeometric_truncation(root2, c(2.0)).unwrap());
        assert!(!hypergeometric_truncation(root2, c(0.5)).unwrap());
        assert!(hypergeometric_truncation(c(1.0), c(-4.0)).unwrap());
        assert!(!hypergeometric_truncation(c(1.0), c(0.5)).unwrap());
        assert!(hypergeometric_truncation(c(3.0), c(1.0)).is_err());
    }
}
