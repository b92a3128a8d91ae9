//! Normal variational equation end to end: the Fuchs relation across every
//! confluence pattern, stability of the classification window, agreement
//! between the integrability table and the logarithm obstruction, scaling
//! invariance of verdicts, and the closed-form and product-form solution
//! machinery on the parabolic ladder.

use darboux_core::cx::{Cdd, Cx};
use darboux_core::dd::Dd;
use darboux_core::exact::{rat, Poly, Rat};
use darboux_core::spectral::equal_mass_lambda;
use darboux_core::variational::{
    allowed_lambda, explicit_solution, hypergeometric_truncation, indicial_exponents, level_class,
    polynomial_solution_search, singularities, singularity_data, Confluence, EquationPoint,
    Regime, VariationalEquation, DEFAULT_K_BOUND,
};

fn c(re: f64) -> Cdd {
    Cx::from_f64s(re, 0.0)
}

fn root2() -> Cdd {
    Cx::real(Dd::from_i64(2).sqrt())
}

fn assert_close(a: Cdd, b: Cdd, tol: f64) {
    assert!((a - b).abs().to_f64() <= tol, "{a:?} vs {b:?}");
}

/// Sum of both indicial exponents over every singular point on the sphere.
fn exponent_sum(cval: Cdd, lambda: Cdd) -> Cdd {
    let eq = VariationalEquation::normal_form(cval, lambda);
    let mut sum = Cx::zero();
    for point in singularities(cval).points {
        let (r1, r2) = indicial_exponents(&eq, point).unwrap();
        sum += r1 + r2;
    }
    sum
}

#[test]
fn fuchs_relation_holds_in_every_confluence_pattern() {
    let lam = Cx::from_f64s(0.5, 1.0 / 3.0);
    // Four singular points: the exponent sum is 2.
    for cval in [c(3.0), c(2.5), Cx::from_f64s(2.0, 1.0)] {
        assert_eq!(singularities(cval).points.len(), 4);
        assert_close(exponent_sum(cval, lam), c(2.0), 1e-20);
    }
    // Each critical C merges or expels one point, lowering the sum to 1.
    for cval in [c(1.0), root2(), Cx::zero()] {
        assert_eq!(singularities(cval).points.len(), 3);
        assert_close(exponent_sum(cval, lam), Cx::one(), 1e-20);
    }
}

#[test]
fn confluence_fires_only_inside_the_identification_window() {
    let eq_lambda = c(0.25);
    for j in 3..=8 {
        let eps = 10f64.powi(-j);
        for cval in [c(1.0 + eps), Cx::real(Dd::from_i64(2).sqrt() - Dd::from_f64(eps))] {
            let s = singularities(cval);
            assert_eq!(s.confluence, None, "eps = {eps}");
            assert_eq!(s.points.len(), 4);
            // Away from the merge the surviving finite points keep the
            // generic exponents {0, 1/2}, however close the pair gets.
            let eq = VariationalEquation::normal_form(cval, eq_lambda);
            for point in [s.points[1], s.points[2]] {
                let (r1, r2) = indicial_exponents(&eq, point).unwrap();
                assert_close(r1, c(0.5), 1e-18);
                assert_close(r2, Cx::zero(), 1e-18);
            }
        }
    }
    let near_one = singularities(c(1.0 + 1e-13));
    assert_eq!(near_one.confluence, Some(Confluence::COne));
    let near_root2 =
        singularities(Cx::real(Dd::from_i64(2).sqrt() - Dd::from_f64(1e-13)));
    assert_eq!(near_root2.confluence, Some(Confluence::CSqrtTwo));
}

#[test]
fn generic_table_row_agrees_with_the_origin_log_obstruction() {
    // On the generic row the allowed set is exactly {0, -1}, and the same
    // set is cut out by the logarithm obstruction at t = 0.
    for lam in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        let verdict = allowed_lambda(Regime::Generic, c(lam), DEFAULT_K_BOUND);
        let eq = VariationalEquation::normal_form(c(3.0), c(lam));
        let report = singularity_data(&eq, EquationPoint::Finite(Cx::zero())).unwrap();
        let obstruction = report.log_obstruction.expect("t = 0 is always resonant");
        let log_free = obstruction.abs().to_f64() <= 1e-20;
        assert_eq!(verdict.abelian_possible, log_free, "lambda = {lam}");
    }
}

#[test]
fn verdicts_are_invariant_along_the_scaling_orbit() {
    let pairs = [
        (c(2.0), c(1.0), Regime::Generic),
        (Cx::one(), c(-0.5), Regime::MinusHalf),
        (c(3.0), Cx::zero(), Regime::ZeroH),
        (Cx::zero(), c(2.0), Regime::ZeroC),
    ];
    let scales = [c(2.0), c(1.0 / 3.0), c(5.0), Cx::from_f64s(1.0, 1.0)];
    let lambdas = [c(0.0), c(-1.0), c(0.5), c(2.0), c(-4.0)];
    for (cv, hv, regime) in pairs {
        let base = level_class(cv, hv);
        assert_eq!(base.regime, regime);
        for sigma in scales {
            let moved = level_class(cv * sigma, hv / (sigma * sigma));
            assert_eq!(moved.regime, regime);
            assert_close(moved.representative_c, base.representative_c, 1e-25);
            for lam in lambdas {
                assert_eq!(
                    allowed_lambda(moved.regime, lam, DEFAULT_K_BOUND),
                    allowed_lambda(base.regime, lam, DEFAULT_K_BOUND)
                );
            }
        }
    }
}

#[test]
fn closed_forms_satisfy_the_equation_in_every_regime() {
    for cval in [c(3.0), root2(), Cx::from_f64s(2.0, 1.0), c(1.0)] {
        for lam in [0, -1] {
            let report = explicit_solution(cval, lam).unwrap();
            assert_eq!(report.samples, 50);
            assert!(
                report.max_residual <= 1e-25,
                "residual {} at C = {cval:?}, lambda = {lam}",
                report.max_residual
            );
        }
    }
    // At C = 1 the leading coefficient collapses onto -t (t - 1)^2, the
    // double-root shape behind the merged singular point.
    let eq = VariationalEquation::normal_form(c(1.0), c(-1.0));
    for t in [c(0.3), c(0.7), Cx::from_f64s(0.4, 0.9)] {
        let collapsed = -t * (t - Cx::one()) * (t - Cx::one());
        assert_close(eq.p(t), collapsed, 1e-28);
    }
}

#[test]
fn parabolic_ladder_solutions_have_the_pinned_product_shape() {
    // C^2 = 2, lambda = (k - 1)(k + 2)/2: even k gives a polynomial, odd k
    // a polynomial times sqrt(t - 1).
    let half = vec![(rat(1, 1), rat(1, 2))];
    let cases: Vec<(i64, i64, Vec<(Rat, Rat)>, Vec<Rat>)> = vec![
        (2, 2, vec![], vec![rat(0, 1), rat(0, 1), rat(1, 1)]),
        (3, 5, half.clone(), vec![rat(0, 1), rat(0, 1), rat(1, 1)]),
        (4, 9, vec![], vec![rat(0, 1), rat(0, 1), rat(-6, 7), rat(1, 1)]),
        (5, 14, half.clone(), vec![rat(0, 1), rat(0, 1), rat(-2, 3), rat(1, 1)]),
        (6, 20, vec![], vec![rat(0, 1), rat(0, 1), rat(16, 33), rat(-16, 11), rat(1, 1)]),
    ];
    for (k, lam, factors, tail) in cases {
        assert_eq!(rat(k - 1, 1) * rat(k + 2, 1) / rat(2, 1), rat(lam, 1));
        let sol = polynomial_solution_search(&rat(2, 1), &rat(lam, 1))
            .unwrap()
            .unwrap_or_else(|| panic!("k = {k} must have a product solution"));
        assert_eq!(sol.factors, factors, "k = {k}");
        assert_eq!(sol.tail, Poly::from_coeffs(tail), "k = {k}");
        for j in 0..20 {
            let ang = Dd::TAU * Dd::from_ratio(j, 20);
            let (s, co) = ang.sin_cos();
            let t = Cx::from_f64s(0.4, 0.25) + Cx::new(co, s).scale(Dd::from_ratio(1, 5));
            let r = sol.relative_residual(t);
            assert!(r <= 1e-25, "k = {k}: residual {r} at {t:?}");
        }
    }
}

#[test]
fn truncation_covers_the_confluent_ladders() {
    // C = 1 allows lambda = -k^2.
    for k in 1..=6i64 {
        assert!(hypergeometric_truncation(c(1.0), c(-((k * k) as f64))).unwrap(), "k = {k}");
    }
    // C = sqrt(2) allows lambda = (k - 1)(k + 2)/2.
    for k in 2..=6i64 {
        let lam = ((k - 1) * (k + 2)) as f64 / 2.0;
        assert!(hypergeometric_truncation(root2(), c(lam)).unwrap(), "k = {k}");
    }
    assert!(!hypergeometric_truncation(c(1.0), c(0.5)).unwrap());
    assert!(!hypergeometric_truncation(c(1.0), c(-2.0)).unwrap());
    assert!(!hypergeometric_truncation(root2(), c(0.5)).unwrap());
    assert!(hypergeometric_truncation(c(3.0), c(1.0)).is_err());
}

#[test]
fn equal_mass_polygon_values_sit_inside_the_forbidden_window() {
    // The distinguished n-gon eigenvalue lies strictly between 0 and 2,
    // where every row with a conserved quantity says "not allowed"; only
    // the degenerate both-zero row stays silent.
    for n in [3usize, 4, 7, 12, 100] {
        let lam = equal_mass_lambda(n).unwrap();
        let margin = lam.to_f64().min(2.0 - lam.to_f64());
        assert!(margin >= 1e-12, "n = {n}: margin {margin}");
        let lamc = Cx::real(lam);
        for regime in [Regime::ZeroC, Regime::ZeroH, Regime::MinusHalf, Regime::Generic] {
            assert!(!allowed_lambda(regime, lamc, DEFAULT_K_BOUND).abelian_possible, "n = {n}");
        }
        assert!(allowed_lambda(Regime::BothZero, lamc, DEFAULT_K_BOUND).abelian_possible);
    }
}

#[test]
fn singularity_reports_tie_the_table_to_the_solution_search() {
    let eq = VariationalEquation::normal_form(c(3.0), c(0.5));
    let points = singularities(c(3.0)).points;
    assert_eq!(points.len(), 4);
    let reports: Vec<_> =
        points.iter().map(|p| singularity_data(&eq, *p).unwrap()).collect();
    assert!(reports.iter().all(|r| r.regular));
    // Resonance with a live obstruction at t = 0, clean half-integer gaps
    // at the two movable finite points, resonance again at infinity.
    assert_close(reports[0].exponents.0, c(2.0), 1e-25);
    assert!(reports[0].log_obstruction.unwrap().abs().to_f64() > 1e-3);
    assert!(reports[1].log_obstruction.is_none());
    assert!(reports[2].log_obstruction.is_none());
    assert_close(reports[3].exponents.1, c(-1.0), 1e-25);
    assert!(reports[3].log_obstruction.is_some());

    // The exact search agrees with the table at C = 3: product solutions
    // exist at lambda in {0, -1} and nothing turns up at lambda = 1/2.
    let at_zero = polynomial_solution_search(&rat(9, 1), &rat(0, 1)).unwrap().unwrap();
    assert_eq!(at_zero.describe(), "1");
    let at_minus_one = polynomial_solution_search(&rat(9, 1), &rat(-1, 1)).unwrap().unwrap();
    assert!(at_minus_one.factors.is_empty());
    assert_eq!(at_minus_one.tail, Poly::from_coeffs(vec![rat(-9, 1), rat(1, 1)]));
    assert!(polynomial_solution_search(&rat(9, 1), &rat(1, 2)).unwrap().is_none());

    // On the parabolic level the lambda = -1 companion is sqrt(2t - 2), up
    // to normalization the square-root factor alone.
    let parabolic = polynomial_solution_search(&rat(2, 1), &rat(-1, 1)).unwrap().unwrap();
    assert_eq!(parabolic.describe(), "sqrt(t - 1)");
}
