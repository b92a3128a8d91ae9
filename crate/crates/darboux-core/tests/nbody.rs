//! End-to-end checks of the central-configuration layer: finite-difference
//! gradients, symmetry invariances, the collinear quintics against frozen
//! root values, Newton refinement, and the conic energy relation.

use darboux_core::cx::Cx;
use darboux_core::dd::Dd;
use darboux_core::exact::sturm::{cauchy_bound, isolate_real_roots, refine, SturmChain};
use darboux_core::exact::{parse_rat, rat, rat_to_dd, Rat, Ring};
use darboux_core::nbody::{
    angular_momentum, conic_energy_residual, darboux_point, euler_collinear, euler_quintic,
    fit_multiplier, hamiltonian, lagrange_equilateral, mass_scaled_acceleration,
    newton_refine, potential_value, radial_trajectory, regular_ngon, scale_phase, Config,
};
use darboux_core::ode::OdeOptions;
use darboux_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_config(rng: &mut ChaCha8Rng, n: usize) -> Config<Cx<Dd>> {
    loop {
        let masses: Vec<Cx<Dd>> =
            (0..n).map(|_| Cx::real(Dd::from_f64(rng.gen_range(0.2..2.0)))).collect();
        let coords: Vec<Cx<Dd>> =
            (0..2 * n).map(|_| Cx::real(Dd::from_f64(rng.gen_range(-2.0..2.0)))).collect();
        // Retry layouts with nearly touching bodies; they make the
        // finite-difference step too coarse.
        let mut ok = true;
        for i in 0..n {
            for k in (i + 1)..n {
                let dx = coords[i] - coords[k];
                let dy = coords[n + i] - coords[n + k];
                if (dx * dx + dy * dy).abs().to_f64() < 0.25 {
                    ok = false;
                }
            }
        }
        if !ok {
            continue;
        }
        return Config::from_coords(masses, coords).unwrap();
    }
}

#[test]
fn gradient_matches_central_differences_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-5f64;
    for _ in 0..100 {
        let n = rng.gen_range(2..=4);
        let cfg = random_config(&mut rng, n);
        let a = mass_scaled_acceleration(&cfg);
        let mut err2 = 0.0f64;
        let mut norm2 = 0.0f64;
        for j in 0..2 * n {
            let mut up = cfg.coords().to_vec();
            let mut dn = cfg.coords().to_vec();
            up[j] = up[j] + Cx::real(Dd::from_f64(h));
            dn[j] = dn[j] - Cx::real(Dd::from_f64(h));
            let vu = potential_value(&Config::from_coords(cfg.masses().to_vec(), up).unwrap());
            let vd = potential_value(&Config::from_coords(cfg.masses().to_vec(), dn).unwrap());
            let fd = (vu - vd) / Cx::real(Dd::from_f64(2.0 * h));
            let expected = a[j] * cfg.masses()[j % n];
            err2 += (fd - expected).norm_sqr().to_f64();
            norm2 += expected.norm_sqr().to_f64();
        }
        let rel = (err2 / norm2).sqrt();
        assert!(rel < 1e-7, "relative gradient error {rel:.3e} at n={n}");
    }
}

#[test]
fn potential_is_homogeneous_and_rotation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let cfg = random_config(&mut rng, 3);
        let v = potential_value(&cfg);

        let s = Cx::real(Dd::from_f64(rng.gen_range(0.3..3.0)));
        let vs = potential_value(&cfg.scaled(&s));
        assert!((vs * s - v).abs().to_f64() < 1e-12 * v.abs().to_f64());

        // Block rotation: both coordinate blocks mix, distances unchanged.
        let theta = Dd::from_f64(rng.gen_range(0.0..6.28));
        let (sin, cos) = theta.sin_cos();
        let n = cfg.n();
        let mut rotated = vec![Cx::zero(); 2 * n];
        for i in 0..n {
            let x = cfg.coords()[i];
            let y = cfg.coords()[n + i];
            rotated[i] = x.scale(cos) - y.scale(sin);
            rotated[n + i] = x.scale(sin) + y.scale(cos);
        }
        let rcfg = Config::new(cfg.masses().to_vec(), rotated, dists_of(&cfg)).unwrap();
        let vr = potential_value(&rcfg);
        assert!((vr - v).abs().to_f64() < 1e-12 * v.abs().to_f64());
    }
}

fn dists_of(cfg: &Config<Cx<Dd>>) -> Vec<Cx<Dd>> {
    let n = cfg.n();
    let mut out = Vec::new();
    for i in 0..n {
        for k in (i + 1)..n {
            out.push(*cfg.dist(i, k));
        }
    }
    out
}

#[test]
fn multiplier_scales_as_inverse_cube_including_complex_scale() {
    let tri = regular_ngon(3, Dd::from_i64(1)).unwrap();
    let alpha = tri.multiplier;
    for s in [
        Cx::real(Dd::from_f64(2.0)),
        Cx::real(Dd::from_f64(0.37)),
        Cx::new(Dd::from_f64(1.2), Dd::from_f64(-0.7)),
    ] {
        let scaled = tri.config.scaled(&s);
        let a2 = fit_multiplier(&scaled);
        let rel = (a2 * s * s * s - alpha).abs().to_f64() / alpha.abs().to_f64();
        assert!(rel < 1e-10, "scale law violated: {rel:.3e}");
    }
}

/// Frozen 36-digit positive roots of the ordering quintic for masses
/// (0.2, 0.3, 0.5) under the three Moulton orderings.
const MOULTON_PINS: [(usize, usize, usize, &str); 3] = [
    (0, 1, 2, "0.798826767013125404272108693415418906"),
    (0, 2, 1, "0.933866543982982123585576931623619313"),
    (1, 0, 2, "0.857482175830642527067240628780918908"),
];

#[test]
fn moulton_orderings_have_unique_positive_roots_at_frozen_values() {
    let base = [rat(1, 5), rat(3, 10), rat(1, 2)];
    for (i, j, k, pin) in MOULTON_PINS {
        let m = [base[i].clone(), base[j].clone(), base[k].clone()];
        let quintic = euler_quintic(&m);
        let chain = SturmChain::new(&quintic);
        let bound = cauchy_bound(&quintic);
        assert_eq!(chain.count_in(&rat(0, 1), &bound), 1, "one positive root expected");

        let target = parse_rat(pin).unwrap();
        let positive: Vec<(Rat, Rat)> = isolate_real_roots(&quintic)
            .into_iter()
            .filter(|(_, hi)| hi > &rat(0, 1))
            .collect();
        assert_eq!(positive.len(), 1);
        let width = parse_rat("1e-32").unwrap();
        let (lo, hi) = refine(&chain, &positive[0], &width);
        assert!(lo <= target && target <= hi, "pinned root escaped the interval");
    }
}

#[test]
fn euler_collinear_returns_normalized_points_for_every_root() {
    for complex_order in [false, true] {
        let (quintic, points) =
            euler_collinear(&[rat(1, 5), rat(3, 10), rat(1, 2)], complex_order).unwrap();
        assert_eq!(quintic.deg(), Some(5));
        assert_eq!(points.len(), 5);
        for p in &points {
            assert!(p.residual <= 1e-12, "residual {:.3e}", p.residual);
            assert!((p.multiplier + Cx::one()).abs().to_f64() < 1e-12);
        }
    }
}

#[test]
fn complex_order_quintic_at_equal_outer_masses() {
    // The ordering quintic shares its complex pair with 2 rho^2 + 3 rho + 2
    // at (1/7, 5/7, 1/7); the complex-order variant does not, but all of its
    // roots still provide honest Darboux points of the flipped branch.
    let (quintic, points) = euler_collinear(&[rat(1, 7), rat(5, 7), rat(1, 7)], true).unwrap();
    let g = darboux_core::exact::Poly::from_coeffs(vec![rat(2, 1), rat(3, 1), rat(2, 1)]);
    assert!(!g.resultant(&quintic).is_zero());
    assert_eq!(points.len(), 5);
    for p in &points {
        assert!(p.residual <= 1e-12);
    }
}

#[test]
fn newton_refine_recovers_perturbed_families() {
    // Exact polygon: verification returns the same coordinates untouched.
    let tri = regular_ngon(3, Dd::from_i64(1)).unwrap();
    let refined = newton_refine(&tri.config).unwrap();
    for (a, b) in refined.config.coords().iter().zip(tri.config.coords().iter()) {
        assert!((*a - *b).abs().to_f64() < 1e-25);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut perturbed = tri.config.coords().to_vec();
    for c in perturbed.iter_mut() {
        *c = *c + Cx::real(Dd::from_f64(rng.gen_range(-1e-3..1e-3)));
    }
    let guess = Config::from_coords(tri.config.masses().to_vec(), perturbed).unwrap();
    let refined = newton_refine(&guess).unwrap();
    assert!(refined.residual <= 1e-12);
    assert!((refined.multiplier + Cx::one()).abs().to_f64() < 1e-12);
    // Same family: the potential value is a scale/rotation invariant label.
    let v0 = potential_value(&tri.config).abs().to_f64();
    let v1 = potential_value(&refined.config).abs().to_f64();
    assert!((v0 - v1).abs() < 1e-10 * v0);

    // An asymmetric mass triple on the equilateral triangle.
    let lag = lagrange_equilateral(&[
        Dd::from_f64(0.2),
        Dd::from_f64(0.3),
        Dd::from_f64(0.5),
    ])
    .unwrap();
    let mut perturbed = lag.config.coords().to_vec();
    for c in perturbed.iter_mut() {
        *c = *c + Cx::real(Dd::from_f64(rng.gen_range(-1e-3..1e-3)));
    }
    let guess = Config::from_coords(lag.config.masses().to_vec(), perturbed).unwrap();
    let refined = newton_refine(&guess).unwrap();
    assert!(refined.residual <= 1e-12);

    // Coincident bodies are rejected while recording distances.
    let bad = Config::from_coords(
        vec![Cx::<Dd>::one(), Cx::one(), Cx::one()],
        vec![Cx::zero(), Cx::zero(), Cx::one(), Cx::zero(), Cx::zero(), Cx::zero()],
    );
    assert!(matches!(bad, Err(Error::SingularConfiguration(_))));
}

#[test]
fn conic_relation_holds_for_random_energies() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, max_steps: 2_000_000 };
    for _ in 0..10 {
        let c: f64 = rng.gen_range(0.3..1.2);
        let phi0 = 1.0f64;
        // Energy above the effective potential at phi0 guarantees a real
        // launch speed; the centrifugal term keeps phi away from zero.
        let floor = (c * c / (phi0 * phi0) - 2.0 / phi0) / 2.0;
        let h = floor + rng.gen_range(0.05..0.5);
        let traj = radial_trajectory(c, h, phi0, 2.0, &opts).unwrap();
        let res = conic_energy_residual(c, h, &traj).unwrap();
        assert!(res <= 1e-8, "residual {res:.3e} for C={c:.3} H={h:.3}");
    }
}

#[test]
fn phase_scaling_acts_on_h_and_c_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for alpha_f in [2.0f64, 1.0 / 3.0, 5.0] {
        let alpha = Cx::real(Dd::from_f64(alpha_f));
        for _ in 0..25 {
            let n = rng.gen_range(2..=4);
            let cfg = random_config(&mut rng, n);
            let p: Vec<Cx<Dd>> =
                (0..2 * n).map(|_| Cx::real(Dd::from_f64(rng.gen_range(-1.0..1.0)))).collect();
            let h0 = hamiltonian(&cfg, &p).unwrap();
            let c0 = angular_momentum(&cfg, &p).unwrap();
            let (cfg2, p2) = scale_phase(&cfg, &p, &alpha).unwrap();
            let h1 = hamiltonian(&cfg2, &p2).unwrap();
            let c1 = angular_momentum(&cfg2, &p2).unwrap();
            let scale_h = (h1 - alpha * alpha * h0).abs().to_f64();
            let scale_c = (c1 * alpha - c0).abs().to_f64();
            assert!(scale_h < 1e-12 * h0.abs().to_f64().max(1.0));
            assert!(scale_c < 1e-12 * c0.abs().to_f64().max(1.0));
        }
    }
}

#[test]
fn collinear_potential_pin_for_equal_outer_masses() {
    // rho = 1 is the real root; V = 3/14 exactly, and the numeric builder
    // reproduces it through the normalized points' shared potential scale.
    let m = [rat(1, 7), rat(5, 7), rat(1, 7)];
    let (quintic, _) = euler_collinear(&m, false).unwrap();
    assert!(quintic.eval(&rat(1, 1)).is_zero());
    let cfg = darboux_core::nbody::collinear_config(&m, rat(1, 1), false).unwrap();
    assert_eq!(potential_value(&cfg), rat(3, 14));
    let exact_point = darboux_point(&cfg, 0.0).unwrap();
    assert_eq!(exact_point.residual, 0.0);
    let dd_rho = Cx::real(rat_to_dd(&rat(1, 1)));
    let md = [
        Cx::real(rat_to_dd(&m[0])),
        Cx::real(rat_to_dd(&m[1])),
        Cx::real(rat_to_dd(&m[2])),
    ];
    let num = darboux_core::nbody::collinear_config(&md, dd_rho, false).unwrap();
    let v = potential_value(&num);
    assert!((v - Cx::real(rat_to_dd(&rat(3, 14)))).abs().to_f64() < 1e-30);
}
