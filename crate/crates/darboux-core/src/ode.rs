//! Adaptive Dormand-Prince 5(4) integration for complex-valued states over a
//! real independent variable. The tableau is entered as exact rationals so
//! double-double runs lose nothing to coefficient rounding.

use crate::cx::{Cx, Real};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-12, atol: 1e-14, max_steps: 2_000_000 }
    }
}

/// Integrates y' = f(s, y) from s0 to s1 and returns y(s1).
pub fn integrate<R: Real>(
    f: impl Fn(R, &[Cx<R>]) -> Vec<Cx<R>>,
    s0: R,
    s1: R,
    y0: &[Cx<R>],
    opts: &OdeOptions,
) -> Result<Vec<Cx<R>>> {
    integrate_observed(f, s0, s1, y0, opts, |_, _| {})
}

/// Same as [`integrate`], invoking `observe` after every accepted step
/// (including once at the initial state).
pub fn integrate_observed<R: Real>(
    f: impl Fn(R, &[Cx<R>]) -> Vec<Cx<R>>,
    s0: R,
    s1: R,
    y0: &[Cx<R>],
    opts: &OdeOptions,
    mut observe: impl FnMut(R, &[Cx<R>]),
) -> Result<Vec<Cx<R>>> {
    let r = |n: i64, d: i64| R::from_ratio(n, d);
    // Dormand-Prince coefficients; the 5th-order weights double as the last
    // stage row (FSAL).
    let c2 = r(1, 5);
    let c3 = r(3, 10);
    let c4 = r(4, 5);
    let c5 = r(8, 9);
    let a: [&[(i64, i64)]; 6] = [
        &[(1, 5)],
        &[(3, 40), (9, 40)],
        &[(44, 45), (-56, 15), (32, 9)],
        &[(19372, 6561), (-25360, 2187), (64448, 6561), (-212, 729)],
        &[(9017, 3168), (-355, 33), (46732, 5247), (49, 176), (-5103, 18656)],
        &[(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84)],
    ];
    let b4: [(i64, i64); 7] = [
        (5179, 57600),
        (0, 1),
        (7571, 16695),
        (393, 640),
        (-92097, 339200),
        (187, 2100),
        (1, 40),
    ];

    let span = s1 - s0;
    if span == R::zero() {
        observe(s0, y0);
        return Ok(y0.to_vec());
    }
    let dir = if span < R::zero() { -R::one() } else { R::one() };
    let rtol = R::from_f64(opts.rtol);
    let atol = R::from_f64(opts.atol);
    let dim = y0.len();

    let mut s = s0;
    let mut y = y0.to_vec();
    let mut h = span * R::from_f64(0.01);
    let h_floor = span.abs() * R::from_f64(f64::EPSILON * 16.0);
    let mut k1 = f(s, &y);
    observe(s, &y);

    for _ in 0..opts.max_steps {
        // Land exactly on the endpoint.
        if (s1 - s - h) * dir < R::zero() {
            h = s1 - s;
        }
        let mut k: Vec<Vec<Cx<R>>> = Vec::with_capacity(7);
        k.push(k1.clone());
        for (stage, row) in a.iter().enumerate() {
            let mut ys = y.clone();
            for (j, &(n, d)) in row.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let w = r(n, d) * h;
                for i in 0..dim {
                    ys[i] = ys[i] + k[j][i].scale(w);
                }
            }
            let cs = match stage {
                0 => c2,
                1 => c3,
                2 => c4,
                3 => c5,
                _ => R::one(),
            };
            k.push(f(s + cs * h, &ys));
        }
        // k[6] was evaluated at the 5th-order solution point.
        let y5: Vec<Cx<R>> = {
            let mut ys = y.clone();
            for (j, &(n, d)) in a[5].iter().enumerate() {
                if n == 0 {
                    continue;
                }
                let w = r(n, d) * h;
                for i in 0..dim {
                    ys[i] = ys[i] + k[j][i].scale(w);
                }
            }
            ys
        };
        let mut err = R::zero();
        for i in 0..dim {
            let mut y4i = y[i];
            for (j, &(n, d)) in b4.iter().enumerate() {
                if n == 0 {
                    continue;
                }
                y4i = y4i + k[j][i].scale(r(n, d) * h);
            }
            let diff = (y5[i] - y4i).abs();
            let scale = atol + rtol * y[i].abs().max(y5[i].abs());
            err = err.max(diff / scale);
        }
        if err <= R::one() {
            s = s + h;
            y = y5;
            k1 = k.pop().unwrap();
            observe(s, &y);
            if (s1 - s) * dir <= R::zero() {
                return Ok(y);
            }
        }
        // PI-free step controller with the usual safety clamp.
        let e = err.to_f64().max(1e-30);
        let factor = (0.9 * e.powf(-0.2)).clamp(0.2, 5.0);
        h = h * R::from_f64(factor);
        if h.abs() < h_floor {
            return Err(Error::NoConvergence(format!(
                "step size underflow at s = {}",
                s.to_f64()
            )));
        }
    }
    Err(Error::NoConvergence("step budget exhausted".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cx::{C64, Cdd};
    use crate::dd::Dd;

    #[test]
    fn exponential_growth() {
        let opts = OdeOptions { rtol: 1e-13, atol: 1e-15, ..Default::default() };
        let y = integrate(
            |_, y: &[C64]| vec![y[0]],
            0.0,
            1.0,
            &[C64::one()],
            &opts,
        )
        .unwrap();
        assert!((y[0].re - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn exponential_growth_double_double() {
        let opts = OdeOptions { rtol: 1e-25, atol: 1e-28, max_steps: 5_000_000 };
        let y = integrate(
            |_, y: &[Cdd]| vec![y[0]],
            Dd::from_i64(0),
            Dd::from_i64(1),
            &[Cdd::one()],
            &opts,
        )
        .unwrap();
        let err = (y[0].re - Dd::E).abs();
        assert!(err.to_f64() < 1e-23, "error {}", err.to_f64());
    }

    #[test]
    fn complex_rotation() {
        // y' = i y integrated to s = 0.7 lands on (cos 0.7, sin 0.7).
        let opts = OdeOptions { rtol: 1e-26, atol: 1e-30, max_steps: 5_000_000 };
        let y = integrate(
            |_, y: &[Cdd]| vec![y[0] * Cdd::i()],
            Dd::from_i64(0),
            Dd::from_ratio(7, 10),
            &[Cdd::one()],
            &opts,
        )
        .unwrap();
        let cos_ref: Dd = "0.764842187284488426255859990191864909".parse().unwrap();
        let sin_ref: Dd = "0.644217687237691053672614351398720183".parse().unwrap();
        assert!((y[0].re - cos_ref).abs().to_f64() < 1e-24);
        assert!((y[0].im - sin_ref).abs().to_f64() < 1e-24);
    }

    #[test]
    fn oscillator_round_trip_and_observer() {
        // y'' = -y as a first-order system, one full period.
        let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let mut max_energy_drift: f64 = 0.0;
        let y = integrate_observed(
            |_, y: &[C64]| vec![y[1], -y[0]],
            0.0,
            2.0 * std::f64::consts::PI,
            &[C64::one(), C64::zero()],
            &opts,
            |_, y| {
                let e = y[0].norm_sqr() + y[1].norm_sqr();
                max_energy_drift = max_energy_drift.max((e - 1.0).abs());
            },
        )
        .unwrap();
        assert!((y[0].re - 1.0).abs() < 1e-10);
        assert!(y[1].abs() < 1e-10);
        assert!(max_energy_drift < 1e-10);
    }

    #[test]
    fn blow_up_solution_tracked() {
        // y' = y^2, y(0) = 1: y(s) = 1/(1-s).
        let opts = OdeOptions { rtol: 1e-12, atol: 1e-14, ..Default::default() };
        let y = integrate(|_, y: &[C64]| vec![y[0] * y[0]], 0.0, 0.5, &[C64::one()], &opts)
            .unwrap();
        assert!((y[0].re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn backward_integration() {
        let opts = OdeOptions::default();
        let y = integrate(|_, y: &[C64]| vec![y[0]], 1.0, 0.0, &[C64::real(std::f64::consts::E)], &opts)
            .unwrap();
        assert!((y[0].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tightening_tolerance_reduces_error() {
        let run = |rtol: f64| {
            let opts = OdeOptions { rtol, atol: rtol * 1e-2, ..Default::default() };
            integrate(
                |s: f64, y: &[C64]| vec![y[0].scale(s.cos())],
                0.0,
                3.0,
                &[C64::one()],
                &opts,
            )
            .unwrap()[0]
        };
        let exact = (3.0f64.sin()).exp();
        let coarse = (run(1e-6).re - exact).abs();
        let fine = (run(1e-12).re - exact).abs();
        assert!(fine < coarse);
        assert!(fine < 1e-10);
    }
}
