//! Randomized property suites shared by the `properties` and `acceptance`
//! targets. Each suite runs `cases` inputs through a proptest runner and
//! returns the first (shrunk) failure as a message.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use inner_dynamics::blaschke::{tau_of_lambda, FiniteBlaschke, SineFamilyProduct};
use inner_dynamics::entire::{koenigs_chart, EntireFamily};
use inner_dynamics::halfplane::{CotFamily, TanFamily};
use inner_dynamics::numerics::{c, ComplexMap};
use inner_dynamics::CPoint;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestError, TestRng, TestRunner};

pub const CASES: u32 = 1000;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(config_algorithm()))
}

fn config_algorithm() -> proptest::test_runner::RngAlgorithm {
    proptest::test_runner::RngAlgorithm::ChaCha
}

fn outcome<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn polar(r: f64, t: f64) -> CPoint {
    CPoint::from_polar(r, t)
}

fn zeros_strategy(max_radius: f64) -> impl Strategy<Value = Vec<CPoint>> {
    prop::collection::vec((0.0..max_radius, 0.0..TAU), 1..7).prop_map(|v| v.into_iter().map(|(r, t)| polar(r, t)).collect())
}

/// `||B(e^{iθ})| − 1| ≤ 1e−10` for random finite products.
pub fn unimodularity(cases: u32) -> Result<(), String> {
    let strat = (zeros_strategy(0.99), 0.0..TAU, 0.0..TAU);
    outcome(runner(cases).run(&strat, |(zeros, phase, theta)| {
        let b = FiniteBlaschke::new(phase, zeros).unwrap();
        let w = b.eval(polar(1.0, theta));
        prop_assert!((w.norm() - 1.0).abs() <= 1e-10, "|B| = {}", w.norm());
        Ok(())
    }))
}

/// `Im g(z) > 0` whenever `Im z > 0`, for both half-plane families.
pub fn halfplane_preservation(cases: u32) -> Result<(), String> {
    let strat = (
        0.05..5.0f64,
        -PI / 2.0..PI / 2.0,
        0.05..10.0f64,
        -20.0..20.0f64,
        -6.0..2.0f64,
    );
    outcome(runner(cases).run(&strat, |(a, b, lambda, x, log_y)| {
        let z = c(x, 10f64.powf(log_y));
        let tan = TanFamily::new(a, b).unwrap();
        let w = tan.eval(z).unwrap();
        prop_assert!(w.im > 0.0, "tan family a={a} b={b} at {z}: {w}");
        let cot = CotFamily::new(lambda).unwrap();
        let w = cot.eval(z).unwrap();
        prop_assert!(w.im > 0.0, "cot family λ={lambda} at {z}: {w}");
        Ok(())
    }))
}

/// `|κ(f(z)) − τκ(z)| ≤ 1e−8` on both sides of the correspondence.
pub fn koenigs_residuals(cases: u32) -> Result<(), String> {
    let strat = (0u8..4, 0.1..0.9f64, 0.0..TAU, 0.0..1.0f64, 0.0..TAU);
    outcome(runner(cases).run(&strat, |(kind, p, arg, r, phi)| {
        let u = polar(r, phi);
        let residual = match kind {
            0 => {
                let f = EntireFamily::SineLambda { lambda: p };
                koenigs_chart(f, c(0.0, 0.0), c(p, 0.0))
                    .and_then(|k| k.functional_residual(0.3 * u))
            }
            1 => {
                let tau = polar(p, arg);
                let f = EntireFamily::ExpLambda {
                    lambda: tau * (-tau).exp(),
                };
                koenigs_chart(f, tau, tau).and_then(|k| k.functional_residual(tau + 0.1 * (1.0 - p) * u))
            }
            2 => {
                let g = SineFamilyProduct::new(tau_of_lambda(p).unwrap()).unwrap();
                koenigs_chart(g, c(0.0, 0.0), c(p, 0.0)).and_then(|k| k.functional_residual(0.3 * u))
            }
            _ => {
                let m = polar(p, arg);
                let g = FiniteBlaschke::elliptic_degree_two(m).unwrap();
                koenigs_chart(g, c(0.0, 0.0), m).and_then(|k| k.functional_residual(0.9 * u))
            }
        };
        match residual {
            Ok(res) => prop_assert!(res <= 1e-8, "kind {kind}: residual {res:e}"),
            Err(e) => prop_assert!(false, "kind {kind}: {e}"),
        }
        Ok(())
    }))
}

fn family_for(kind: u8, p: f64, arg: f64, d: u32) -> EntireFamily {
    match kind {
        0 => EntireFamily::ExpLambda {
            lambda: polar(0.1 + 1.9 * p, arg),
        },
        1 => EntireFamily::SineLambda { lambda: 0.05 + 0.9 * p },
        2 => EntireFamily::FatouLambda { lambda: 0.1 + 4.9 * p },
        3 => EntireFamily::ZExp {
            lambda: polar(0.1 + 1.9 * p, arg),
        },
        4 => EntireFamily::PowerExp {
            lambda: polar(0.05 + 0.95 * p, arg),
            q: d - 1,
        },
        5 => EntireFamily::AlphaD { d },
        6 => EntireFamily::RhoD { d, lambda: p },
        7 => EntireFamily::CstarMap { d },
        _ => EntireFamily::CstarLift { d },
    }
}

/// Analytic derivative against a central difference along the real
/// direction, relative error ≤ 1e−6.
pub fn derivative_vs_difference(cases: u32) -> Result<(), String> {
    let strat = (
        0u8..13,
        0.0..1.0f64,
        0.0..TAU,
        2u32..6,
        (-2.0..2.0f64, -2.0..2.0f64),
        zeros_strategy(0.9),
    );
    outcome(runner(cases).run(&strat, |(kind, p, arg, d, (x, y), zeros)| {
        let h = 1e-5;
        let (name, z, deriv, fd): (String, CPoint, CPoint, CPoint) = match kind {
            0..=8 => {
                let f = family_for(kind, p, arg, d);
                let z = c(x, y);
                let fd = (f.value(z + h).unwrap() - f.value(z - h).unwrap()) / (2.0 * h);
                (format!("{f:?}"), z, f.derivative(z).unwrap(), fd)
            }
            9 | 10 => {
                // keep a margin from the real poles
                let z = c(3.0 * x, 0.1 + y.abs());
                let f: Box<dyn ComplexMap> = if kind == 9 {
                    Box::new(TanFamily::new(0.1 + 2.9 * p, (arg - PI) / 2.0).unwrap())
                } else {
                    Box::new(CotFamily::new(0.1 + 4.9 * p).unwrap())
                };
                let fd = (f.value(z + h).unwrap() - f.value(z - h).unwrap()) / (2.0 * h);
                (format!("half-plane {kind}"), z, f.derivative(z).unwrap(), fd)
            }
            11 => {
                let b = FiniteBlaschke::new(arg, zeros).unwrap();
                let z = polar(0.9 * p, PI * x);
                let fd = (b.eval(z + h) - b.eval(z - h)) / (2.0 * h);
                (format!("{b:?}"), z, b.derivative(z), fd)
            }
            _ => {
                let g = SineFamilyProduct::new(1.5 + 18.5 * p).unwrap();
                let z = polar(0.9 * (y.abs() / 2.0), PI * x);
                let fd = (g.eval(z + h).unwrap() - g.eval(z - h).unwrap()) / (2.0 * h);
                (format!("sine product τ={}", g.tau()), z, g.derivative(z).unwrap(), fd)
            }
        };
        let err = (deriv - fd).norm() / deriv.norm().max(1.0);
        prop_assert!(err <= 1e-6, "{name} at {z}: analytic {deriv}, difference {fd}, error {err:e}");
        Ok(())
    }))
}
