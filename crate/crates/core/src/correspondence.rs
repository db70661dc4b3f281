//! Pairing checks between entire maps restricted to an invariant Fatou
//! component and inner functions associated to them.
//!
//! Every check produces a [`PairingReport`]: rows of two independently
//! computed values with a tolerance. The two sides of a row never share the
//! code path that produced them.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::blaschke::{lambda_of_tau, solve_topfer_k, tau_of_lambda, FiniteBlaschke, SineFamilyProduct};
use crate::entire::{exp_multiplier_map, koenigs_chart, rho_bifurcation_lambda0, EntireFamily};
use crate::error::{Error, Result};
use crate::halfplane::{
    classify_by_iteration, classify_tan_family, denjoy_wolff_estimate, mu_from_ab, solve_ab_from_multiplier,
    CotFamily, TanFamily, WolffLimit, ITERATION_BUDGET,
};
use crate::inner_factor::AtomicInnerFunction;
use crate::numerics::{
    c, central_difference, disc_distance, find_zeros, power_law_exponent, taylor_coefficients, ComplexMap, CPoint,
    Window,
};
use crate::raster::TractSetup;

/// One compared quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingRow {
    pub name: String,
    pub left: CPoint,
    pub right: CPoint,
    pub tolerance: f64,
    pub pass: bool,
}

impl PairingRow {
    pub fn new(name: impl Into<String>, left: CPoint, right: CPoint, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            left,
            right,
            tolerance,
            pass: (left - right).norm() <= tolerance,
        }
    }

    pub fn real(name: impl Into<String>, left: f64, right: f64, tolerance: f64) -> Self {
        Self::new(name, c(left, 0.0), c(right, 0.0), tolerance)
    }

    /// The same row with the sides exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.name.clone(), self.right, self.left, self.tolerance)
    }
}

/// Rows comparing an entire map against an inner function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingReport {
    pub family: String,
    pub inner: String,
    pub rows: Vec<PairingRow>,
    /// Observations reported without a pass/fail verdict.
    pub notes: Vec<String>,
}

impl PairingReport {
    pub fn new(family: impl Into<String>, inner: impl Into<String>) -> Self {
        Self {
            family: family.into(),
            inner: inner.into(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: PairingRow) {
        self.rows.push(row);
    }

    pub fn real(&mut self, name: &str, left: f64, right: f64, tolerance: f64) {
        self.push(PairingRow::real(name, left, right, tolerance));
    }

    pub fn complex(&mut self, name: &str, left: CPoint, right: CPoint, tolerance: f64) {
        self.push(PairingRow::new(name, left, right, tolerance));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairingRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn row(&self, name: &str) -> Option<&PairingRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// Fixed-width table for terminals.
    pub fn to_table(&self) -> String {
        let fmt = |z: CPoint| {
            if z.im == 0.0 {
                format!("{:.12e}", z.re)
            } else {
                format!("{:.9e}{:+.9e}i", z.re, z.im)
            }
        };
        let width = self.rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(4).max(4);
        let mut out = format!("{} | {}\n", self.family, self.inner);
        out.push_str(&format!(
            "{:<width$}  {:>34}  {:>34}  {:>8}  {}\n",
            "row", "left", "right", "tol", "pass"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<width$}  {:>34}  {:>34}  {:>8.1e}  {}\n",
                r.name,
                fmt(r.left),
                fmt(r.right),
                r.tolerance,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields serialize")
    }
}

/// `g_μ(z) = exp(i(μ + μ̄z)/(1 + z))`, the disc model of the exponential
/// pairing.
pub fn g_mu(mu: CPoint, z: CPoint) -> CPoint {
    (c(0.0, 1.0) * (mu + mu.conj() * z) / (1.0 + z)).exp()
}

/// Sample points in a half-strip used for semi-conjugacy checks.
fn strip_samples() -> Vec<CPoint> {
    let mut out = Vec::new();
    for i in 0..5 {
        for j in 0..4 {
            out.push(c(-1.2 + 0.6 * i as f64, 0.15 + 0.45 * j as f64));
        }
    }
    out
}

/// Attracting fixed point of `λe^z` reached by iterating from the
/// asymptotic value 0 and polishing with Newton.
fn exp_fixed_point_from_orbit(f: &EntireFamily) -> Result<CPoint> {
    let mut z = c(0.0, 0.0);
    for _ in 0..ITERATION_BUDGET {
        let next = f.value(z)?;
        if (next - z).norm() < 1e-9 {
            z = next;
            break;
        }
        z = next;
    }
    for _ in 0..50 {
        let (v, d) = f.value_and_derivative(z)?;
        let step = (v - z) / (d - 1.0);
        z -= step;
        if step.norm() < 1e-16 {
            break;
        }
    }
    Ok(z)
}

/// `λ e^z` with `λ = τe^{−τ}` against `a·tan z + b` solved from `τ`.
pub fn verify_exp_pairing(tau: CPoint) -> Result<PairingReport> {
    if !(tau.norm() > 0.0 && tau.norm() < 1.0) {
        return Err(Error::Domain(format!("need 0 < |τ| < 1, got {tau}")));
    }
    let near_parabolic = (tau - 1.0).norm() < 0.05;
    let tol = if near_parabolic { 1e-4 } else { 1e-8 };
    let lambda = exp_multiplier_map(tau)?;
    let f = EntireFamily::ExpLambda { lambda };
    let (g, rec) = solve_ab_from_multiplier(tau)?;
    let mut rep = PairingReport::new(
        format!("exp λ = {lambda:.12}"),
        format!("tan a = {:.12}, b = {:.12}", g.a(), g.b()),
    );
    if near_parabolic {
        rep.note(format!("τ is within 0.05 of 1; tolerances loosened to {tol:e}"));
    }

    // multipliers
    let zf = exp_fixed_point_from_orbit(&f)?;
    rep.complex("f fixed point from the orbit of 0", zf, tau, tol);
    rep.complex("f multiplier", f.derivative(zf)?, tau, tol);
    rep.complex("g multiplier at the solved fixed point", rec.multiplier, tau, tol);
    let fresh = classify_tan_family(&g)?;
    rep.complex("g multiplier, fixed point re-located from (a, b)", fresh.multiplier, tau, tol);
    let it = classify_by_iteration(&g, ITERATION_BUDGET);
    rep.complex("g multiplier at the orbit limit of b + ai", g.derivative(it.limit)?, tau, tol);

    // one singular value each, no critical points
    let wf = Window::around(zf, 4.0)?;
    let crit_f = find_zeros(|z| f.derivative(z), &wf, 1e-9)?;
    rep.real("critical points of f near its fixed point", crit_f.len() as f64, 0.0, 0.0);
    let wg = Window::new(-FRAC_PI_2 + 0.05, FRAC_PI_2 - 0.05, 0.01, 4.0)?;
    let crit_g = find_zeros(|z| g.derivative(z), &wg, 1e-9)?;
    rep.real("critical points of g in a period strip", crit_g.len() as f64, 0.0, 0.0);
    rep.complex("f asymptotic value, f(−40)", f.value(c(-40.0, 0.0))?, c(0.0, 0.0), 1e-15);
    rep.complex(
        "g asymptotic value, g(ζ + 30i)",
        g.value(rec.location + c(0.0, 30.0))?,
        c(g.b(), g.a()),
        1e-12,
    );

    // disc model with μ = 2(b + ai) under z = e^{2iw}
    let mu = mu_from_ab(&g);
    rep.complex("μ against 2(b + ai)", mu, 2.0 * c(g.b(), g.a()), 0.0);
    let inner = AtomicInnerFunction::exponential_form(mu.im, mu.re)?;
    let mut worst_direct: f64 = 0.0;
    let mut worst_factored: f64 = 0.0;
    for w in strip_samples() {
        let z = (c(0.0, 2.0) * w).exp();
        let lhs = (c(0.0, 2.0) * g.eval(w)?).exp();
        worst_direct = worst_direct.max((g_mu(mu, z) - lhs).norm());
        worst_factored = worst_factored.max((inner.eval(z)? - lhs).norm());
    }
    rep.real("e^{2ig(w)} against g_μ(e^{2iw}), worst sample", worst_direct, 0.0, 1e-11);
    rep.real(
        "e^{2ig(w)} against rotation·singular factor, worst sample",
        worst_factored,
        0.0,
        1e-11,
    );
    let zd = (c(0.0, 2.0) * rec.location).exp();
    let md = central_difference(|z| Ok(g_mu(mu, z)), zd, 1e-6 * zd.norm().max(1e-3))?;
    rep.complex("g_μ multiplier at e^{2iζ}", md, tau, tol.max(1e-8));
    Ok(rep)
}

/// `tan` on the upper half-plane against `e^{z−1}` at its parabolic point.
pub fn verify_parabolic_tan() -> Result<PairingReport> {
    let mut rep = PairingReport::new("exp(z − 1)", "tan");
    let t = TanFamily::tangent();
    // Taylor data from the Cauchy integral; derivatives are k!·c_k
    let coeffs = taylor_coefficients(|z| t.eval(z), c(0.0, 0.0), 0.5, 64, 4)?;
    let fact = [1.0, 1.0, 2.0, 6.0];
    let expect = [0.0, 1.0, 0.0, 2.0];
    for k in 0..4 {
        rep.complex(&format!("tan derivative of order {k} at 0"), coeffs[k] * fact[k], c(expect[k], 0.0), 1e-10);
    }

    // zero hyperbolic step: steps decay like 1/k
    let est = denjoy_wolff_estimate(&t, &[c(0.0, 1.0), c(0.2, 0.6)], 10_000)?;
    let ks: Vec<f64> = (100..10_000).map(|k| k as f64).collect();
    let ys: Vec<f64> = (100..10_000).map(|k| est.steps[k - 1]).collect();
    rep.real("step decay exponent over k in [1e2, 1e4]", power_law_exponent(&ks, &ys), -1.0, 0.2);
    rep.real("zero hyperbolic step flagged", est.zero_step as u8 as f64, 1.0, 0.0);
    let dw = match est.limit {
        WolffLimit::Boundary(x) => x,
        WolffLimit::Interior(z) => z.norm(),
        WolffLimit::Infinity => f64::INFINITY,
    };
    rep.real("Denjoy–Wolff point of tan", dw, 0.0, 1e-2);

    let f = EntireFamily::ExpLambda {
        lambda: c((-1.0f64).exp(), 0.0),
    };
    let (v, d) = f.value_and_derivative(c(1.0, 0.0))?;
    rep.complex("exp(z − 1) at 1", v, c(1.0, 0.0), 1e-15);
    rep.complex("exp(z − 1) multiplier at 1", d, c(1.0, 0.0), 1e-15);

    // the disc form exp(2(w − 1)/(w + 1)) is tan under w = e^{2iz}
    let inner = AtomicInnerFunction::exponential_form(2.0, 0.0)?;
    let mut worst: f64 = 0.0;
    for z in strip_samples() {
        let lhs = (c(0.0, 2.0) * t.eval(z)?).exp();
        worst = worst.max((inner.eval((c(0.0, 2.0) * z).exp())? - lhs).norm());
    }
    rep.real("e^{2i tan z} against exp(2(w − 1)/(w + 1)), worst sample", worst, 0.0, 1e-11);
    Ok(rep)
}

/// Options for [`verify_sine_pairing_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SineOptions {
    /// Horizontal resolution of the tract raster; `0` skips the raster.
    pub tract_resolution: usize,
    /// A deliberately wrong `τ` whose Koenigs ratios are reported.
    pub negative_control_tau: Option<f64>,
    /// Positive scale injected into the inner-side chart values.
    pub chart_scale: f64,
}

impl Default for SineOptions {
    fn default() -> Self {
        Self {
            tract_resolution: 400,
            negative_control_tau: Some(5.0),
            chart_scale: 1.0,
        }
    }
}

/// `κ(p_{k+1})/κ(p_k)` for consecutive probe values.
pub fn koenigs_ratios(values: &[CPoint]) -> Vec<CPoint> {
    values.windows(2).map(|w| w[1] / w[0]).collect()
}

fn sine_inner_chart_values(g: &SineFamilyProduct, probes: usize) -> Result<Vec<CPoint>> {
    let m = g.derivative(c(0.0, 0.0))?;
    let chart = koenigs_chart(g, c(0.0, 0.0), m)?;
    (1..=probes)
        .map(|k| {
            let b = c(g.positive_critical_point(k)?, 0.0);
            chart.eval(b).map_err(|_| Error::BasinEscape { z: b })
        })
        .collect()
}

/// `λ sin z` against the infinite Blaschke product `g_τ` with `τ = ψ(λ)`.
pub fn verify_sine_pairing(lambda: f64) -> Result<PairingReport> {
    verify_sine_pairing_with(lambda, &SineOptions::default())
}

pub fn verify_sine_pairing_with(lambda: f64, opts: &SineOptions) -> Result<PairingReport> {
    if !(lambda > 0.05 && lambda < 0.95) {
        return Err(Error::Domain(format!("λ must lie in (0.05, 0.95), got {lambda}")));
    }
    if !(opts.chart_scale > 0.0) {
        return Err(Error::InvalidConfig("chart scale must be positive".into()));
    }
    let tau = tau_of_lambda(lambda)?;
    let g = SineFamilyProduct::new(tau)?;
    let f = EntireFamily::SineLambda { lambda };
    let mut rep = PairingReport::new(
        format!("sine λ = {lambda}"),
        format!("product τ = {tau:.15}, {} zero pairs", g.pairs()),
    );

    // multipliers
    rep.complex("g_τ'(0) against λ", g.derivative(c(0.0, 0.0))?, c(lambda, 0.0), 1e-10);
    rep.complex("f'(0) against λ", f.derivative(c(0.0, 0.0))?, c(lambda, 0.0), 1e-15);
    rep.real("λ(τ) round trip", lambda_of_tau(tau)?, lambda, 1e-12);

    // hyperbolic spacing of the zeros
    let rule = g.zeros_rule();
    for n in 1..=5 {
        let a = c(rule.a(n), 0.0);
        rep.real(
            &format!("hyperbolic distance from 0 to a_{n} against {n}·log τ"),
            disc_distance(a, c(0.0, 0.0)),
            n as f64 * tau.ln(),
            1e-12,
        );
    }

    // singularities: the zeros accumulate at ±1 only
    let far = g.pairs();
    rep.real("1 − a_n at the truncation", rule.one_minus_a(far), 0.0, 1e-10);
    // limit points of the zero set: cluster the zeros near the circle by
    // their boundary direction
    let mut directions: Vec<CPoint> = Vec::new();
    for a in g.product().zeros() {
        if a.norm() > 0.999 {
            let u = a / a.norm();
            if directions.iter().all(|d| (d - u).norm() > 1e-3) {
                directions.push(u);
            }
        }
    }
    rep.real("boundary points where the zeros of g_τ accumulate", directions.len() as f64, 2.0, 0.0);
    if opts.tract_resolution > 0 {
        let setup = TractSetup::sine(lambda, opts.tract_resolution)?;
        let count = setup.count()?;
        rep.real("tracts of f (raster)", count.count as f64, 2.0, 0.0);
        rep.note(format!(
            "raster disc radius {} (singular values at distance {})",
            setup.disc.radius, setup.singular_reach
        ));
        if count.resolution_warning {
            rep.note("a counted raster component has fewer than 10 pixels");
        }
    }

    // Koenigs ratios at critical points matched in order
    let probes = 3;
    let kg: Vec<CPoint> = sine_inner_chart_values(&g, probes)?
        .into_iter()
        .map(|v| v * opts.chart_scale)
        .collect();
    let chart_f = koenigs_chart(f, c(0.0, 0.0), c(lambda, 0.0))?;
    let kf: Vec<CPoint> = (1..=probes)
        .map(|k| {
            let p = c((2 * k - 1) as f64 * FRAC_PI_2, 0.0);
            chart_f.eval(p).map_err(|_| Error::BasinEscape { z: p })
        })
        .collect::<Result<_>>()?;
    let rg = koenigs_ratios(&kg);
    let rf = koenigs_ratios(&kf);
    for k in 0..probes - 1 {
        rep.complex(
            &format!("Koenigs ratio at critical points {} and {}", k + 2, k + 1),
            rg[k],
            rf[k],
            1e-5,
        );
    }
    let ordered = (1..probes).all(|k| {
        matches!(
            (g.positive_critical_point(k), g.positive_critical_point(k + 1)),
            (Ok(a), Ok(b)) if a < b
        )
    });
    rep.note(format!(
        "critical points of g_τ matched to (2k − 1)π/2 by order; order along the axis {}",
        if ordered { "agrees" } else { "disagrees" }
    ));

    if let Some(t) = opts.negative_control_tau {
        let wrong = SineFamilyProduct::new(t)?;
        let rw = koenigs_ratios(&sine_inner_chart_values(&wrong, probes)?);
        let sep = rw.iter().zip(&rf).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        rep.note(format!(
            "negative control τ = {t}: largest Koenigs-ratio difference {sep:.3e}; multiplier {:.6}",
            wrong.derivative(c(0.0, 0.0))?.re
        ));
    }
    Ok(rep)
}

/// `z − (λ/2) cot z` and `λ + z + e^{−z}`.
pub fn verify_fatou_pairing(lambda: f64) -> Result<PairingReport> {
    if !(lambda > 0.1 && lambda < 10.0) {
        return Err(Error::Domain(format!("λ must lie in (0.1, 10), got {lambda}")));
    }
    let h = CotFamily::new(lambda)?;
    let nu = h.nu();
    let mut rep = PairingReport::new(format!("λ + z + e^(−z), λ = {lambda}"), format!("z − ν cot z, ν = {nu}"));
    rep.note("ν = λ/2 is the asserted relation; only its consequences are checked");

    // poles at nπ, simple with residue −ν
    let (x0, x1) = (-PI - 0.3, 2.0 * PI + 0.3);
    let poles = h.real_poles(x0, x1, 4000)?;
    rep.real("real poles in (−π − 0.3, 2π + 0.3)", poles.len() as f64, 4.0, 0.0);
    for (i, p) in poles.iter().enumerate() {
        let n = i as f64 - 1.0;
        rep.real(&format!("pole {i} against {n}π"), *p, n * PI, 1e-10);
        // residue by the trapezoid rule on a circle of radius 1/2
        let m = 64;
        let res: CPoint = (0..m)
            .map(|j| {
                let e = Complex64::from_polar(0.5, 2.0 * PI * j as f64 / m as f64);
                h.eval(c(n * PI, 0.0) + e).map(|v| v * e)
            })
            .sum::<Result<CPoint>>()?
            / m as f64;
        rep.complex(&format!("residue at {n}π"), res, c(-nu, 0.0), 1e-12);
    }

    // fixed points at odd multiples of π/2, one between consecutive poles
    let fixed = h.real_fixed_points(x0, x1, 4000)?;
    for (i, x) in fixed.iter().enumerate() {
        let expect = (2 * i as i32 - 1) as f64 * FRAC_PI_2;
        rep.real(&format!("fixed point {i} against {}π/2", 2 * i as i32 - 1), *x, expect, 1e-10);
        rep.real(
            &format!("h' at fixed point {i} against 1 + ν"),
            h.derivative(c(*x, 0.0))?.re,
            1.0 + nu,
            1e-12,
        );
    }
    for w in poles.windows(2) {
        let between = fixed.iter().filter(|&&x| x > w[0] && x < w[1]).count();
        rep.real(&format!("fixed points in ({:.4}, {:.4})", w[0], w[1]), between as f64, 1.0, 0.0);
    }

    // π-commutation and half-plane preservation
    let mut worst: f64 = 0.0;
    let mut escapes = 0;
    for i in 0..40 {
        for j in 0..10 {
            let z = c(-3.0 + 0.17 * i as f64, 0.05 + 0.4 * j as f64);
            worst = worst.max((h.eval(z + PI)? - h.eval(z)? - PI).norm());
            if !(h.eval(z)?.im > 0.0) {
                escapes += 1;
            }
        }
    }
    rep.real("π-commutation residual, worst sample", worst, 0.0, 1e-12);
    rep.real("samples leaving the upper half-plane", escapes as f64, 0.0, 0.0);
    // cot z → −i as Im z → ∞, so orbits climb by ν per step
    let mut z = c(0.3, 3.0);
    for _ in 0..200 {
        z = h.eval(z)?;
    }
    let start = z.im;
    for _ in 0..200 {
        z = h.eval(z)?;
    }
    rep.real("upward drift per step at large Im", (z.im - start) / 200.0, nu, 1e-6);

    // the entire side
    let f = EntireFamily::FatouLambda { lambda };
    let win = Window::new(-lambda.ln() - 2.0, -lambda.ln() + 2.03, -10.0, 10.0)?;
    let zeros = find_zeros(|z| Ok(f.value(z)? - z), &win, 1e-9)?;
    let expect = EntireFamily::fatou_fixed_points(lambda, -2, 1);
    rep.real("fixed points of f with |Im| < 10", zeros.len() as f64, expect.len() as f64, 0.0);
    for e in &expect {
        let nearest = zeros
            .iter()
            .map(|z| z.location)
            .min_by(|a, b| (a - e).norm().total_cmp(&(b - e).norm()))
            .unwrap_or(c(f64::NAN, f64::NAN));
        rep.complex(&format!("fixed point near {:.4}i", e.im), nearest, *e, 1e-10);
    }
    let mut below = 0;
    for k in 0..=200 {
        let x = -5.0 + 0.1 * k as f64;
        if !(f.value(c(x, 0.0))?.re > x) {
            below += 1;
        }
    }
    rep.real("real samples with f(x) ≤ x", below as f64, 0.0, 0.0);
    Ok(rep)
}

/// Compares an atomic inner function against the expected Blaschke degree
/// `p` and atom count `q`; masses are expected to be equal.
pub fn check_unisingular_form(p: usize, q: usize, instance: &AtomicInnerFunction) -> PairingReport {
    let mut rep = PairingReport::new(format!("p = {p}, q = {q}"), "atomic inner function");
    rep.real("Blaschke degree", instance.blaschke_degree() as f64, p as f64, 0.0);
    rep.real("atom count", instance.atom_count() as f64, q as f64, 0.0);
    let masses: Vec<f64> = instance.singular().atoms().iter().map(|a| a.mass).collect();
    let spread = masses.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - masses.iter().cloned().fold(f64::INFINITY, f64::min);
    rep.real("atom mass spread", if masses.is_empty() { 0.0 } else { spread }, 0.0, 1e-15);
    rep
}

/// The worked forms for `λe^z`, `e^{z−1}`, `λze^z` and `λe^{z³}`.
pub fn verify_unisingular_forms() -> Result<PairingReport> {
    let mut rep = PairingReport::new("worked forms", "atomic inner functions");
    let cases = [
        ("λe^z", 0, 1, AtomicInnerFunction::exponential_form(0.7, 0.3)?),
        ("e^(z−1)", 0, 1, AtomicInnerFunction::exponential_form(2.0, 0.0)?),
        ("λze^z", 1, 1, AtomicInnerFunction::z_exponential_form(0.7, 0.3)?),
        ("λe^(z³)", 0, 3, AtomicInnerFunction::power_exponential_form(3, 0.4, 0.2)?),
    ];
    for (name, p, q, inst) in &cases {
        for row in check_unisingular_form(*p, *q, inst).rows {
            rep.push(PairingRow {
                name: format!("{name}: {}", row.name),
                ..row
            });
        }
    }
    let cube = AtomicInnerFunction::power_exponential_form(3, 0.4, 0.0)?;
    let mut worst: f64 = 0.0;
    for (i, atom) in cube.singular().atoms().iter().enumerate() {
        let angle = atom.theta.rem_euclid(2.0 * PI);
        let nearest = (angle / (2.0 * PI / 3.0)).round() * (2.0 * PI / 3.0);
        worst = worst.max((angle - nearest).abs());
        let _ = i;
    }
    rep.real("λe^(z³): atom angles off the cube roots of unity", worst, 0.0, 1e-12);
    // rotating the variable by a cube root of unity leaves the form unchanged
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let z = c(0.31, -0.22);
    rep.complex("λe^(z³): symmetry under z ↦ ωz", cube.eval(omega * z)?, cube.eval(z)?, 1e-13);
    Ok(rep)
}

/// `k = 1/3` for the parabolic Töpfer map and the coefficient identity with
/// `(3z² + 1)/(3 + z²)`.
pub fn verify_topfer() -> Result<PairingReport> {
    let mut rep = PairingReport::new("z + e^(−z)", "Töpfer map (z² + k)/(kz² + 1)");
    let sol = solve_topfer_k()?;
    rep.real("k", sol.k, 1.0 / 3.0, 1e-12);
    let g = |z: CPoint| (3.0 * z * z + 1.0) / (3.0 + z * z);
    let one = c(1.0, 0.0);
    rep.complex("g(1)", g(one), one, 1e-12);
    let coeffs = taylor_coefficients(|z| Ok(g(z)), one, 0.5, 64, 3)?;
    rep.complex("g'(1)", coeffs[1], one, 1e-12);
    rep.complex("g''(1)", 2.0 * coeffs[2], c(0.0, 0.0), 1e-12);
    let b = FiniteBlaschke::topfer(sol.k)?;
    rep.real("Blaschke form g''(1)", sol.second_derivative_at_one, 0.0, 1e-10);
    // (3z² + 1)/(3 + z²) = (1/3 + z²)/(1 + z²/3)
    let (num, den) = b.rational_coefficients();
    let lit_num = [c(1.0 / 3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    let lit_den = [c(1.0, 0.0), c(0.0, 0.0), c(1.0 / 3.0, 0.0)];
    for k in 0..3 {
        rep.complex(&format!("numerator z^{k}"), num[k], lit_num[k], 1e-12);
        rep.complex(&format!("denominator z^{k}"), den[k], lit_den[k], 1e-12);
    }
    Ok(rep)
}

/// The parabolic parameter of `(α_d + λ)/(1 + λ)`; for `d = 2` also the
/// published value 0.0548.
pub fn verify_lambda0(d: u32) -> Result<PairingReport> {
    let sol = rho_bifurcation_lambda0(d)?;
    let mut rep = PairingReport::new(format!("(α_{d} + λ)/(1 + λ)"), "tangency and orbit bisection");
    rep.real("λ₀ tangency against orbit bisection", sol.lambda0, sol.orbit_lambda0, 1e-6);
    if d == 2 {
        rep.real("λ₀ against 0.0548", sol.lambda0, 0.0548, 5e-4);
    }
    let f = EntireFamily::RhoD {
        d,
        lambda: sol.lambda0,
    };
    let x = c(sol.tangency_point, 0.0);
    let (v, m) = f.value_and_derivative(x)?;
    rep.complex("f(x) at the tangency point", v, x, 1e-12);
    rep.complex("f'(x) at the tangency point", m, c(1.0, 0.0), 1e-10);
    rep.note(format!("tangency point x = {:.12}", sol.tangency_point));
    Ok(rep)
}
