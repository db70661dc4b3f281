//! Inner functions of the upper half-plane: `a·tan z + b` and
//! `z − (λ/2)·cot z`.
//!
//! The tangent family is classified two ways that share no code: by solving
//! for fixed points (a monotone bracket on the real segment where the
//! derivative is at most one, then damped Newton in the half-plane), and by
//! iterating from the asymptotic value `b + ai`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    bracket_root, c, damped_newton, halfplane_distance, stable_cot, stable_tan, ComplexMap, CPoint,
    RootSolveConfig,
};

/// `|multiplier − 1|` at or below this is classified as parabolic.
pub const PARABOLIC_BAND: f64 = 1e-6;
/// A Denjoy–Wolff step below this after the iteration budget counts as zero.
pub const ZERO_STEP_THRESHOLD: f64 = 1e-3;
/// Iteration budget used by the orbit-based classifier.
pub const ITERATION_BUDGET: usize = 10_000;

/// `1/cos² z` without overflow for large `|Im z|`.
fn sec2(z: CPoint) -> CPoint {
    if z.im.abs() < 20.0 {
        let cz = z.cos();
        1.0 / (cz * cz)
    } else {
        // 4 e^{±2iz}/(1 + e^{±2iz})², choosing the decaying exponential
        let e = if z.im > 0.0 {
            (c(0.0, 2.0) * z).exp()
        } else {
            (c(0.0, -2.0) * z).exp()
        };
        4.0 * e / ((1.0 + e) * (1.0 + e))
    }
}

/// `1/sin² z` without overflow for large `|Im z|`.
fn csc2(z: CPoint) -> CPoint {
    if z.im.abs() < 20.0 {
        let sz = z.sin();
        1.0 / (sz * sz)
    } else {
        let e = if z.im > 0.0 {
            (c(0.0, 2.0) * z).exp()
        } else {
            (c(0.0, -2.0) * z).exp()
        };
        -4.0 * e / ((1.0 - e) * (1.0 - e))
    }
}

/// `g(z) = a·tan z + b` with `a > 0` and `b ∈ (−π/2, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TanFamily {
    a: f64,
    b: f64,
}

/// Shifts `b` by a multiple of π into `(−π/2, π/2]`; returns the shifted
/// value and the shift that was subtracted.
pub fn normalize_b(b: f64) -> (f64, f64) {
    let k = ((b + FRAC_PI_2) / PI).floor();
    let mut nb = b - k * PI;
    let mut shift = k * PI;
    if nb > FRAC_PI_2 {
        nb -= PI;
        shift += PI;
    }
    // −π/2 and values rounding onto it are represented by π/2
    if nb <= -FRAC_PI_2 + 1e-12 {
        nb = (nb + PI).min(FRAC_PI_2);
        shift -= PI;
    }
    (nb, shift)
}

impl TanFamily {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("a must be positive, got {a}")));
        }
        if !(b > -FRAC_PI_2 && b <= FRAC_PI_2) {
            return Err(Error::Domain(format!("b must lie in (−π/2, π/2], got {b}")));
        }
        Ok(Self { a, b })
    }

    /// Accepts any real `b`, reducing it mod π (the map is π-periodic, so
    /// `a·tan z + b` and `a·tan z + b − kπ` are conjugate by a translation).
    pub fn normalized(a: f64, b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::Domain(format!("b must be finite, got {b}")));
        }
        Self::new(a, normalize_b(b).0)
    }

    /// The tangent itself, `a = 1, b = 0`.
    pub fn tangent() -> Self {
        Self { a: 1.0, b: 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn eval(&self, z: CPoint) -> Result<CPoint> {
        Ok(self.a * stable_tan(z)? + self.b)
    }

    pub fn derivative(&self, z: CPoint) -> Result<CPoint> {
        stable_tan(z)?;
        Ok(self.a * sec2(z))
    }

    /// `g''(z) = 2a·tan z / cos² z`.
    pub fn second_derivative(&self, z: CPoint) -> Result<CPoint> {
        Ok(2.0 * self.a * stable_tan(z)? * sec2(z))
    }

    /// The limit `b + ai` of `g` at `i∞`, its only asymptotic value in the
    /// half-plane.
    pub fn asymptotic_value(&self) -> CPoint {
        c(self.b, self.a)
    }

    /// Whether the sign test puts `(a, b)` in the attracting region.
    pub fn in_attracting_region(&self) -> bool {
        self.a > 1.0 || self.b.abs() > boundary_curve_theta(self.a).unwrap_or(f64::INFINITY)
    }

    /// `|b| − θ(a)` for `a ≤ 1` (positive inside the attracting region);
    /// `None` for `a > 1`.
    pub fn region_margin(&self) -> Option<f64> {
        boundary_curve_theta(self.a).ok().map(|t| self.b.abs() - t)
    }
}

impl ComplexMap for TanFamily {
    fn value(&self, z: CPoint) -> Result<CPoint> {
        self.eval(z)
    }
    fn derivative(&self, z: CPoint) -> Result<CPoint> {
        TanFamily::derivative(self, z)
    }
}

/// `a·tan z + b`.
pub fn eval_tan_family(g: &TanFamily, z: CPoint) -> Result<CPoint> {
    g.eval(z)
}

/// `θ(a) = arccos √a − √a·√(1 − a)` on `0 < a ≤ 1`.
pub fn boundary_curve_theta(a: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::Domain(format!("θ(a) needs 0 < a ≤ 1, got {a}")));
    }
    let s = a.sqrt();
    Ok(s.acos() - s * (1.0 - a).sqrt())
}

/// `μ = 2(b + ai)`.
pub fn mu_from_ab(g: &TanFamily) -> CPoint {
    2.0 * c(g.b, g.a)
}

/// Dynamical type of a fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FixedPointClass {
    AttractingInterior,
    AttractingBoundary,
    Parabolic { multiplicity: u32 },
    Repelling,
}

impl FixedPointClass {
    pub fn label(&self) -> &'static str {
        match self {
            Self::AttractingInterior => "attracting-interior",
            Self::AttractingBoundary => "attracting-boundary",
            Self::Parabolic { .. } => "parabolic",
            Self::Repelling => "repelling",
        }
    }
}

impl fmt::Display for FixedPointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parabolic { multiplicity } => write!(f, "parabolic({multiplicity})"),
            other => f.write_str(other.label()),
        }
    }
}

/// A located fixed point with its multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub location: CPoint,
    /// The point lies on the real axis, the boundary of the half-plane.
    pub on_boundary: bool,
    pub multiplier: CPoint,
    pub class: FixedPointClass,
    pub residual: f64,
    /// Whether the orbit of the asymptotic value reached this point within
    /// the iteration budget; `None` where that orbit converges too slowly to
    /// decide (parabolic points).
    pub orbit_confirms: Option<bool>,
}

fn class_of_multiplier(m: CPoint, on_boundary: bool, degenerate: bool) -> FixedPointClass {
    if (m - 1.0).norm() <= PARABOLIC_BAND {
        FixedPointClass::Parabolic {
            multiplicity: if degenerate { 3 } else { 2 },
        }
    } else if m.norm() < 1.0 {
        if on_boundary {
            FixedPointClass::AttractingBoundary
        } else {
            FixedPointClass::AttractingInterior
        }
    } else {
        FixedPointClass::Repelling
    }
}

/// Real fixed point of `g` on the segment where `g' ≤ 1`, if any. On that
/// segment `y − a·tan y − b` is non-decreasing, so a bracket decides.
fn real_fixed_point(g: &TanFamily) -> Option<f64> {
    if g.a > 1.0 {
        return None;
    }
    let ymax = g.a.sqrt().acos();
    let h = |y: f64| y - g.a * y.tan() - g.b;
    if ymax == 0.0 {
        return (g.b == 0.0).then_some(0.0);
    }
    let (hl, hr) = (h(-ymax), h(ymax));
    if hl > 0.0 || hr < 0.0 {
        return None;
    }
    bracket_root(h, -ymax, ymax, 1e-16).ok()
}

fn interior_fixed_point(g: &TanFamily, seed: CPoint) -> Result<CPoint> {
    let cfg = RootSolveConfig::default().with_tol(1e-13);
    damped_newton(
        |z| Ok((g.eval(z)? - z, TanFamily::derivative(g, z)? - 1.0)),
        seed,
        &RootSolveConfig {
            max_iter: 200,
            ..cfg
        },
        |z| z.im > 0.0,
    )
}

/// Result of iterating `g` from its asymptotic value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationVerdict {
    pub limit: CPoint,
    pub converged: bool,
    pub iterations: usize,
    /// The orbit settled strictly inside the half-plane.
    pub interior: bool,
}

/// Orbit-based classifier: iterate from `b + ai` until successive iterates
/// agree to relative `1e−14` or the budget runs out; the class is interior
/// iff the final iterate has `Im > 1e−7`.
pub fn classify_by_iteration(g: &TanFamily, budget: usize) -> IterationVerdict {
    let mut z = g.asymptotic_value();
    for k in 0..budget {
        let next = match g.eval(z) {
            Ok(w) => w,
            Err(_) => {
                return IterationVerdict {
                    limit: z,
                    converged: false,
                    iterations: k,
                    interior: false,
                }
            }
        };
        if (next - z).norm() < 1e-14 * z.norm().max(1.0) {
            return IterationVerdict {
                limit: next,
                converged: true,
                iterations: k + 1,
                interior: next.im > 1e-7,
            };
        }
        z = next;
    }
    IterationVerdict {
        limit: z,
        converged: false,
        iterations: budget,
        interior: z.im > 1e-7,
    }
}

/// Locates the attracting or parabolic fixed point of `g` in the closed
/// half-plane and classifies it.
pub fn classify_tan_family(g: &TanFamily) -> Result<FixedPointRecord> {
    if let Some(y) = real_fixed_point(g) {
        let z = c(y, 0.0);
        let m = TanFamily::derivative(g, z)?;
        // the third-order contact needs g'' = 0 as well
        let degenerate = g.second_derivative(z)?.norm() <= PARABOLIC_BAND;
        let class = class_of_multiplier(m, true, degenerate);
        if class != FixedPointClass::Repelling {
            let orbit_confirms = match class {
                FixedPointClass::AttractingBoundary => {
                    let v = classify_by_iteration(g, ITERATION_BUDGET);
                    Some(v.converged && (v.limit - z).norm() < 1e-6)
                }
                _ => None,
            };
            return Ok(FixedPointRecord {
                location: z,
                on_boundary: true,
                multiplier: m,
                class,
                residual: (g.eval(z)? - z).norm(),
                orbit_confirms,
            });
        }
    }
    let seed = g.asymptotic_value();
    let z = match interior_fixed_point(g, seed) {
        Ok(z) => z,
        Err(first) => {
            // retry from wherever the orbit settles
            let v = classify_by_iteration(g, ITERATION_BUDGET);
            if !v.interior {
                return Err(Error::NoConvergence {
                    iterations: v.iterations,
                    last: v.limit,
                    residual: match first {
                        Error::NoConvergence { residual, .. } => residual,
                        _ => f64::NAN,
                    },
                });
            }
            interior_fixed_point(g, v.limit)?
        }
    };
    let m = TanFamily::derivative(g, z)?;
    let class = class_of_multiplier(m, false, false);
    let v = classify_by_iteration(g, ITERATION_BUDGET);
    Ok(FixedPointRecord {
        location: z,
        on_boundary: false,
        multiplier: m,
        class,
        residual: (g.eval(z)? - z).norm(),
        orbit_confirms: Some(v.converged && (v.limit - z).norm() < 1e-6),
    })
}

/// Solves the real 2×2 system `J·d = −F`.
fn solve2(j: [[f64; 2]; 2], f: [f64; 2]) -> Option<[f64; 2]> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det.abs() < 1e-300 {
        return None;
    }
    Some([
        (-f[0] * j[1][1] + f[1] * j[0][1]) / det,
        (-f[1] * j[0][0] + f[0] * j[1][0]) / det,
    ])
}

/// Newton for `Im(τ cos² ζ) = 0`, `Im(ζ − (τ/2) sin 2ζ) = 0` in the real
/// unknowns `(Re ζ, Im ζ)`. For holomorphic `h`, `∂Im h/∂x = Im h'` and
/// `∂Im h/∂y = Re h'`.
fn multiplier_newton(tau: CPoint, mut z: CPoint) -> Result<CPoint> {
    for _ in 0..80 {
        let h1 = tau * z.cos() * z.cos();
        let h2 = z - 0.5 * tau * (2.0 * z).sin();
        let f = [h1.im, h2.im];
        if f[0].abs().max(f[1].abs()) < 1e-15 {
            return Ok(z);
        }
        let d1 = -tau * (2.0 * z).sin();
        let d2 = 1.0 - tau * (2.0 * z).cos();
        let d = solve2([[d1.im, d1.re], [d2.im, d2.re]], f).ok_or(Error::DerivativeVanishes { z })?;
        z += c(d[0], d[1]);
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite { z });
        }
    }
    let h1 = tau * z.cos() * z.cos();
    let h2 = z - 0.5 * tau * (2.0 * z).sin();
    let residual = h1.im.abs().max(h2.im.abs());
    if residual < 1e-13 {
        Ok(z)
    } else {
        Err(Error::NoConvergence {
            iterations: 80,
            last: z,
            residual,
        })
    }
}

/// The unique `(a, b)` for which `a·tan z + b` has an interior fixed point of
/// multiplier `τ`, together with that fixed point.
///
/// Writing `ζ` for the fixed point, `g'(ζ) = τ` and `g(ζ) = ζ` give
/// `a = τ cos² ζ` and `b = ζ − (τ/2) sin 2ζ`, both of which must be real.
/// The solve starts from the closed-form solution at `|τ|` (where `ζ = iy`
/// with `sinh 2y / 2y = 1/|τ|`) and continues in `arg τ`.
pub fn solve_ab_from_multiplier(tau: CPoint) -> Result<(TanFamily, FixedPointRecord)> {
    let r = tau.norm();
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("need 0 < |τ| < 1, got |τ| = {r}")));
    }
    let y = bracket_root(
        |y: f64| (2.0 * y).sinh() / (2.0 * y) - 1.0 / r,
        1e-12,
        50.0,
        1e-16,
    )?;
    let mut z = c(0.0, y);
    // continuation in arg τ; a step is accepted only if Newton converges to
    // a nearby point that stays in the half-plane with a > 0
    let phase = tau.arg();
    let (mut done, mut ds) = (0.0f64, 0.05f64);
    while done < phase.abs() {
        let next = (done + ds).min(phase.abs());
        let t = Complex64::from_polar(r, phase.signum() * next);
        let accepted = multiplier_newton(t, z).ok().filter(|w| {
            w.im > 0.0 && (t * w.cos() * w.cos()).re > 0.0 && (w - z).norm() <= 0.25 * z.im.max(0.05)
        });
        match accepted {
            Some(w) => {
                z = w;
                done = next;
                ds = (ds * 1.5).min(0.05);
            }
            None => {
                ds *= 0.5;
                if ds < 1e-9 {
                    return Err(Error::NoConvergence {
                        iterations: 0,
                        last: z,
                        residual: f64::NAN,
                    });
                }
            }
        }
    }
    let a = (tau * z.cos() * z.cos()).re;
    let b_raw = (z - 0.5 * tau * (2.0 * z).sin()).re;
    let (b, shift) = normalize_b(b_raw);
    let zeta = z - shift;
    if !(a > 0.0) || zeta.im <= 0.0 {
        return Err(Error::OutsideRegion { a, b });
    }
    let g = TanFamily::new(a, b)?;
    if !g.in_attracting_region() {
        return Err(Error::OutsideRegion { a, b });
    }
    let m = TanFamily::derivative(&g, zeta)?;
    let record = FixedPointRecord {
        location: zeta,
        on_boundary: false,
        multiplier: m,
        class: class_of_multiplier(m, false, false),
        residual: (g.eval(zeta)? - zeta).norm(),
        orbit_confirms: None,
    };
    Ok((g, record))
}

/// `h(z) = z − ν·cot z` with `ν = λ/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CotFamily {
    lambda: f64,
}

impl CotFamily {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `ν = λ/2`.
    pub fn nu(&self) -> f64 {
        0.5 * self.lambda
    }

    pub fn eval(&self, z: CPoint) -> Result<CPoint> {
        Ok(z - self.nu() * stable_cot(z)?)
    }

    /// `h'(z) = 1 + ν / sin² z`.
    pub fn derivative(&self, z: CPoint) -> Result<CPoint> {
        stable_cot(z)?;
        Ok(1.0 + self.nu() * csc2(z))
    }

    /// `1/h(x)` on the real line, `sin x / (x sin x − ν cos x)`: it vanishes
    /// exactly at the poles of `h`.
    pub fn reciprocal_real(&self, x: f64) -> f64 {
        x.sin() / (x * x.sin() - self.nu() * x.cos())
    }

    /// Poles of `h` in `[x0, x1]`, located as sign changes of `1/h` through
    /// zero on a grid of `samples` points and refined by bracketing.
    pub fn real_poles(&self, x0: f64, x1: f64, samples: usize) -> Result<Vec<f64>> {
        let r = |x: f64| self.reciprocal_real(x);
        let mut out = Vec::new();
        let h = (x1 - x0) / samples as f64;
        for j in 0..samples {
            let (l, u) = (x0 + j as f64 * h, x0 + (j + 1) as f64 * h);
            let (rl, ru) = (r(l), r(u));
            if rl == 0.0 {
                out.push(l);
                continue;
            }
            if rl.signum() != ru.signum() {
                let x = bracket_root(r, l, u, 1e-15)?;
                // a sign change through infinity (a zero of h) does not vanish
                if r(x).abs() < 1e-8 {
                    out.push(x);
                }
            }
        }
        if let Some(&last) = out.last() {
            if r(x1) == 0.0 && (last - x1).abs() > h {
                out.push(x1);
            }
        }
        Ok(out)
    }

    /// Real fixed points of `h` in `(x0, x1)`: sign changes of
    /// `h(x) − x` that are not poles.
    pub fn real_fixed_points(&self, x0: f64, x1: f64, samples: usize) -> Result<Vec<f64>> {
        let f = |x: f64| match self.eval(c(x, 0.0)) {
            Ok(w) => w.re - x,
            Err(_) => f64::NAN,
        };
        let mut out = Vec::new();
        let h = (x1 - x0) / samples as f64;
        for j in 0..samples {
            let (l, u) = (x0 + j as f64 * h, x0 + (j + 1) as f64 * h);
            let (fl, fu) = (f(l), f(u));
            if !(fl.is_finite() && fu.is_finite()) || fl.signum() == fu.signum() {
                continue;
            }
            let x = bracket_root(f, l, u, 1e-15)?;
            // a sign change across a pole leaves a large residual
            if f(x).abs() < 1e-8 * x.abs().max(1.0) {
                out.push(x);
            }
        }
        Ok(out)
    }
}

impl ComplexMap for CotFamily {
    fn value(&self, z: CPoint) -> Result<CPoint> {
        self.eval(z)
    }
    fn derivative(&self, z: CPoint) -> Result<CPoint> {
        CotFamily::derivative(self, z)
    }
}

/// `z − (λ/2) cot z`.
pub fn eval_cot_family(g: &CotFamily, z: CPoint) -> Result<CPoint> {
    g.eval(z)
}

/// Where the orbits of a half-plane self-map accumulate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "point", rename_all = "kebab-case")]
pub enum WolffLimit {
    Interior(CPoint),
    Boundary(f64),
    Infinity,
}

/// Denjoy–Wolff estimate from a batch of orbits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenjoyWolffEstimate {
    pub limit: WolffLimit,
    /// Hyperbolic distance between consecutive iterates of the first sample,
    /// `steps[k] = d(g^k z, g^{k+1} z)`.
    pub steps: Vec<f64>,
    pub final_step: f64,
    /// Set for non-interior limits whose final step is below
    /// [`ZERO_STEP_THRESHOLD`].
    pub zero_step: bool,
    /// Mean increase of `Im` per iteration over the second half of the first
    /// orbit.
    pub mean_im_increment: f64,
}

/// Iterates every sample `n` times and reports their common limit.
pub fn denjoy_wolff_estimate<M: ComplexMap + ?Sized>(
    g: &M,
    samples: &[CPoint],
    n: usize,
) -> Result<DenjoyWolffEstimate> {
    if samples.is_empty() || n < 2 {
        return Err(Error::Domain("need at least one sample and two iterations".into()));
    }
    let mut limits = Vec::with_capacity(samples.len());
    let mut steps = Vec::new();
    let mut mean_im_increment = 0.0;
    for (s, &z0) in samples.iter().enumerate() {
        if !(z0.im > 0.0) {
            return Err(Error::Domain(format!("sample {z0} is not in the upper half-plane")));
        }
        let mut z = z0;
        let mut prev = z0;
        let mut mid = z0;
        for k in 0..n {
            prev = z;
            z = g.value(z)?;
            if s == 0 {
                steps.push(halfplane_distance(prev, z));
            }
            if k == n / 2 {
                mid = z;
            }
        }
        if s == 0 {
            mean_im_increment = (z.im - mid.im) / (n - 1 - n / 2) as f64;
        }
        let settled = (z - prev).norm() < 1e-10 * z.norm().max(1.0);
        let limit = if settled && z.im > 1e-6 * z.norm().max(1.0) {
            WolffLimit::Interior(z)
        } else if z.norm() > 1e3 && z.norm() > 1.5 * mid.norm() {
            WolffLimit::Infinity
        } else {
            WolffLimit::Boundary(z.re)
        };
        limits.push(limit);
    }
    let first = limits[0];
    for l in &limits[1..] {
        let agree = match (first, *l) {
            (WolffLimit::Interior(p), WolffLimit::Interior(q)) => (p - q).norm() < 1e-8,
            (WolffLimit::Boundary(p), WolffLimit::Boundary(q)) => (p - q).abs() < 1e-2,
            (WolffLimit::Infinity, WolffLimit::Infinity) => true,
            _ => false,
        };
        if !agree {
            return Err(Error::Inconclusive(format!(
                "orbits disagree after {n} iterations: {first:?} vs {l:?}"
            )));
        }
    }
    let final_step = *steps.last().expect("n >= 2");
    let zero_step = !matches!(first, WolffLimit::Interior(_)) && final_step < ZERO_STEP_THRESHOLD;
    Ok(DenjoyWolffEstimate {
        limit: first,
        steps,
        final_step,
        zero_step,
        mean_im_increment,
    })
}

/// One cell of a parameter-plane classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtlasCell {
    pub a: f64,
    pub b: f64,
    /// Fixed-point classifier; `None` if it failed to converge.
    pub record: Option<FixedPointRecord>,
    /// Orbit classifier.
    pub iteration: IterationVerdict,
    /// Sign test `a > 1 or |b| > θ(a)`.
    pub region: bool,
    /// `|b| − θ(a)` for `a ≤ 1`.
    pub margin: Option<f64>,
}

impl AtlasCell {
    pub fn solve_interior(&self) -> bool {
        matches!(
            self.record.map(|r| r.class),
            Some(FixedPointClass::AttractingInterior)
        )
    }

    /// Within `band` of the boundary curve.
    pub fn in_band(&self, band: f64) -> bool {
        matches!(self.margin, Some(m) if m.abs() <= band)
    }
}

/// Classification of `a·tan z + b` over a grid of cell centres in
/// `(a0, a1] × (b0, b1]`: cell `(i, j)` sits at
/// `a = a0 + (i + 1)(a1 − a0)/na`, `b = b0 + (j + 1)(b1 − b0)/nb`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TanAtlas {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub na: usize,
    pub nb: usize,
    /// Row-major in `b` (outer) then `a` (inner).
    pub cells: Vec<AtlasCell>,
}

impl TanAtlas {
    pub fn compute(a_range: (f64, f64), b_range: (f64, f64), na: usize, nb: usize) -> Result<Self> {
        if na == 0 || nb == 0 {
            return Err(Error::InvalidConfig("atlas grid must be non-empty".into()));
        }
        if !(a_range.0 >= 0.0 && a_range.1 > a_range.0) {
            return Err(Error::InvalidConfig(format!("bad a range {a_range:?}")));
        }
        if !(b_range.0 >= -FRAC_PI_2 && b_range.1 <= FRAC_PI_2 && b_range.1 > b_range.0) {
            return Err(Error::InvalidConfig(format!("bad b range {b_range:?}")));
        }
        let cells = (0..na * nb)
            .into_par_iter()
            .map(|idx| {
                let (j, i) = (idx / na, idx % na);
                let a = a_range.0 + (i + 1) as f64 * (a_range.1 - a_range.0) / na as f64;
                let b = b_range.0 + (j + 1) as f64 * (b_range.1 - b_range.0) / nb as f64;
                let g = TanFamily::new(a, b).expect("grid stays in the parameter domain");
                AtlasCell {
                    a,
                    b,
                    record: classify_tan_family(&g).ok(),
                    iteration: classify_by_iteration(&g, ITERATION_BUDGET),
                    region: g.in_attracting_region(),
                    margin: g.region_margin(),
                }
            })
            .collect();
        Ok(Self {
            a_range,
            b_range,
            na,
            nb,
            cells,
        })
    }

    /// CSV with columns `a,b,class,multiplier_re,multiplier_im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,class,multiplier_re,multiplier_im\n");
        for cell in &self.cells {
            match cell.record {
                Some(r) => out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    cell.a,
                    cell.b,
                    r.class,
                    r.multiplier.re,
                    r.multiplier.im
                )),
                None => out.push_str(&format!("{},{},unresolved,,\n", cell.a, cell.b)),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn tan_family_examples() {
        let t = TanFamily::tangent();
        assert_eq!(t.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let g = TanFamily::new(0.7, 0.3).unwrap();
        let far = g.eval(c(0.4, 60.0)).unwrap();
        assert!((far - g.asymptotic_value()).norm() < 1e-15);
        let z = c(0.2, 0.9);
        assert!((g.eval(z + PI).unwrap() - g.eval(z).unwrap()).norm() < 1e-12);
        assert!(matches!(
            g.eval(c(FRAC_PI_2, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
        assert!(TanFamily::new(0.0, 0.0).is_err());
        assert!(TanFamily::new(1.0, -FRAC_PI_2).is_err());
        assert!(TanFamily::new(1.0, FRAC_PI_2).is_ok());
    }

    #[test]
    fn normalization_reduces_mod_pi() {
        for (b, expect) in [(0.3, 0.3), (0.3 + PI, 0.3), (-FRAC_PI_2, FRAC_PI_2), (2.0, 2.0 - PI)] {
            let (nb, shift) = normalize_b(b);
            assert!((nb - expect).abs() < 1e-15, "{b} → {nb}");
            assert!((b - shift - nb).abs() < 1e-15);
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)] // reference digits kept as computed
    fn theta_examples() {
        assert_eq!(boundary_curve_theta(1.0).unwrap(), 0.0);
        assert!((boundary_curve_theta(0.5).unwrap() - (PI / 4.0 - 0.5)).abs() < 1e-15);
        // oracle: arccos(1e-4) − 1e-4·√(1 − 1e-8), evaluated at 40 digits
        let oracle = 1.570_596_326_795_229_95;
        assert!((boundary_curve_theta(1e-8).unwrap() - oracle).abs() < 1e-15);
        assert!(boundary_curve_theta(0.0).is_err());
        assert!(boundary_curve_theta(1.5).is_err());
    }

    #[test]
    fn tangent_is_triple_parabolic() {
        let r = classify_tan_family(&TanFamily::tangent()).unwrap();
        assert_eq!(r.class, FixedPointClass::Parabolic { multiplicity: 3 });
        assert_eq!(r.location, c(0.0, 0.0));
        assert!(r.on_boundary);
    }

    #[test]
    fn interior_case_matches_iteration() {
        let g = TanFamily::new(2.0, 0.0).unwrap();
        let r = classify_tan_family(&g).unwrap();
        assert_eq!(r.class, FixedPointClass::AttractingInterior);
        assert_eq!(r.orbit_confirms, Some(true));
        let v = classify_by_iteration(&g, ITERATION_BUDGET);
        assert!((v.limit - r.location).norm() < 1e-10);
        assert!(r.residual < 1e-12);
        assert!(r.location.re.abs() < 1e-12);
    }

    #[test]
    fn boundary_attracting_case() {
        let g = TanFamily::new(0.5, 0.0).unwrap();
        let r = classify_tan_family(&g).unwrap();
        assert_eq!(r.class, FixedPointClass::AttractingBoundary);
        assert!(r.location.norm() < 1e-15);
        assert!((r.multiplier.re - 0.5).abs() < 1e-15);
        assert_eq!(r.orbit_confirms, Some(true));
    }

    #[test]
    fn boundary_multiplier_formula() {
        for (a, b) in [(0.3, 0.1), (0.6, -0.05), (0.9, 0.0)] {
            let g = TanFamily::new(a, b).unwrap();
            let r = classify_tan_family(&g).unwrap();
            assert!(r.on_boundary);
            let alpha = r.location.re;
            let m = a / alpha.cos().powi(2);
            assert!((r.multiplier.re - m).abs() <= 1e-10);
            let h = 1e-6;
            let fd = (g.eval(c(alpha + h, 0.0)).unwrap() - g.eval(c(alpha - h, 0.0)).unwrap()) / (2.0 * h);
            assert!((fd.re - m).abs() <= 1e-6 * m);
        }
    }

    #[test]
    fn solver_examples() {
        let (g, r) = solve_ab_from_multiplier(c(0.5, 0.0)).unwrap();
        assert!(g.b().abs() < 1e-14);
        assert!((g.a() - 1.366_995_743_31).abs() < 1e-9);
        assert!((r.multiplier - 0.5).norm() < 1e-12);
        let (g, _) = solve_ab_from_multiplier(c(-0.5, 0.0)).unwrap();
        assert!((g.b() - FRAC_PI_2).abs() < 1e-12);
        let (g, _) = solve_ab_from_multiplier(c(0.0, 0.9)).unwrap();
        assert!((g.a() - 0.267_525_44).abs() < 1e-7);
        assert!((g.b() - 0.906_731_83).abs() < 1e-7);
        assert!(solve_ab_from_multiplier(c(1.0, 0.0)).is_err());
        assert!(solve_ab_from_multiplier(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn solver_roundtrips_through_classifier() {
        let g = TanFamily::new(2.0, 0.0).unwrap();
        let tau = classify_tan_family(&g).unwrap().multiplier;
        let (back, _) = solve_ab_from_multiplier(tau).unwrap();
        assert!((back.a() - 2.0).abs() < 1e-8 && back.b().abs() < 1e-8);

        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        for _ in 0..200 {
            let tau = Complex64::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(-PI..PI));
            let (g, r) = solve_ab_from_multiplier(tau).unwrap();
            let c2 = classify_tan_family(&g).unwrap();
            assert_eq!(c2.class, FixedPointClass::AttractingInterior);
            assert!((c2.multiplier - tau).norm() <= 1e-8, "τ = {tau}");
            assert!((c2.location - r.location).norm() <= 1e-8);
        }
    }

    #[test]
    fn solver_approaches_tangent_as_multiplier_tends_to_one() {
        let mut prev = f64::INFINITY;
        for t in [0.9, 0.99, 0.999] {
            let (g, _) = solve_ab_from_multiplier(c(t, 0.0)).unwrap();
            let d = (g.a() - 1.0).abs() + g.b().abs();
            assert!(d < prev);
            prev = d;
        }
        assert!(prev < 1e-2);
    }

    #[test]
    fn real_multiplier_interior_solution_is_unique_on_a_grid() {
        // grid-scan oracle: every (a, b) cell with an interior fixed point of
        // real multiplier in (0, 1) lies on b = 0, and then a is determined
        let tau = 0.5;
        let (g, _) = solve_ab_from_multiplier(c(tau, 0.0)).unwrap();
        let mut hits = Vec::new();
        for i in 1..=80 {
            for j in 1..=80 {
                let a = 4.0 * i as f64 / 80.0;
                let b = -FRAC_PI_2 + PI * j as f64 / 80.0;
                let cell = TanFamily::new(a, b).unwrap();
                if let Ok(r) = classify_tan_family(&cell) {
                    if r.class == FixedPointClass::AttractingInterior
                        && r.multiplier.im.abs() < 0.02
                        && (r.multiplier.re - tau).abs() < 0.05
                    {
                        hits.push((a, b));
                    }
                }
            }
        }
        assert!(!hits.is_empty());
        for (a, b) in hits {
            assert!(b.abs() < 0.1 && (a - g.a()).abs() < 0.2, "({a}, {b})");
        }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_from_ab(&TanFamily::tangent()), c(0.0, 2.0));
        assert_eq!(mu_from_ab(&TanFamily::new(0.5, 0.25).unwrap()), c(0.5, 1.0));
    }

    #[test]
    fn cot_family_structure() {
        let h = CotFamily::new(1.0).unwrap();
        assert!((h.eval(c(FRAC_PI_2, 0.0)).unwrap() - c(FRAC_PI_2, 0.0)).norm() < 1e-15);
        assert!((h.derivative(c(FRAC_PI_2, 0.0)).unwrap() - c(1.5, 0.0)).norm() < 1e-15);
        assert!(matches!(h.eval(c(PI, 0.0)), Err(Error::PoleProximity { .. })));
        let mut rng = rand::rngs::StdRng::seed_from_u64(6);
        for _ in 0..100 {
            let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(0.01..5.0));
            let d = h.eval(z + PI).unwrap() - h.eval(z).unwrap() - PI;
            assert!(d.norm() < 1e-12);
        }
        let poles = h.real_poles(-0.5, 2.0 * PI + 0.5, 4000).unwrap();
        assert_eq!(poles.len(), 3);
        for (p, k) in poles.iter().zip(0..) {
            assert!((p - k as f64 * PI).abs() < 1e-10);
        }
        let fixed = CotFamily::new(2.0).unwrap().real_fixed_points(1e-3, 2.0 * PI - 1e-3, 4000).unwrap();
        assert_eq!(fixed.len(), 2);
        assert!((fixed[0] - FRAC_PI_2).abs() < 1e-10 && (fixed[1] - 1.5 * PI).abs() < 1e-10);
    }

    #[test]
    fn half_plane_preservation() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(10);
        for _ in 0..1000 {
            let z = c(rng.gen_range(-20.0..20.0), rng.gen_range(1e-6..30.0));
            let g = TanFamily::new(rng.gen_range(0.01..4.0), rng.gen_range(-1.5..1.5)).unwrap();
            assert!(g.eval(z).unwrap().im > 0.0);
            let h = CotFamily::new(rng.gen_range(0.01..10.0)).unwrap();
            assert!(h.eval(z).unwrap().im > 0.0);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(12);
        for _ in 0..1000 {
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..25.0));
            let g = TanFamily::new(rng.gen_range(0.1..3.0), rng.gen_range(-1.5..1.5)).unwrap();
            let h = CotFamily::new(rng.gen_range(0.1..5.0)).unwrap();
            for m in [&g as &dyn ComplexMap, &h as &dyn ComplexMap] {
                let d = m.derivative(z).unwrap();
                let fd = crate::numerics::central_difference(|w| m.value(w), z, 1e-6).unwrap();
                assert!((d - fd).norm() <= 1e-6 * d.norm().max(1.0), "{d} vs {fd} at {z}");
            }
        }
    }

    #[test]
    fn denjoy_wolff_examples() {
        let samples = [c(0.3, 0.5), c(-0.2, 1.0), c(0.0, 2.0)];
        let g = TanFamily::new(2.0, 0.0).unwrap();
        let est = denjoy_wolff_estimate(&g, &samples, 500).unwrap();
        let r = classify_tan_family(&g).unwrap();
        match est.limit {
            WolffLimit::Interior(p) => assert!((p - r.location).norm() < 1e-9),
            other => panic!("expected interior limit, got {other:?}"),
        }
        let est = denjoy_wolff_estimate(&TanFamily::tangent(), &samples, 10_000).unwrap();
        match est.limit {
            WolffLimit::Boundary(x) => assert!(x.abs() < 1e-2),
            other => panic!("expected boundary limit, got {other:?}"),
        }
        assert!(est.zero_step);
        let h = CotFamily::new(1.0).unwrap();
        let est = denjoy_wolff_estimate(&h, &samples, 10_000).unwrap();
        assert_eq!(est.limit, WolffLimit::Infinity);
        assert!((est.mean_im_increment - 0.5).abs() < 1e-3);
    }

    #[test]
    fn atlas_csv_shape() {
        let atlas = TanAtlas::compute((0.0, 3.0), (-FRAC_PI_2, FRAC_PI_2), 6, 4).unwrap();
        let csv = atlas.to_csv();
        assert_eq!(csv.lines().count(), 25);
        assert!(csv.starts_with("a,b,class,multiplier_re,multiplier_im"));
    }
}
