//! Complex special functions, root finding and orbit utilities shared by the
//! other modules.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the complex plane.
pub type CPoint = Complex64;

/// Distance to a pole below which `tan`/`cot` refuse to evaluate.
pub const POLE_TOL: f64 = 1e-9;
/// Modulus beyond which an orbit is considered escaped.
pub const BAILOUT: f64 = 1e10;
/// Default central finite-difference step.
pub const FD_STEP: f64 = 1e-6;

/// Above this imaginary part `tan` and `cot` switch to the exponentially
/// small correction form.
const LARGE_IM: f64 = 20.0;

#[inline]
pub fn c(re: f64, im: f64) -> CPoint {
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSolveConfig {
    pub tol_residual: f64,
    pub max_iter: usize,
    pub fd_step: f64,
}

impl Default for RootSolveConfig {
    fn default() -> Self {
        Self {
            tol_residual: 1e-13,
            max_iter: 100,
            fd_step: FD_STEP,
        }
    }
}

impl RootSolveConfig {
    pub fn new(tol_residual: f64, max_iter: usize, fd_step: f64) -> Result<Self> {
        let cfg = Self {
            tol_residual,
            max_iter,
            fd_step,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol_residual > 0.0 && self.tol_residual < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tol_residual must lie in (0, 1), got {}",
                self.tol_residual
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be positive".into()));
        }
        if !(self.fd_step > 0.0 && self.fd_step < 1e-3) {
            return Err(Error::InvalidConfig(format!(
                "fd_step must lie in (0, 1e-3), got {}",
                self.fd_step
            )));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol_residual = tol;
        self
    }
}

/// A holomorphic (or meromorphic) map of a plane domain with its analytic
/// derivative.
pub trait ComplexMap {
    fn value(&self, z: CPoint) -> Result<CPoint>;

    fn derivative(&self, z: CPoint) -> Result<CPoint>;

    fn value_and_derivative(&self, z: CPoint) -> Result<(CPoint, CPoint)> {
        Ok((self.value(z)?, self.derivative(z)?))
    }
}

impl<T: ComplexMap + ?Sized> ComplexMap for &T {
    fn value(&self, z: CPoint) -> Result<CPoint> {
        (**self).value(z)
    }
    fn derivative(&self, z: CPoint) -> Result<CPoint> {
        (**self).derivative(z)
    }
    fn value_and_derivative(&self, z: CPoint) -> Result<(CPoint, CPoint)> {
        (**self).value_and_derivative(z)
    }
}

/// Wraps a plain closure; the derivative is a central finite difference.
pub struct FnMap<F>(pub F);

impl<F: Fn(CPoint) -> CPoint> ComplexMap for FnMap<F> {
    fn value(&self, z: CPoint) -> Result<CPoint> {
        finite(z, (self.0)(z))
    }
    fn derivative(&self, z: CPoint) -> Result<CPoint> {
        central_difference(|w| Ok((self.0)(w)), z, FD_STEP)
    }
}

/// Wraps a closure together with its analytic derivative.
pub struct AnalyticFn<F, G> {
    pub f: F,
    pub df: G,
}

impl<F, G> ComplexMap for AnalyticFn<F, G>
where
    F: Fn(CPoint) -> CPoint,
    G: Fn(CPoint) -> CPoint,
{
    fn value(&self, z: CPoint) -> Result<CPoint> {
        finite(z, (self.f)(z))
    }
    fn derivative(&self, z: CPoint) -> Result<CPoint> {
        finite(z, (self.df)(z))
    }
}

#[inline]
pub(crate) fn finite(z: CPoint, w: CPoint) -> Result<CPoint> {
    if w.re.is_finite() && w.im.is_finite() {
        Ok(w)
    } else {
        Err(Error::NonFinite { z })
    }
}

/// Distance from `z` to the nearest point of the lattice `offset + kπ`.
fn lattice_distance(z: CPoint, offset: f64) -> f64 {
    let k = ((z.re - offset) / PI).round();
    (z - c(offset + k * PI, 0.0)).norm()
}

/// `tan z` without overflow for large `|Im z|`.
pub fn stable_tan(z: CPoint) -> Result<CPoint> {
    stable_tan_with_tol(z, POLE_TOL)
}

pub fn stable_tan_with_tol(z: CPoint, pole_tol: f64) -> Result<CPoint> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite { z });
    }
    let distance = lattice_distance(z, FRAC_PI_2);
    if distance < pole_tol {
        return Err(Error::PoleProximity { z, distance });
    }
    Ok(tan_unchecked(z))
}

pub(crate) fn tan_unchecked(z: CPoint) -> CPoint {
    let (x, y) = (z.re, z.im);
    if y > LARGE_IM {
        // tan z = i(1 - w)/(1 + w), w = e^{2iz}
        let w = Complex64::from_polar((-2.0 * y).exp(), 2.0 * x);
        c(0.0, 1.0) * (1.0 - 2.0 * w / (1.0 + w))
    } else if y < -LARGE_IM {
        let w = Complex64::from_polar((2.0 * y).exp(), -2.0 * x);
        c(0.0, -1.0) * (1.0 - 2.0 * w / (1.0 + w))
    } else {
        let (sx, cx) = x.sin_cos();
        let (sh, ch) = (y.sinh(), y.cosh());
        let den = cx * cx + sh * sh;
        c(sx * cx / den, sh * ch / den)
    }
}

/// `cot z` without overflow for large `|Im z|`.
pub fn stable_cot(z: CPoint) -> Result<CPoint> {
    stable_cot_with_tol(z, POLE_TOL)
}

pub fn stable_cot_with_tol(z: CPoint, pole_tol: f64) -> Result<CPoint> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite { z });
    }
    let distance = lattice_distance(z, 0.0);
    if distance < pole_tol {
        return Err(Error::PoleProximity { z, distance });
    }
    Ok(cot_unchecked(z))
}

pub(crate) fn cot_unchecked(z: CPoint) -> CPoint {
    let (x, y) = (z.re, z.im);
    if y > LARGE_IM {
        // cot z = -i(1 + w)/(1 - w), w = e^{2iz}
        let w = Complex64::from_polar((-2.0 * y).exp(), 2.0 * x);
        c(0.0, -1.0) * (1.0 + 2.0 * w / (1.0 - w))
    } else if y < -LARGE_IM {
        let w = Complex64::from_polar((2.0 * y).exp(), -2.0 * x);
        c(0.0, 1.0) * (1.0 + 2.0 * w / (1.0 - w))
    } else {
        let (sx, cx) = x.sin_cos();
        let (sh, ch) = (y.sinh(), y.cosh());
        let den = sx * sx + sh * sh;
        c(sx * cx / den, -sh * ch / den)
    }
}

/// Central difference `(f(z+h) - f(z-h)) / 2h` along the real direction.
pub fn central_difference<F>(f: F, z: CPoint, h: f64) -> Result<CPoint>
where
    F: Fn(CPoint) -> Result<CPoint>,
{
    let fp = f(z + h)?;
    let fm = f(z - h)?;
    finite(z, (fp - fm) / (2.0 * h))
}

/// How `newton_holomorphic` obtains the derivative.
pub enum Derivative<'a> {
    Analytic(&'a dyn Fn(CPoint) -> Result<CPoint>),
    FiniteDifference,
}

/// Newton's method for a holomorphic `f`. On success the returned point has
/// `|f(z)| <= cfg.tol_residual`.
pub fn newton_holomorphic<F>(
    f: F,
    df: Derivative<'_>,
    z0: CPoint,
    cfg: &RootSolveConfig,
) -> Result<CPoint>
where
    F: Fn(CPoint) -> Result<CPoint>,
{
    cfg.validate()?;
    let mut z = z0;
    let mut fz = f(z)?;
    for _ in 0..cfg.max_iter {
        if fz.norm() <= cfg.tol_residual {
            return Ok(z);
        }
        let d = match &df {
            Derivative::Analytic(g) => g(z)?,
            Derivative::FiniteDifference => central_difference(&f, z, cfg.fd_step)?,
        };
        if d.norm() < 1e-300 || d.norm() < fz.norm() * 1e-15 {
            return Err(Error::DerivativeVanishes { z });
        }
        z -= fz / d;
        fz = f(z)?;
    }
    if fz.norm() <= cfg.tol_residual {
        return Ok(z);
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        last: z,
        residual: fz.norm(),
    })
}

/// Newton's method with step halving: a step is accepted only if it lands in
/// `admissible` and does not increase the residual. `fd` returns value and
/// derivative.
pub fn damped_newton<F, A>(fd: F, z0: CPoint, cfg: &RootSolveConfig, admissible: A) -> Result<CPoint>
where
    F: Fn(CPoint) -> Result<(CPoint, CPoint)>,
    A: Fn(CPoint) -> bool,
{
    let mut z = z0;
    let (mut fz, mut dz) = fd(z)?;
    for _ in 0..cfg.max_iter {
        if fz.norm() <= cfg.tol_residual {
            return Ok(z);
        }
        if dz.norm() < 1e-300 {
            return Err(Error::DerivativeVanishes { z });
        }
        let step = fz / dz;
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-6 {
            let cand = z - step * t;
            if admissible(cand) {
                if let Ok((fc, dc)) = fd(cand) {
                    if fc.norm() < fz.norm() {
                        accepted = Some((cand, fc, dc));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((cand, fc, dc)) => {
                z = cand;
                fz = fc;
                dz = dc;
            }
            None => break,
        }
    }
    if fz.norm() <= cfg.tol_residual {
        return Ok(z);
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        last: z,
        residual: fz.norm(),
    })
}

/// Root of a real function on a sign-changing bracket (Illinois variant of
/// regula falsi, falling back to bisection when it stalls).
pub fn bracket_root<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Domain(format!(
            "no sign change on [{lo}, {hi}] (f = {fa}, {fb})"
        )));
    }
    let mut side = 0i8;
    for i in 0..400 {
        if (b - a).abs() <= xtol {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        // every fourth step bisects, which bounds the worst case
        if i % 4 == 3 || !x.is_finite() || x <= a.min(b) || x >= a.max(b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fb.signum() {
            b = x;
            fb = fx;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}

/// Result of iterating a map.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub points: Vec<CPoint>,
    pub escaped: bool,
}

impl Orbit {
    pub fn last(&self) -> CPoint {
        *self.points.last().expect("orbit contains its seed")
    }
}

/// `(z0, f(z0), ..., f^n(z0))`, stopped early (with `escaped` set) once the
/// modulus exceeds [`BAILOUT`].
pub fn orbit<M: ComplexMap + ?Sized>(map: &M, z0: CPoint, n: usize) -> Result<Orbit> {
    orbit_with_bailout(map, z0, n, BAILOUT)
}

pub fn orbit_with_bailout<M: ComplexMap + ?Sized>(
    map: &M,
    z0: CPoint,
    n: usize,
    bailout: f64,
) -> Result<Orbit> {
    let mut points = Vec::with_capacity(n + 1);
    points.push(z0);
    let mut z = z0;
    for step in 1..=n {
        z = match map.value(z) {
            Ok(w) => w,
            Err(Error::PoleProximity { .. }) => return Err(Error::PoleHit { step, z }),
            Err(Error::NonFinite { .. }) => {
                return Ok(Orbit {
                    points,
                    escaped: true,
                })
            }
            Err(e) => return Err(e),
        };
        if !(z.norm() <= bailout) {
            points.push(z);
            return Ok(Orbit {
                points,
                escaped: true,
            });
        }
        points.push(z);
    }
    Ok(Orbit {
        points,
        escaped: false,
    })
}

/// Taylor coefficients `c_0..c_{n-1}` of `f` at `center`, from the discrete
/// Cauchy integral over `samples` equally spaced points of the circle of
/// radius `radius`.
pub fn taylor_coefficients<F>(
    f: F,
    center: CPoint,
    radius: f64,
    samples: usize,
    n: usize,
) -> Result<Vec<CPoint>>
where
    F: Fn(CPoint) -> Result<CPoint>,
{
    let values: Vec<CPoint> = (0..samples)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / samples as f64;
            f(center + Complex64::from_polar(radius, t))
        })
        .collect::<Result<_>>()?;
    Ok((0..n)
        .map(|k| {
            let sum: CPoint = values
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let t = 2.0 * PI * (j * k) as f64 / samples as f64;
                    v * Complex64::from_polar(1.0, -t)
                })
                .sum();
            sum / (samples as f64 * radius.powi(k as i32))
        })
        .collect())
}

/// Winding number of `f` around 0 along the closed polygon `vertices`.
///
/// Edges are refined adaptively until the argument of `f` turns by less than
/// π/8 between samples. Fails with `WindowBoundaryZero` if `|f|` drops below
/// `min_modulus` on the contour.
pub fn winding_number<F>(f: F, vertices: &[CPoint], min_modulus: f64) -> Result<i64>
where
    F: Fn(CPoint) -> Result<CPoint>,
{
    let mut total = 0.0;
    let n = vertices.len();
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        let fa = check_contour_value(&f, a, min_modulus)?;
        let fb = check_contour_value(&f, b, min_modulus)?;
        total += edge_turn(&f, a, fa, b, fb, min_modulus, 0)?;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn check_contour_value<F>(f: &F, z: CPoint, min_modulus: f64) -> Result<CPoint>
where
    F: Fn(CPoint) -> Result<CPoint>,
{
    let w = f(z)?;
    if w.norm() < min_modulus {
        return Err(Error::WindowBoundaryZero {
            z,
            distance: w.norm(),
        });
    }
    Ok(w)
}

fn edge_turn<F>(
    f: &F,
    a: CPoint,
    fa: CPoint,
    b: CPoint,
    fb: CPoint,
    min_modulus: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(CPoint) -> Result<CPoint>,
{
    let turn = (fb / fa).arg();
    if depth > 48 {
        return Err(Error::Inconclusive(format!(
            "argument principle did not resolve the edge near {a}"
        )));
    }
    let m = 0.5 * (a + b);
    let fm = check_contour_value(f, m, min_modulus)?;
    // A zero close to the segment can turn the argument by a full 2π
    // between samples, so the samples must also be close relative to
    // their modulus.
    if depth >= 4 && turn.abs() < PI / 8.0 {
        let floor = 0.5 * fa.norm().min(fb.norm()).min(fm.norm());
        if (fm - fa).norm() <= floor && (fb - fm).norm() <= floor {
            return Ok(turn);
        }
    }
    Ok(edge_turn(f, a, fa, m, fm, min_modulus, depth + 1)?
        + edge_turn(f, m, fm, b, fb, min_modulus, depth + 1)?)
}

/// Hyperbolic distance in the unit disc (curvature −1).
pub fn disc_distance(z: CPoint, w: CPoint) -> f64 {
    let q = (z - w).norm() / (1.0 - w.conj() * z).norm();
    2.0 * q.atanh()
}

/// Hyperbolic distance in the upper half-plane (curvature −1).
pub fn halfplane_distance(z: CPoint, w: CPoint) -> f64 {
    let q = (z - w).norm() / (2.0 * (z.im * w.im).sqrt());
    2.0 * q.asinh()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn power_law_exponent(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len()) as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Axis-parallel rectangle `[re0, re1] × [im0, im1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl Window {
    pub fn new(re0: f64, re1: f64, im0: f64, im1: f64) -> Result<Self> {
        let w = Self { re0, re1, im0, im1 };
        if ![re0, re1, im0, im1].iter().all(|v| v.is_finite()) || !(re1 > re0 && im1 > im0) {
            return Err(Error::InvalidConfig(format!(
                "window needs re0 < re1 and im0 < im1, got {re0}:{re1}:{im0}:{im1}"
            )));
        }
        Ok(w)
    }

    /// The square of half-width `r` about `center`.
    pub fn around(center: CPoint, r: f64) -> Result<Self> {
        Self::new(center.re - r, center.re + r, center.im - r, center.im + r)
    }

    pub fn width(&self) -> f64 {
        self.re1 - self.re0
    }

    pub fn height(&self) -> f64 {
        self.im1 - self.im0
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> CPoint {
        c(0.5 * (self.re0 + self.re1), 0.5 * (self.im0 + self.im1))
    }

    /// Scales about the centre by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let m = self.center();
        let (hw, hh) = (0.5 * factor * self.width(), 0.5 * factor * self.height());
        Self {
            re0: m.re - hw,
            re1: m.re + hw,
            im0: m.im - hh,
            im1: m.im + hh,
        }
    }

    pub fn contains(&self, z: CPoint) -> bool {
        z.re >= self.re0 && z.re <= self.re1 && z.im >= self.im0 && z.im <= self.im1
    }

    /// Distance from an interior point to the boundary.
    pub fn edge_distance(&self, z: CPoint) -> f64 {
        (z.re - self.re0)
            .min(self.re1 - z.re)
            .min(z.im - self.im0)
            .min(self.im1 - z.im)
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> [CPoint; 4] {
        [
            c(self.re0, self.im0),
            c(self.re1, self.im0),
            c(self.re1, self.im1),
            c(self.re0, self.im1),
        ]
    }

    /// Four sub-rectangles, split at fraction `t` of each side.
    fn split(&self, t: f64) -> [Window; 4] {
        let xm = self.re0 + t * self.width();
        let ym = self.im0 + t * self.height();
        [
            Window { re0: self.re0, re1: xm, im0: self.im0, im1: ym },
            Window { re0: xm, re1: self.re1, im0: self.im0, im1: ym },
            Window { re0: self.re0, re1: xm, im0: ym, im1: self.im1 },
            Window { re0: xm, re1: self.re1, im0: ym, im1: self.im1 },
        ]
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    /// Parses `re0:re1:im0:im1`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidConfig(format!(
                "window must be re0:re1:im0:im1, got {s:?}"
            )));
        }
        let v = parts
            .iter()
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidConfig(format!("bad window number {p:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        Self::new(v[0], v[1], v[2], v[3])
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}:{}", self.re0, self.re1, self.im0, self.im1)
    }
}

/// A zero of a holomorphic function with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub location: CPoint,
    pub multiplicity: u32,
}

/// All zeros of `f` in `window`, by argument-principle counting on
/// recursively split rectangles and Newton polishing of isolated zeros.
///
/// Zeros within `edge_tol` of the outer boundary are reported as
/// `WindowBoundaryZero`, found by Newton runs started from the local minima
/// of `|f|` along the edges.
pub fn find_zeros<F>(f: F, window: &Window, edge_tol: f64) -> Result<Vec<Zero>>
where
    F: Fn(CPoint) -> Result<CPoint>,
{
    let cfg = RootSolveConfig {
        tol_residual: 1e-13,
        max_iter: 100,
        fd_step: FD_STEP,
    };
    let newton = |z0: CPoint| -> Option<CPoint> {
        let mut z = z0;
        for _ in 0..cfg.max_iter {
            let fz = f(z).ok()?;
            let d = central_difference(&f, z, cfg.fd_step * z.norm().max(1.0)).ok()?;
            if d.norm() == 0.0 {
                return None;
            }
            let step = fz / d;
            z -= step;
            if step.norm() <= 1e-15 * z.norm().max(1.0) {
                break;
            }
        }
        let r = f(z).ok()?;
        (r.norm() <= cfg.tol_residual || r.norm() < 1e-10 * f(z0).ok()?.norm()).then_some(z)
    };

    // boundary scan
    let corners = window.corners();
    let per_edge = 512;
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        let vals: Vec<(CPoint, f64)> = (0..=per_edge)
            .map(|k| {
                let z = a + (b - a) * (k as f64 / per_edge as f64);
                Ok((z, f(z)?.norm()))
            })
            .collect::<Result<_>>()?;
        for k in 1..per_edge {
            if vals[k].1 <= vals[k - 1].1 && vals[k].1 <= vals[k + 1].1 {
                if let Some(z) = newton(vals[k].0) {
                    let d = if window.contains(z) {
                        window.edge_distance(z)
                    } else {
                        -1.0
                    };
                    if d >= 0.0 && d < edge_tol || (d < 0.0 && edge_gap(window, z) < edge_tol) {
                        return Err(Error::WindowBoundaryZero { z, distance: d.abs() });
                    }
                }
            }
        }
    }

    let count = |w: &Window| winding_number(&f, &w.corners(), 0.0);
    let total = count(window)?;
    let mut out = Vec::new();
    let mut stack = vec![(*window, total)];
    let min_size = window.diameter() * 1e-12;
    while let Some((cell, n)) = stack.pop() {
        if n <= 0 {
            continue;
        }
        if n == 1 || cell.diameter() < window.diameter() * 1e-3 {
            if let Some(z) = newton(cell.center()) {
                let grown = cell.scaled(1.0 + 1e-9);
                if grown.contains(z) {
                    out.push(Zero {
                        location: z,
                        multiplicity: n as u32,
                    });
                    continue;
                }
            }
        }
        if cell.diameter() < min_size {
            out.push(Zero {
                location: cell.center(),
                multiplicity: n as u32,
            });
            continue;
        }
        let mut done = false;
        for t in [0.5 + 0.0123, 0.5 - 0.0217, 0.5 + 0.0311, 0.5 - 0.0419] {
            let parts = cell.split(t);
            let counts: Result<Vec<i64>> = parts.iter().map(&count).collect();
            if let Ok(counts) = counts {
                if counts.iter().sum::<i64>() == n {
                    for (p, k) in parts.iter().zip(counts) {
                        stack.push((*p, k));
                    }
                    done = true;
                    break;
                }
            }
        }
        if !done {
            return Err(Error::Inconclusive(format!(
                "could not split the cell around {} holding {n} zeros",
                cell.center()
            )));
        }
    }
    out.sort_by(|a, b| {
        a.location
            .re
            .partial_cmp(&b.location.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.location.im.partial_cmp(&b.location.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(out)
}

fn edge_gap(window: &Window, z: CPoint) -> f64 {
    let dx = (window.re0 - z.re).max(z.re - window.re1).max(0.0);
    let dy = (window.im0 - z.im).max(z.im - window.im1).max(0.0);
    dx.hypot(dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn rel(a: CPoint, b: CPoint) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn tan_exact_values() {
        assert_eq!(stable_tan(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((stable_tan(c(PI / 4.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn tan_far_up_the_imaginary_axis() {
        // tan(40i) = i·tanh(40) = i(1 - 2e^{-80} + ...)
        let t = stable_tan(c(0.0, 40.0)).unwrap();
        assert_eq!(t.re, 0.0);
        assert!((t.im - 1.0).abs() < 1e-16);
        // far below: no overflow, limit -i
        let t = stable_tan(c(1.3, -700.0)).unwrap();
        assert!((t - c(0.0, -1.0)).norm() < 1e-16);
    }

    #[test]
    #[allow(clippy::excessive_precision)] // reference digits kept as computed
    fn tan_against_high_precision_values() {
        // reference values computed with 40-digit arithmetic
        let cases = [
            (c(0.3, 0.7), c(0.189_717_091_519_086_92, 0.639_835_930_263_179_97)),
            (c(1.5, 0.01), c(13.825_115_737_640_466, 1.959_472_313_038_875_4)),
            (c(-2.0, 25.0), c(2.919_365_395_527_760_4e-22, 1.0)),
            (c(0.1, 19.9), c(2.061_771_085_808_334_6e-18, 0.999_999_999_999_999_99)),
            (c(0.7, -33.0), c(4.277_880_659_946_362e-29, -1.0)),
        ];
        for (z, expected) in cases {
            let t = stable_tan(z).unwrap();
            assert!(
                (t - expected).norm() <= 1e-12 * expected.norm(),
                "tan({z}) = {t}, expected {expected}"
            );
        }
    }

    #[test]
    fn tan_and_cot_reject_poles() {
        assert!(matches!(
            stable_tan(c(FRAC_PI_2, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
        assert!(matches!(
            stable_cot(c(3.0 * PI, 0.0)),
            Err(Error::PoleProximity { .. })
        ));
        assert!(stable_cot(c(3.0 * PI, 1e-6)).is_ok());
    }

    #[test]
    fn tan_is_pi_periodic_and_cot_is_its_reciprocal() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(-50.0..50.0));
            let (Ok(a), Ok(b)) = (stable_tan(z), stable_tan(z + PI)) else {
                continue;
            };
            if (z.re / PI - 0.5).rem_euclid(1.0).min(1.0 - (z.re / PI - 0.5).rem_euclid(1.0)) < 1e-3
                && z.im.abs() < 1e-3
            {
                continue;
            }
            assert!(rel(b, a) < 1e-12, "{z}: {a} vs {b}");
            let ct = stable_cot(z).unwrap();
            assert!((ct * a - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn tan_matches_sin_over_cos_in_the_moderate_strip() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..500 {
            let z = c(rng.gen_range(-6.0..6.0), rng.gen_range(-8.0..8.0));
            let reference = z.sin() / z.cos();
            if reference.norm() > 1e6 {
                continue;
            }
            assert!(rel(stable_tan(z).unwrap(), reference) < 1e-12);
        }
    }

    #[test]
    fn newton_examples() {
        let cfg = RootSolveConfig::default();
        let dsq = |z: CPoint| Ok(2.0 * z);
        let r = newton_holomorphic(
            |z| Ok(z * z - 1.0),
            Derivative::Analytic(&dsq),
            c(0.5, 0.0),
            &cfg,
        )
        .unwrap();
        assert!((r - c(1.0, 0.0)).norm() < 1e-12);

        // λe^z - z with λ = 0.5e^{-0.5} has the fixed point τ = 0.5
        let lambda = 0.5 * (-0.5f64).exp();
        let r = newton_holomorphic(
            |z| Ok(lambda * z.exp() - z),
            Derivative::FiniteDifference,
            c(0.0, 0.0),
            &cfg,
        )
        .unwrap();
        assert!((r - c(0.5, 0.0)).norm() < 1e-10);
        assert!((lambda * r.exp() - r).norm() <= cfg.tol_residual);

        let one = |_: CPoint| Ok(c(1.0, 0.0));
        let r = newton_holomorphic(Ok, Derivative::Analytic(&one), c(1.0, 0.0), &cfg).unwrap();
        assert_eq!(r, c(0.0, 0.0));
    }

    #[test]
    fn newton_reports_vanishing_derivative_and_divergence() {
        let cfg = RootSolveConfig::default();
        let zero = |_: CPoint| Ok(c(0.0, 0.0));
        assert!(matches!(
            newton_holomorphic(|z| Ok(z + 1.0), Derivative::Analytic(&zero), c(0.0, 0.0), &cfg),
            Err(Error::DerivativeVanishes { .. })
        ));
        let cfg = RootSolveConfig::new(1e-12, 5, 1e-6).unwrap();
        // z^2 + 1 from a real seed never leaves the real axis
        assert!(matches!(
            newton_holomorphic(|z| Ok(z * z + 1.0), Derivative::FiniteDifference, c(0.3, 0.0), &cfg),
            Err(Error::NoConvergence { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(RootSolveConfig::new(1e-12, 10, 1e-6).is_ok());
        assert!(RootSolveConfig::new(2.0, 10, 1e-6).is_err());
        assert!(RootSolveConfig::new(1e-12, 0, 1e-6).is_err());
        assert!(RootSolveConfig::new(1e-12, 10, 1e-2).is_err());
    }

    #[test]
    fn orbit_examples() {
        let id = FnMap(|z: CPoint| z);
        let o = orbit(&id, c(1.0, 0.0), 3).unwrap();
        assert_eq!(o.points, vec![c(1.0, 0.0); 4]);
        let half = FnMap(|z: CPoint| z / 2.0);
        let o = orbit(&half, c(1.0, 0.0), 2).unwrap();
        assert_eq!(o.points, vec![c(1.0, 0.0), c(0.5, 0.0), c(0.25, 0.0)]);
        let lambda = 0.5 * (-0.5f64).exp();
        let e = FnMap(move |z: CPoint| lambda * z.exp());
        let o = orbit(&e, c(0.0, 0.0), 200).unwrap();
        assert!((o.last() - c(0.5, 0.0)).norm() < 1e-12);
        let sq = FnMap(|z: CPoint| z * z);
        let o = orbit(&sq, c(2.0, 0.0), 100).unwrap();
        assert!(o.escaped);
        assert!(o.points.len() < 10);
    }

    #[test]
    fn orbit_reports_pole_hits() {
        struct Tan;
        impl ComplexMap for Tan {
            fn value(&self, z: CPoint) -> Result<CPoint> {
                stable_tan(z)
            }
            fn derivative(&self, z: CPoint) -> Result<CPoint> {
                let t = stable_tan(z)?;
                Ok(1.0 + t * t)
            }
        }
        // tan(atan(π/2)) = π/2 is a pole of the second step
        let z0 = c(FRAC_PI_2.atan(), 0.0);
        assert!(matches!(orbit(&Tan, z0, 3), Err(Error::PoleHit { step: 2, .. })));
    }

    #[test]
    fn bracket_root_finds_simple_roots() {
        let r = bracket_root(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(bracket_root(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn cauchy_coefficients_of_exp() {
        let co = taylor_coefficients(|z| Ok(z.exp()), c(0.0, 0.0), 1.0, 64, 6).unwrap();
        let mut fact = 1.0;
        for (k, ck) in co.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            assert!((ck - 1.0 / fact).norm() < 1e-14);
        }
    }

    #[test]
    fn winding_counts_zeros() {
        let square = [c(-2.0, -2.0), c(2.0, -2.0), c(2.0, 2.0), c(-2.0, 2.0)];
        let w = winding_number(|z| Ok((z - 0.5) * (z + c(0.0, 1.0)).powi(2)), &square, 1e-12).unwrap();
        assert_eq!(w, 3);
        let w = winding_number(|z| Ok(z.exp()), &square, 1e-12).unwrap();
        assert_eq!(w, 0);
        assert!(matches!(
            winding_number(|z| Ok(z - 2.0), &square, 1e-12),
            Err(Error::WindowBoundaryZero { .. })
        ));
    }

    #[test]
    fn hyperbolic_distances() {
        let a = 0.5;
        assert!((disc_distance(c(0.0, 0.0), c(a, 0.0)) - ((1.0 + a) / (1.0 - a)).ln()).abs() < 1e-15);
        assert!((halfplane_distance(c(0.0, 1.0), c(0.0, 2.0)) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn power_law_fit() {
        let xs: Vec<f64> = (1..50).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-1.5)).collect();
        assert!((power_law_exponent(&xs, &ys) + 1.5).abs() < 1e-12);
    }

    #[test]
    fn window_parse_and_display_round_trip() {
        let w: Window = "-2:1.5:-0.25:3".parse().unwrap();
        assert_eq!(w, Window::new(-2.0, 1.5, -0.25, 3.0).unwrap());
        assert_eq!(w.to_string().parse::<Window>().unwrap(), w);
        assert!("1:0:0:1".parse::<Window>().is_err());
        assert!("0:1:0".parse::<Window>().is_err());
        assert!("0:1:0:x".parse::<Window>().is_err());
        assert!(Window::new(0.0, f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn split_cells_tile_the_window() {
        let w = Window::new(-1.0, 3.0, 0.0, 2.0).unwrap();
        let area: f64 = w.split(0.47).iter().map(|p| p.width() * p.height()).sum();
        assert!((area - w.width() * w.height()).abs() < 1e-12);
    }

    #[test]
    fn zeros_of_polynomials() {
        // roots of unity of order 5
        let w = Window::new(-1.7, 1.6, -1.55, 1.45).unwrap();
        let z = find_zeros(|z| Ok(z.powu(5) - 1.0), &w, 1e-6).unwrap();
        assert_eq!(z.len(), 5);
        for k in 0..5 {
            let r = CPoint::from_polar(1.0, 2.0 * PI * k as f64 / 5.0);
            assert!(z.iter().any(|q| (q.location - r).norm() < 1e-12 && q.multiplicity == 1));
        }
        // a double and a triple root
        let p = |z: CPoint| Ok((z - c(0.3, 0.1)).powu(2) * (z + c(0.0, 0.5)).powu(3));
        let z = find_zeros(p, &w, 1e-6).unwrap();
        let mult: Vec<u32> = z.iter().map(|q| q.multiplicity).collect();
        assert_eq!(mult.iter().sum::<u32>(), 5);
        assert!(z.iter().any(|q| q.multiplicity == 2 && (q.location - c(0.3, 0.1)).norm() < 1e-5));
        assert!(z.iter().any(|q| q.multiplicity == 3 && (q.location - c(0.0, -0.5)).norm() < 1e-4));
    }

    #[test]
    fn zeros_on_the_edge_are_flagged() {
        let w = Window::new(0.5, 2.0, -1.0, 1.0).unwrap();
        assert!(matches!(
            find_zeros(|z| Ok(z - 0.5), &w, 1e-6),
            Err(Error::WindowBoundaryZero { .. })
        ));
        // just outside is also flagged, far outside is not
        assert!(find_zeros(|z| Ok(z - 0.5 + 1e-9), &w, 1e-6).is_err());
        assert!(find_zeros(|z| Ok(z - 0.1), &w, 1e-6).unwrap().is_empty());
    }

    #[test]
    fn random_simple_roots_are_recovered() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(77);
        let w = Window::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        for _ in 0..20 {
            let roots: Vec<CPoint> = (0..4)
                .map(|_| c(rng.gen_range(-1.8..1.8), rng.gen_range(-1.8..1.8)))
                .collect();
            let r2 = roots.clone();
            let found = find_zeros(move |z| Ok(r2.iter().map(|r| z - r).product()), &w, 1e-9).unwrap();
            let total: u32 = found.iter().map(|q| q.multiplicity).sum();
            assert_eq!(total, 4);
            for r in &roots {
                assert!(found.iter().any(|q| (q.location - r).norm() < 1e-6));
            }
        }
    }
}
