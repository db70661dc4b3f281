//! Transcendental entire families, their critical points, Koenigs charts
//! and the maps built from `α_d(z) = ((1 − cos π√z)/2)^d`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bracket_root, c, finite, find_zeros, ComplexMap, CPoint, Window, Zero};

/// One member of a supported entire family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum EntireFamily {
    /// `λ e^z`.
    ExpLambda { lambda: CPoint },
    /// `λ sin z`, `0 < λ < 1`.
    SineLambda { lambda: f64 },
    /// `λ + z + e^{−z}`, `λ > 0`.
    FatouLambda { lambda: f64 },
    /// `λ z e^z`.
    ZExp { lambda: CPoint },
    /// `λ e^{z^q}`.
    PowerExp { lambda: CPoint, q: u32 },
    /// `α_d(z) = ((1 − cos π√z)/2)^d`.
    AlphaD { d: u32 },
    /// `(α_d(z) + λ)/(1 + λ)`.
    RhoD { d: u32, lambda: f64 },
    /// `−z² exp(p(z) − p(−1))` with `p(z) = 2 Σ_{j=1}^{d−1} C(d−1, j) z^j / j`.
    CstarMap { d: u32 },
    /// `2w + p(e^w) − p(−1) + πi`, a lift of [`EntireFamily::CstarMap`]
    /// under `exp`.
    CstarLift { d: u32 },
}

/// `p(z)` and `p'(z)` for the punctured-plane map of degree parameter `d`.
fn cstar_poly(d: u32, z: CPoint) -> (CPoint, CPoint) {
    // coefficients 2·C(d−1, j)/j for j = 1..d−1
    let n = d.saturating_sub(1) as usize;
    let mut binom = 1.0f64;
    let mut p = c(0.0, 0.0);
    let mut dp = c(0.0, 0.0);
    let mut zj = c(1.0, 0.0);
    for j in 1..=n {
        binom *= (n + 1 - j) as f64 / j as f64;
        dp += 2.0 * binom * zj;
        zj *= z;
        p += 2.0 * binom / j as f64 * zj;
    }
    (p, dp)
}

fn cstar_constant(d: u32) -> CPoint {
    cstar_poly(d, c(-1.0, 0.0)).0
}

/// `h(z) = (1 − cos π√z)/2` and `h'(z)`. Both are even in `√z`, so the
/// branch does not matter; near 0 the Taylor series in `z` is used.
fn half_versine(z: CPoint) -> (CPoint, CPoint) {
    if z.norm() <= 1.0 {
        // h = Σ_{k≥1} (−1)^{k+1} (π² z)^k / (2 (2k)!)
        let x = PI * PI * z;
        let mut term = c(0.5, 0.0); // (π²z)^{k−1} / (2 (2k−2)!) at k = 1
        let mut h = c(0.0, 0.0);
        let mut dh = c(0.0, 0.0);
        for k in 1..40usize {
            let kf = k as f64;
            // term_k = (−1)^{k+1} x^{k−1} / (2 (2k)!) · π²
            term /= (2.0 * kf - 1.0) * (2.0 * kf);
            let coeff = if k % 2 == 1 { term } else { -term };
            dh += kf * coeff * PI * PI;
            h += coeff * x;
            term *= x;
            if term.norm() < 1e-18 {
                break;
            }
        }
        (h, dh)
    } else {
        let w = PI * z.sqrt();
        let s = (0.5 * w).sin();
        (s * s, PI * w.sin() / (4.0 * z.sqrt()))
    }
}

fn alpha(d: u32, z: CPoint) -> (CPoint, CPoint) {
    let (h, dh) = half_versine(z);
    let hd1 = h.powu(d - 1);
    (hd1 * h, d as f64 * hd1 * dh)
}

impl EntireFamily {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(m));
        match *self {
            Self::ExpLambda { lambda } | Self::ZExp { lambda } | Self::PowerExp { lambda, .. }
                if !(lambda.norm() > 0.0 && lambda.norm().is_finite()) =>
            {
                bad(format!("λ must be finite and non-zero, got {lambda}"))
            }
            Self::PowerExp { q: 0, .. } => bad("q must be positive".into()),
            Self::SineLambda { lambda } if !(lambda > 0.0 && lambda < 1.0) => {
                bad(format!("λ must lie in (0, 1), got {lambda}"))
            }
            Self::FatouLambda { lambda } if !(lambda > 0.0 && lambda.is_finite()) => {
                bad(format!("λ must be positive, got {lambda}"))
            }
            Self::AlphaD { d } | Self::RhoD { d, .. } | Self::CstarMap { d } | Self::CstarLift { d }
                if d < 1 =>
            {
                bad("d must be positive".into())
            }
            Self::RhoD { lambda, .. } if !(lambda >= 0.0 && lambda.is_finite()) => {
                bad(format!("λ must be non-negative, got {lambda}"))
            }
            _ => Ok(()),
        }
    }

    /// Value and analytic derivative.
    pub fn eval(&self, z: CPoint) -> Result<(CPoint, CPoint)> {
        let (v, d) = match *self {
            Self::ExpLambda { lambda } => {
                let e = lambda * z.exp();
                (e, e)
            }
            Self::SineLambda { lambda } => (lambda * z.sin(), lambda * z.cos()),
            Self::FatouLambda { lambda } => {
                let e = (-z).exp();
                (lambda + z + e, 1.0 - e)
            }
            Self::ZExp { lambda } => {
                let e = lambda * z.exp();
                (z * e, (1.0 + z) * e)
            }
            Self::PowerExp { lambda, q } => {
                let zq1 = z.powu(q - 1);
                let e = lambda * (zq1 * z).exp();
                (e, q as f64 * zq1 * e)
            }
            Self::AlphaD { d } => alpha(d, z),
            Self::RhoD { d, lambda } => {
                let (a, da) = alpha(d, z);
                ((a + lambda) / (1.0 + lambda), da / (1.0 + lambda))
            }
            Self::CstarMap { d } => {
                let (p, _) = cstar_poly(d, z);
                let e = (p - cstar_constant(d)).exp();
                (-z * z * e, -e * 2.0 * z * (z + 1.0).powu(d - 1))
            }
            Self::CstarLift { d } => {
                let ew = z.exp();
                let (p, _) = cstar_poly(d, ew);
                (
                    2.0 * z + p - cstar_constant(d) + c(0.0, PI),
                    2.0 * (1.0 + ew).powu(d - 1),
                )
            }
        };
        Ok((finite(z, v)?, finite(z, d)?))
    }

    /// Critical points whose positions are known in closed form, for the
    /// families where they are; `None` otherwise.
    pub fn known_critical_points(&self, window: &Window) -> Option<Vec<CPoint>> {
        let inside = |pts: Vec<CPoint>| pts.into_iter().filter(|p| window.contains(*p)).collect();
        match *self {
            Self::ExpLambda { .. } => Some(Vec::new()),
            Self::SineLambda { .. } => {
                if window.im0 > 0.0 || window.im1 < 0.0 {
                    return Some(Vec::new());
                }
                let k0 = (window.re0 / PI - 0.5).ceil() as i64;
                let k1 = (window.re1 / PI - 0.5).floor() as i64;
                Some((k0..=k1).map(|k| c((k as f64 + 0.5) * PI, 0.0)).collect())
            }
            Self::FatouLambda { .. } => {
                if window.re0 > 0.0 || window.re1 < 0.0 {
                    return Some(Vec::new());
                }
                let k0 = (window.im0 / (2.0 * PI)).ceil() as i64;
                let k1 = (window.im1 / (2.0 * PI)).floor() as i64;
                Some((k0..=k1).map(|k| c(0.0, 2.0 * PI * k as f64)).collect())
            }
            Self::ZExp { .. } => Some(inside(vec![c(-1.0, 0.0)])),
            Self::PowerExp { q, .. } => Some(if q > 1 { inside(vec![c(0.0, 0.0)]) } else { Vec::new() }),
            Self::CstarMap { d } => Some(inside(if d > 1 {
                vec![c(-1.0, 0.0), c(0.0, 0.0)]
            } else {
                vec![c(0.0, 0.0)]
            })),
            _ => None,
        }
    }

    /// Fixed points `−log λ + (2n+1)πi` of `λ + z + e^{−z}` with
    /// `n0 ≤ n ≤ n1`.
    pub fn fatou_fixed_points(lambda: f64, n0: i64, n1: i64) -> Vec<CPoint> {
        (n0..=n1)
            .map(|n| c(-lambda.ln(), (2 * n + 1) as f64 * PI))
            .collect()
    }
}

impl ComplexMap for EntireFamily {
    fn value(&self, z: CPoint) -> Result<CPoint> {
        Ok(self.eval(z)?.0)
    }
    fn derivative(&self, z: CPoint) -> Result<CPoint> {
        Ok(self.eval(z)?.1)
    }
    fn value_and_derivative(&self, z: CPoint) -> Result<(CPoint, CPoint)> {
        self.eval(z)
    }
}

/// Value and derivative of a family member at `z`.
pub fn eval_family(family: &EntireFamily, z: CPoint) -> Result<(CPoint, CPoint)> {
    family.eval(z)
}

/// `λ = τ e^{−τ}`: the parameter for which `λe^z` has a fixed point (at
/// `z = τ`) with multiplier `τ`.
pub fn exp_multiplier_map(tau: CPoint) -> Result<CPoint> {
    if tau.norm() == 0.0 {
        return Err(Error::Domain("τ must be non-zero".into()));
    }
    Ok(tau * (-tau).exp())
}

/// `2w + p(e^w) − p(−1) + πi`.
pub fn cstar_lift(d: u32, w: CPoint) -> Result<CPoint> {
    Ok(EntireFamily::CstarLift { d }.eval(w)?.0)
}

/// Critical points found in a window, with the closed-form cross-check
/// where one exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPoints {
    pub points: Vec<Zero>,
    /// Whether `points` coincide (to `1e−8`, ignoring multiplicity) with
    /// the closed-form list.
    pub lattice_agrees: Option<bool>,
}

/// Zeros of `f'` in `window`.
pub fn critical_points(family: &EntireFamily, window: &Window) -> Result<CriticalPoints> {
    family.validate()?;
    let edge_tol = 1e-6 * window.diameter();
    let points = find_zeros(|z| family.derivative(z), window, edge_tol)?;
    let lattice_agrees = family.known_critical_points(window).map(|known| {
        known.len() == points.len()
            && known
                .iter()
                .all(|k| points.iter().any(|p| (p.location - k).norm() < 1e-8))
    });
    Ok(CriticalPoints {
        points,
        lattice_agrees,
    })
}

/// Koenigs linearising coordinate at an attracting fixed point.
#[derive(Debug, Clone)]
pub struct KoenigsChart<M> {
    map: M,
    fixed_point: CPoint,
    multiplier: CPoint,
    /// Second Taylor coefficient of the chart at the fixed point.
    second_coefficient: CPoint,
    /// Orbits are followed until `|f^n(z) − z*|` drops below this.
    linear_radius: f64,
    tol: f64,
}

/// Iteration cap for chart evaluation.
pub const KOENIGS_MAX_DEPTH: usize = 10_000;

/// A chart value with the depth used and the difference between the last
/// two estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartValue {
    pub value: CPoint,
    pub depth: usize,
    pub convergence: f64,
}

impl<M: ComplexMap> KoenigsChart<M> {
    pub fn fixed_point(&self) -> CPoint {
        self.fixed_point
    }

    pub fn multiplier(&self) -> CPoint {
        self.multiplier
    }

    pub fn map(&self) -> &M {
        &self.map
    }

    fn local(&self, u: CPoint) -> CPoint {
        u + self.second_coefficient * u * u
    }

    /// `κ(z) = lim τ^{−n}(f^n(z) − z*)`. Once the orbit is inside the linear
    /// radius, the estimate `τ^{−n} κ_loc(f^n(z) − z*)` (with `κ_loc` the
    /// second-order Taylor polynomial of the chart) is formed at successive
    /// depths until two agree to `tol` relative. Rounding in `f^n(z) − z*` is
    /// absolute when `z* ≠ 0` and gets amplified by `τ^{−n}`, so successive
    /// differences eventually grow again; the estimate at the smallest
    /// difference is returned then.
    pub fn eval_detailed(&self, z: CPoint) -> Result<ChartValue> {
        let inv = 1.0 / self.multiplier;
        let mut w = z;
        let mut scale = c(1.0, 0.0);
        let mut prev: Option<(CPoint, usize, f64)> = None;
        for n in 0..=KOENIGS_MAX_DEPTH {
            let u = w - self.fixed_point;
            if !(u.norm() < 1e10) {
                return Err(Error::NotInBasin { z });
            }
            if u.norm() <= self.linear_radius {
                let est = scale * self.local(u);
                if let Some((p, pn, pdiff)) = prev {
                    let diff = (est - p).norm();
                    if diff <= self.tol * est.norm() {
                        return Ok(ChartValue {
                            value: est,
                            depth: n,
                            convergence: diff,
                        });
                    }
                    if diff > pdiff {
                        return Ok(ChartValue {
                            value: p,
                            depth: pn,
                            convergence: pdiff,
                        });
                    }
                    prev = Some((est, n, diff));
                } else {
                    prev = Some((est, n, f64::INFINITY));
                }
            }
            w = self.map.value(w).map_err(|_| Error::NotInBasin { z })?;
            scale *= inv;
        }
        Err(Error::NotInBasin { z })
    }

    pub fn eval(&self, z: CPoint) -> Result<CPoint> {
        Ok(self.eval_detailed(z)?.value)
    }

    /// `|κ(f(z)) − τ κ(z)|`.
    pub fn functional_residual(&self, z: CPoint) -> Result<f64> {
        let fz = self.map.value(z)?;
        Ok((self.eval(fz)? - self.multiplier * self.eval(z)?).norm())
    }
}

/// Builds the chart of `map` at `fixed_point`, after checking that it is a
/// fixed point with multiplier `multiplier` and `0 < |multiplier| < 1`.
pub fn koenigs_chart<M: ComplexMap>(map: M, fixed_point: CPoint, multiplier: CPoint) -> Result<KoenigsChart<M>> {
    let m = multiplier.norm();
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::Domain(format!("multiplier {multiplier} is not attracting")));
    }
    let scale = fixed_point.norm().max(1.0);
    let (v, d) = map.value_and_derivative(fixed_point)?;
    if (v - fixed_point).norm() > 1e-10 * scale {
        return Err(Error::Domain(format!("{fixed_point} is not a fixed point (image {v})")));
    }
    if (d - multiplier).norm() > 1e-8 {
        return Err(Error::Domain(format!("multiplier at {fixed_point} is {d}, not {multiplier}")));
    }
    // f'' by central differences of the analytic derivative
    let h = 1e-5 * scale;
    let d2 = (map.derivative(fixed_point + h)? - map.derivative(fixed_point - h)?) / (2.0 * h);
    let second_coefficient = 0.5 * d2 / (multiplier - multiplier * multiplier);
    Ok(KoenigsChart {
        map,
        fixed_point,
        multiplier,
        second_coefficient,
        linear_radius: 4.0 * (f64::EPSILON * scale).cbrt(),
        tol: 1e-12,
    })
}

/// `α_d` and its derivative on the real segment `[0, 1]`, evaluated in real
/// arithmetic.
fn alpha_real(d: u32, x: f64) -> (f64, f64) {
    let s = 0.5 * PI * x.sqrt();
    let h = s.sin().powi(2);
    // h' = π sin(π√x)/(4√x) = (π²/4)·sinc(π√x)
    let w = 2.0 * s;
    let sinc = if w.abs() < 1e-4 { 1.0 - w * w / 6.0 } else { w.sin() / w };
    let dh = 0.25 * PI * PI * sinc;
    (h.powi(d as i32), d as f64 * h.powi(d as i32 - 1) * dh)
}

/// The parabolic parameter of `(α_d + λ)/(1 + λ)` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lambda0 {
    /// From the tangency system `f(x) = x`, `f'(x) = 1`.
    pub lambda0: f64,
    /// The parabolic fixed point.
    pub tangency_point: f64,
    /// From bisection on whether the orbit of 0 reaches 1.
    pub orbit_lambda0: f64,
}

/// Whether the orbit of 0 under `(α_d + λ)/(1 + λ)` reaches a neighbourhood
/// of 1 within `budget` steps.
pub fn orbit_of_zero_reaches_one(d: u32, lambda: f64, budget: usize) -> bool {
    let mut x = 0.0;
    for _ in 0..budget {
        x = (alpha_real(d, x).0 + lambda) / (1.0 + lambda);
        if x > 1.0 - 1e-3 {
            return true;
        }
    }
    false
}

/// `λ₀(d)`: eliminating `λ` from the tangency system gives
/// `α(x) + (1 − x) α'(x) = 1` and then `λ = α'(x) − 1`; the relevant root
/// is the first one in `(0, 1)` with `λ > 0`. The orbit-bisection value is
/// computed independently.
pub fn rho_bifurcation_lambda0(d: u32) -> Result<Lambda0> {
    if d < 2 {
        return Err(Error::Domain(format!("d must be at least 2, got {d}")));
    }
    let tangency = |x: f64| {
        let (a, da) = alpha(d, c(x, 0.0));
        a.re + (1.0 - x) * da.re - 1.0
    };
    let n = 2000;
    let mut root = None;
    for k in 1..n {
        let (l, u) = (k as f64 / n as f64, (k + 1) as f64 / n as f64);
        if tangency(l).signum() != tangency(u).signum() {
            let x = bracket_root(tangency, l, u, 1e-16)?;
            if alpha(d, c(x, 0.0)).1.re - 1.0 > 0.0 {
                root = Some(x);
                break;
            }
        }
    }
    let x = root.ok_or(Error::NoConvergence {
        iterations: n,
        last: c(1.0, 0.0),
        residual: f64::NAN,
    })?;
    let lambda0 = alpha(d, c(x, 0.0)).1.re - 1.0;

    let budget = 200_000;
    let (mut lo, mut hi) = (lambda0 / 4.0, lambda0 * 4.0);
    if orbit_of_zero_reaches_one(d, lo, budget) || !orbit_of_zero_reaches_one(d, hi, budget) {
        return Err(Error::Inconclusive(format!(
            "orbit bisection bracket [{lo}, {hi}] does not straddle the bifurcation"
        )));
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if orbit_of_zero_reaches_one(d, mid, budget) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Lambda0 {
        lambda0,
        tangency_point: x,
        orbit_lambda0: 0.5 * (lo + hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{central_difference, newton_holomorphic, Derivative, RootSolveConfig};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    fn families() -> Vec<EntireFamily> {
        vec![
            EntireFamily::ExpLambda { lambda: c(0.5 * (-0.5f64).exp(), 0.0) },
            EntireFamily::SineLambda { lambda: 0.5 },
            EntireFamily::FatouLambda { lambda: 1.0 },
            EntireFamily::ZExp { lambda: c(0.3, 0.2) },
            EntireFamily::PowerExp { lambda: c(0.1, 0.0), q: 3 },
            EntireFamily::AlphaD { d: 2 },
            EntireFamily::AlphaD { d: 3 },
            EntireFamily::RhoD { d: 2, lambda: 0.05 },
            EntireFamily::CstarMap { d: 2 },
            EntireFamily::CstarMap { d: 4 },
            EntireFamily::CstarLift { d: 3 },
        ]
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        for f in families() {
            for _ in 0..100 {
                let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let d = f.derivative(z).unwrap();
                let fd = central_difference(|w| f.value(w), z, 1e-6).unwrap();
                assert!((d - fd).norm() <= 1e-6 * d.norm().max(1.0), "{f:?} at {z}: {d} vs {fd}");
            }
        }
    }

    #[test]
    fn alpha_series_and_root_forms_agree_across_the_switch() {
        for t in 0..64 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * t as f64 / 64.0);
            let (h_series, dh_series) = half_versine(z);
            let w = PI * z.sqrt();
            let h_root = (1.0 - w.cos()) / 2.0;
            let dh_root = PI * w.sin() / (4.0 * z.sqrt());
            assert!((h_series - h_root).norm() < 1e-14);
            assert!((dh_series - dh_root).norm() < 1e-13);
        }
        // entire: no jump across the negative axis
        let above = alpha(2, c(-9.0, 1e-12)).0;
        let below = alpha(2, c(-9.0, -1e-12)).0;
        assert!((above - below).norm() < 1e-9 * above.norm());
    }

    #[test]
    fn closed_form_examples() {
        let f = EntireFamily::CstarMap { d: 2 };
        assert_eq!(f.value(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((f.value(c(-1.0, 0.0)).unwrap() - c(-1.0, 0.0)).norm() < 1e-15);
        for d in 2..6 {
            let f = EntireFamily::CstarMap { d };
            assert!((f.value(c(-1.0, 0.0)).unwrap() + 1.0).norm() < 1e-13);
            assert!(f.derivative(c(-1.0, 0.0)).unwrap().norm() < 1e-15);
        }
        assert!((alpha(2, c(1.0, 0.0)).0 - 1.0).norm() < 1e-15);
        let fatou = EntireFamily::FatouLambda { lambda: 0.7 };
        let z = c(0.4, -1.3);
        let shifted = fatou.value(z + c(0.0, 2.0 * PI)).unwrap() - fatou.value(z).unwrap();
        assert!((shifted - c(0.0, 2.0 * PI)).norm() < 1e-14);
    }

    #[test]
    fn fatou_fixed_points_match_formula() {
        for lambda in [0.5, 1.0, 2.0] {
            let f = EntireFamily::FatouLambda { lambda };
            let window = Window::new(-3.0, 3.0, -10.0, 10.0).unwrap();
            let found = find_zeros(|z| Ok(f.value(z)? - z), &window, 1e-6).unwrap();
            let expect = EntireFamily::fatou_fixed_points(lambda, -2, 1);
            assert_eq!(found.len(), expect.len());
            for e in &expect {
                assert!(found.iter().any(|z| (z.location - e).norm() < 1e-10));
                assert!((f.value(*e).unwrap() - e).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn exp_multiplier_examples() {
        let l = exp_multiplier_map(c(1.0, 0.0)).unwrap();
        assert!((l - c((-1.0f64).exp(), 0.0)).norm() < 1e-16);
        let tau = c(0.5, 0.0);
        let l = exp_multiplier_map(tau).unwrap();
        assert!((l * tau.exp() - tau).norm() <= 1e-15);
        let l = exp_multiplier_map(c(-0.5, 0.0)).unwrap();
        assert!((l.re + 0.5 * 0.5f64.exp()).abs() < 1e-15);
        assert!(exp_multiplier_map(c(0.0, 0.0)).is_err());
        // newton from 0 lands on the fixed point τ = 0.5
        let lam = 0.5 * (-0.5f64).exp();
        let z = newton_holomorphic(
            |z| Ok(lam * z.exp() - z),
            Derivative::FiniteDifference,
            c(0.0, 0.0),
            &RootSolveConfig::default(),
        )
        .unwrap();
        assert!((z - 0.5).norm() < 1e-12);
    }

    #[test]
    fn critical_point_examples() {
        let w = Window::new(-2.0, 1.0, -2.0, 1.0).unwrap();
        let cp = critical_points(&EntireFamily::CstarMap { d: 2 }, &w).unwrap();
        assert_eq!(cp.points.len(), 2);
        assert!(cp.points.iter().all(|z| z.multiplicity == 1));
        assert_eq!(cp.lattice_agrees, Some(true));

        let w = Window::new(-2.0 * PI, 2.0 * PI, -1.0, 1.0).unwrap();
        let cp = critical_points(&EntireFamily::SineLambda { lambda: 0.5 }, &w).unwrap();
        assert_eq!(cp.points.len(), 4);
        assert_eq!(cp.lattice_agrees, Some(true));

        let w = Window::new(-5.0, 5.0, -5.0, 5.0).unwrap();
        let cp = critical_points(&EntireFamily::ExpLambda { lambda: c(0.3, 0.0) }, &w).unwrap();
        assert!(cp.points.is_empty());

        let cp = critical_points(&EntireFamily::PowerExp { lambda: c(0.1, 0.0), q: 3 }, &Window::around(c(0.0, 0.0), 1.0).unwrap()).unwrap();
        assert_eq!(cp.points.len(), 1);
        assert_eq!(cp.points[0].multiplicity, 2);
    }

    #[test]
    fn boundary_zero_is_reported() {
        let w = Window::new(PI / 2.0, 3.0, -1.0, 1.0).unwrap();
        assert!(matches!(
            critical_points(&EntireFamily::SineLambda { lambda: 0.5 }, &w),
            Err(Error::WindowBoundaryZero { .. })
        ));
    }

    #[test]
    fn cstar_has_no_other_zeros() {
        for d in [2, 3] {
            let f = EntireFamily::CstarMap { d };
            let w = Window::new(-3.0, 2.1, -2.9, 3.1).unwrap();
            let zeros = find_zeros(|z| f.value(z), &w, 1e-6).unwrap();
            assert_eq!(zeros.len(), 1);
            assert_eq!(zeros[0].multiplicity, 2);
            assert!(zeros[0].location.norm() < 1e-6);
        }
    }

    #[test]
    fn lift_examples() {
        assert!((cstar_lift(2, c(0.0, PI)).unwrap() - c(0.0, 3.0 * PI)).norm() < 1e-14);
        assert!((cstar_lift(2, c(0.0, -PI)).unwrap() - c(0.0, -PI)).norm() < 1e-14);
        for k in -3i32..4 {
            let w = c(0.0, (2 * k - 1) as f64 * PI);
            assert!((cstar_lift(3, w).unwrap() - c(0.0, (4 * k - 1) as f64 * PI)).norm() < 1e-12);
        }
        let mut rng = rand::rngs::StdRng::seed_from_u64(41);
        for d in [2, 3, 5] {
            let f = EntireFamily::CstarMap { d };
            for _ in 0..100 {
                let w = c(rng.gen_range(-2.0..1.0), rng.gen_range(-PI..PI));
                let lhs = cstar_lift(d, w).unwrap().exp();
                let rhs = f.value(w.exp()).unwrap();
                assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn chart_of_linear_map_is_identity() {
        let tau = c(0.6, 0.2);
        let lin = crate::numerics::AnalyticFn { f: move |z: CPoint| tau * z, df: move |_| tau };
        let chart = koenigs_chart(lin, c(0.0, 0.0), tau).unwrap();
        for z in [c(0.3, 0.0), c(-1.0, 2.0)] {
            assert!((chart.eval(z).unwrap() - z).norm() < 1e-12 * z.norm());
        }
    }

    #[test]
    fn sine_chart_functional_equation() {
        let f = EntireFamily::SineLambda { lambda: 0.5 };
        let chart = koenigs_chart(f, c(0.0, 0.0), c(0.5, 0.0)).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(51);
        for _ in 0..20 {
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(-0.5..0.5));
            let r = chart.functional_residual(z).unwrap();
            assert!(r <= 1e-8 * chart.eval(z).unwrap().norm().max(1.0), "{z}: {r}");
        }
        let h = 1e-6;
        let d0 = (chart.eval(c(h, 0.0)).unwrap() - chart.eval(c(-h, 0.0)).unwrap()) / (2.0 * h);
        assert!((d0 - 1.0).norm() < 1e-8);
        assert_eq!(chart.eval(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn exp_chart_at_singular_value() {
        let lam = exp_multiplier_map(c(0.5, 0.0)).unwrap();
        let f = EntireFamily::ExpLambda { lambda: lam };
        let chart = koenigs_chart(f, c(0.5, 0.0), c(0.5, 0.0)).unwrap();
        let v = chart.eval_detailed(c(0.0, 0.0)).unwrap();
        assert!(v.value.norm().is_finite() && v.value.norm() > 0.0);
        assert!(chart.functional_residual(c(0.0, 0.0)).unwrap() < 1e-8);
        assert!(matches!(chart.eval(c(5.0, 0.0)), Err(Error::NotInBasin { .. })));
    }

    #[test]
    fn chart_rejects_bad_inputs() {
        let f = EntireFamily::SineLambda { lambda: 0.5 };
        assert!(koenigs_chart(f, c(0.1, 0.0), c(0.5, 0.0)).is_err());
        assert!(koenigs_chart(f, c(0.0, 0.0), c(0.4, 0.0)).is_err());
        assert!(koenigs_chart(f, c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn lambda0_for_quadratic_alpha() {
        let sol = rho_bifurcation_lambda0(2).unwrap();
        assert!((sol.lambda0 - 0.0548).abs() <= 5e-4);
        // 30-digit tangency solve, frozen
        assert!((sol.lambda0 - 0.054_791_704_249_661_5).abs() < 1e-12);
        assert!((sol.tangency_point - 0.116_508_180_921).abs() < 1e-9);
        assert!((sol.orbit_lambda0 - sol.lambda0).abs() <= 1e-6);
        assert!(!orbit_of_zero_reaches_one(2, sol.lambda0 / 2.0, 100_000));
        assert!(orbit_of_zero_reaches_one(2, sol.lambda0 * 2.0, 100_000));
        assert!(rho_bifurcation_lambda0(1).is_err());
    }

    #[test]
    fn validation() {
        assert!(EntireFamily::SineLambda { lambda: 1.5 }.validate().is_err());
        assert!(EntireFamily::FatouLambda { lambda: -1.0 }.validate().is_err());
        assert!(EntireFamily::ExpLambda { lambda: c(0.0, 0.0) }.validate().is_err());
        assert!(EntireFamily::PowerExp { lambda: c(1.0, 0.0), q: 0 }.validate().is_err());
        for f in families() {
            f.validate().unwrap();
            let text = serde_json::to_string(&f).unwrap();
            let back: EntireFamily = serde_json::from_str(&text).unwrap();
            assert_eq!(f, back);
        }
    }
}
