//! Finite Blaschke products and infinite ones truncated with a certified
//! tail bound.
//!
//! A Blaschke product with zeros `a_n` in the unit disc is
//!
//! ```text
//! B(z) = e^{iθ} · Π (|a_n| / a_n) · (a_n − z) / (1 − conj(a_n) z)
//! ```
//!
//! where a factor with `a_n = 0` is read as `z`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bracket_root, c, ComplexMap, CPoint};

/// Zeros must satisfy `|a| < 1 - ZERO_MARGIN`.
pub const ZERO_MARGIN: f64 = 1e-15;
/// Default working radius for truncated infinite products.
pub const WORKING_RADIUS: f64 = 0.999;
/// Above this many factors the product is accumulated in log space.
const LOG_SPACE_DEGREE: usize = 64;

/// A holomorphic self-map of the unit disc that can be evaluated pointwise.
pub trait InnerFunction {
    fn eval(&self, z: CPoint) -> Result<CPoint>;
}

impl<T: InnerFunction + ?Sized> InnerFunction for &T {
    fn eval(&self, z: CPoint) -> Result<CPoint> {
        (**self).eval(z)
    }
}

#[inline]
fn factor(a: CPoint, z: CPoint) -> CPoint {
    if a == Complex64::new(0.0, 0.0) {
        z
    } else {
        let n = a.norm();
        (n / a) * (a - z) / (1.0 - a.conj() * z)
    }
}

#[inline]
fn factor_d1(a: CPoint, z: CPoint) -> CPoint {
    if a == Complex64::new(0.0, 0.0) {
        c(1.0, 0.0)
    } else {
        let n = a.norm();
        let den = 1.0 - a.conj() * z;
        (n / a) * (n * n - 1.0) / (den * den)
    }
}

#[inline]
fn factor_d2(a: CPoint, z: CPoint) -> CPoint {
    if a == Complex64::new(0.0, 0.0) {
        c(0.0, 0.0)
    } else {
        let n = a.norm();
        let den = 1.0 - a.conj() * z;
        (n / a) * (n * n - 1.0) * 2.0 * a.conj() / (den * den * den)
    }
}

fn zero_order(a: &CPoint, b: &CPoint) -> Ordering {
    a.norm()
        .partial_cmp(&b.norm())
        .unwrap_or(Ordering::Equal)
        .then(a.arg().partial_cmp(&b.arg()).unwrap_or(Ordering::Equal))
}

/// Finite Blaschke product: phase plus zeros in the open disc, kept in order
/// of increasing modulus (ties by argument).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeRecord", into = "BlaschkeRecord")]
pub struct FiniteBlaschke {
    phase: f64,
    zeros: Vec<CPoint>,
}

/// Text record of a finite Blaschke product.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlaschkeRecord {
    pub phase: f64,
    pub zeros: Vec<[f64; 2]>,
}

impl TryFrom<BlaschkeRecord> for FiniteBlaschke {
    type Error = Error;
    fn try_from(r: BlaschkeRecord) -> Result<Self> {
        FiniteBlaschke::new(r.phase, r.zeros.iter().map(|p| c(p[0], p[1])).collect())
    }
}

impl From<FiniteBlaschke> for BlaschkeRecord {
    fn from(b: FiniteBlaschke) -> Self {
        BlaschkeRecord {
            phase: b.phase,
            zeros: b.zeros.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl FiniteBlaschke {
    pub fn new(phase: f64, mut zeros: Vec<CPoint>) -> Result<Self> {
        if !phase.is_finite() {
            return Err(Error::Domain(format!("phase must be finite, got {phase}")));
        }
        for a in &zeros {
            if !(a.norm() < 1.0 - ZERO_MARGIN) {
                return Err(Error::Domain(format!("zero {a} is not inside the unit disc")));
            }
        }
        zeros.sort_by(zero_order);
        Ok(Self { phase, zeros })
    }

    /// The rotation `z ↦ e^{iθ}`·(no zeros).
    pub fn rotation(phase: f64) -> Self {
        Self {
            phase,
            zeros: Vec::new(),
        }
    }

    /// `(z² + k)/(k z² + 1)`, whose zeros are `±i√k`.
    pub fn topfer(k: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain(format!("k must lie in (0, 1), got {k}")));
        }
        let s = k.sqrt();
        Self::new(0.0, vec![c(0.0, s), c(0.0, -s)])
    }

    /// `(3z² + 1)/(3 + z²)`, the degree-two product with a triple fixed
    /// point at 1.
    pub fn parabolic_degree_two() -> Self {
        Self::topfer(1.0 / 3.0).expect("1/3 lies in (0, 1)")
    }

    /// `z (z + m)/(1 + conj(m) z)`: fixes 0 with multiplier `m`.
    pub fn elliptic_degree_two(multiplier: CPoint) -> Result<Self> {
        let phase = if multiplier.norm() == 0.0 {
            0.0
        } else {
            multiplier.arg()
        };
        Self::new(phase, vec![c(0.0, 0.0), -multiplier])
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn zeros(&self) -> &[CPoint] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: CPoint) -> CPoint {
        let rot = Complex64::from_polar(1.0, self.phase);
        if self.zeros.len() <= LOG_SPACE_DEGREE {
            return self.zeros.iter().fold(rot, |acc, &a| acc * factor(a, z));
        }
        let mut log_mod = 0.0;
        let mut arg = self.phase;
        for &a in &self.zeros {
            let f = factor(a, z);
            if f.norm() == 0.0 {
                return c(0.0, 0.0);
            }
            log_mod += f.norm().ln();
            arg += f.arg();
        }
        Complex64::from_polar(log_mod.exp(), arg)
    }

    pub fn derivative(&self, z: CPoint) -> CPoint {
        let fs: Vec<CPoint> = self.zeros.iter().map(|&a| factor(a, z)).collect();
        let ds: Vec<CPoint> = self.zeros.iter().map(|&a| factor_d1(a, z)).collect();
        let n = fs.len();
        let mut prefix = vec![c(1.0, 0.0); n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] * fs[i];
        }
        let mut suffix = c(1.0, 0.0);
        let mut sum = c(0.0, 0.0);
        for i in (0..n).rev() {
            sum += ds[i] * prefix[i] * suffix;
            suffix *= fs[i];
        }
        Complex64::from_polar(1.0, self.phase) * sum
    }

    pub fn second_derivative(&self, z: CPoint) -> CPoint {
        let fs: Vec<CPoint> = self.zeros.iter().map(|&a| factor(a, z)).collect();
        let d1: Vec<CPoint> = self.zeros.iter().map(|&a| factor_d1(a, z)).collect();
        let d2: Vec<CPoint> = self.zeros.iter().map(|&a| factor_d2(a, z)).collect();
        let n = fs.len();
        let others = |skip: &[usize]| -> CPoint {
            (0..n)
                .filter(|i| !skip.contains(i))
                .fold(c(1.0, 0.0), |acc, i| acc * fs[i])
        };
        let mut sum = c(0.0, 0.0);
        for i in 0..n {
            sum += d2[i] * others(&[i]);
            for j in 0..n {
                if j != i {
                    sum += d1[i] * d1[j] * others(&[i, j]);
                }
            }
        }
        Complex64::from_polar(1.0, self.phase) * sum
    }

    /// Numerator and denominator coefficients (ascending powers) of the
    /// rational form, normalised so that the denominator has constant term 1.
    pub fn rational_coefficients(&self) -> (Vec<CPoint>, Vec<CPoint>) {
        let mut num = vec![Complex64::from_polar(1.0, self.phase)];
        let mut den = vec![c(1.0, 0.0)];
        for &a in &self.zeros {
            if a == c(0.0, 0.0) {
                num = poly_mul(&num, &[c(0.0, 0.0), c(1.0, 0.0)]);
            } else {
                let u = a.norm() / a;
                num = poly_mul(&num, &[u * a, -u]);
                den = poly_mul(&den, &[c(1.0, 0.0), -a.conj()]);
            }
        }
        (num, den)
    }
}

fn poly_mul(p: &[CPoint], q: &[CPoint]) -> Vec<CPoint> {
    let mut out = vec![c(0.0, 0.0); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

impl InnerFunction for FiniteBlaschke {
    fn eval(&self, z: CPoint) -> Result<CPoint> {
        Ok(FiniteBlaschke::eval(self, z))
    }
}

impl ComplexMap for FiniteBlaschke {
    fn value(&self, z: CPoint) -> Result<CPoint> {
        Ok(self.eval(z))
    }
    fn derivative(&self, z: CPoint) -> Result<CPoint> {
        Ok(FiniteBlaschke::derivative(self, z))
    }
}

/// Closed-form zero sequence of an infinite Blaschke product.
pub trait ZeroRule {
    /// The `n`-th zero, `n >= 1`.
    fn zero(&self, n: usize) -> CPoint;

    /// Normalised factor of the `n`-th zero at `z`. Rules whose zeros
    /// approach the circle faster than double precision resolves should
    /// override this with a cancellation-free form.
    fn factor(&self, n: usize, z: CPoint) -> CPoint {
        factor(self.zero(n), z)
    }

    fn factor_derivative(&self, n: usize, z: CPoint) -> CPoint {
        factor_d1(self.zero(n), z)
    }

    /// Upper bound for `sup_{|z| <= radius} |1 − Π_{n > truncation} b_n(z)|`
    /// where `b_n` are the normalised factors of the dropped zeros.
    fn tail_bound(&self, truncation: usize, radius: f64) -> f64;

    /// Upper bound for `Σ_{n > truncation} (1 − |a_n|)`.
    fn blaschke_tail_sum(&self, truncation: usize) -> f64;
}

/// Infinite Blaschke product truncated after `truncation` zeros.
#[derive(Debug, Clone)]
pub struct TruncatedInfiniteBlaschke<R> {
    rule: R,
    phase: f64,
    truncation: usize,
    radius: f64,
    tail_bound: f64,
}

impl<R: ZeroRule> TruncatedInfiniteBlaschke<R> {
    /// Picks the smallest truncation whose certified tail bound on the disc
    /// of the given radius is at most `accuracy`.
    pub fn with_accuracy(rule: R, phase: f64, radius: f64, accuracy: f64, cap: usize) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::Domain(format!("working radius must lie in (0, 1), got {radius}")));
        }
        if !(accuracy > 0.0) {
            return Err(Error::Domain(format!("accuracy must be positive, got {accuracy}")));
        }
        // the bound is monotone in the truncation: doubling, then bisection
        let ok = |n: usize| rule.tail_bound(n, radius) <= accuracy;
        let mut hi = 1usize;
        while !ok(hi) {
            if hi >= cap {
                return Err(Error::AccuracyUnreachable {
                    requested: accuracy,
                    cap,
                });
            }
            hi = (hi * 2).min(cap);
        }
        let mut lo = hi / 2;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let truncation = if lo > 0 && ok(lo) { lo } else { hi };
        Self::with_truncation(rule, phase, radius, truncation)
    }

    pub fn with_truncation(rule: R, phase: f64, radius: f64, truncation: usize) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::Domain(format!("working radius must lie in (0, 1), got {radius}")));
        }
        if truncation == 0 {
            return Err(Error::Domain("truncation must be positive".into()));
        }
        let tail_bound = rule.tail_bound(truncation, radius);
        Ok(Self {
            rule,
            phase,
            truncation,
            radius,
            tail_bound,
        })
    }

    pub fn rule(&self) -> &R {
        &self.rule
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// The kept zeros `a_1..a_N`.
    pub fn zeros(&self) -> Vec<CPoint> {
        (1..=self.truncation).map(|n| self.rule.zero(n)).collect()
    }

    fn check_radius(&self, z: CPoint) -> Result<()> {
        if !(z.norm() <= self.radius) {
            return Err(Error::Domain(format!(
                "|z| = {} exceeds the working radius {}",
                z.norm(),
                self.radius
            )));
        }
        Ok(())
    }

    /// Value of the truncated product; within `tail_bound` of the infinite
    /// product for `|z| <= radius`.
    pub fn eval(&self, z: CPoint) -> Result<CPoint> {
        self.check_radius(z)?;
        let rot = Complex64::from_polar(1.0, self.phase);
        if self.truncation <= LOG_SPACE_DEGREE {
            return Ok((1..=self.truncation).fold(rot, |acc, n| acc * self.rule.factor(n, z)));
        }
        let mut log_mod = 0.0;
        let mut arg = self.phase;
        for n in 1..=self.truncation {
            let f = self.rule.factor(n, z);
            if f.norm() == 0.0 {
                return Ok(c(0.0, 0.0));
            }
            log_mod += f.norm().ln();
            arg += f.arg();
        }
        Ok(Complex64::from_polar(log_mod.exp(), arg))
    }

    pub fn derivative(&self, z: CPoint) -> Result<CPoint> {
        self.check_radius(z)?;
        let n = self.truncation;
        let fs: Vec<CPoint> = (1..=n).map(|k| self.rule.factor(k, z)).collect();
        let mut prefix = vec![c(1.0, 0.0); n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] * fs[i];
        }
        let mut suffix = c(1.0, 0.0);
        let mut sum = c(0.0, 0.0);
        for i in (0..n).rev() {
            sum += self.rule.factor_derivative(i + 1, z) * prefix[i] * suffix;
            suffix *= fs[i];
        }
        Ok(Complex64::from_polar(1.0, self.phase) * sum)
    }
}

impl<R: ZeroRule> InnerFunction for TruncatedInfiniteBlaschke<R> {
    fn eval(&self, z: CPoint) -> Result<CPoint> {
        TruncatedInfiniteBlaschke::eval(self, z)
    }
}

/// Zeros `0, a_1, −a_1, a_2, −a_2, …` with `a_k = (τ^k − 1)/(τ^k + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineZeros {
    pub tau: f64,
}

impl SineZeros {
    /// `a_k(τ)` for `k >= 1`.
    pub fn a(&self, k: usize) -> f64 {
        let t = self.tau.powi(k as i32);
        if t.is_infinite() {
            1.0 - f64::EPSILON / 2.0
        } else {
            (t - 1.0) / (t + 1.0)
        }
    }

    /// `1 − a_k`, computed without cancellation.
    pub fn one_minus_a(&self, k: usize) -> f64 {
        2.0 / (self.tau.powi(k as i32) + 1.0)
    }
}

impl ZeroRule for SineZeros {
    fn zero(&self, n: usize) -> CPoint {
        match n {
            0 => panic!("zero indices start at 1"),
            1 => c(0.0, 0.0),
            n if n % 2 == 0 => c(self.a(n / 2), 0.0),
            n => c(-self.a(n / 2), 0.0),
        }
    }

    fn factor(&self, n: usize, z: CPoint) -> CPoint {
        let one = c(1.0, 0.0);
        match n {
            0 => panic!("zero indices start at 1"),
            1 => z,
            // (a − z)/(1 − az) = 1 − d(1 + z)/((1 − z) + dz) with d = 1 − a
            n if n % 2 == 0 => {
                let d = self.one_minus_a(n / 2);
                one - d * (one + z) / ((one - z) + d * z)
            }
            // (a + z)/(1 + az) = 1 − d(1 − z)/((1 + z) − dz)
            n => {
                let d = self.one_minus_a(n / 2);
                one - d * (one - z) / ((one + z) - d * z)
            }
        }
    }

    fn factor_derivative(&self, n: usize, z: CPoint) -> CPoint {
        let one = c(1.0, 0.0);
        match n {
            0 => panic!("zero indices start at 1"),
            1 => one,
            n if n % 2 == 0 => {
                let d = self.one_minus_a(n / 2);
                let den = (one - z) + d * z;
                -d * (2.0 - d) / (den * den)
            }
            n => {
                let d = self.one_minus_a(n / 2);
                let den = (one + z) - d * z;
                d * (2.0 - d) / (den * den)
            }
        }
    }

    fn tail_bound(&self, truncation: usize, radius: f64) -> f64 {
        let tau = self.tau;
        let r2 = radius * radius;
        if truncation == 0 {
            return f64::INFINITY;
        }
        // complete pairs kept: zeros 2..=2K+1
        let pairs = (truncation - 1) / 2;
        let mut sum = 0.0;
        if truncation.is_multiple_of(2) {
            // −a_K was dropped on its own
            let k = truncation / 2;
            sum += self.one_minus_a(k) * (1.0 + radius) / (1.0 - self.a(k) * radius);
            // and the pairs beyond K
            sum += 4.0 * (1.0 + r2) / (1.0 - r2) * tau.powi(-(k as i32)) / (tau - 1.0);
        } else {
            // 1 − (a² − z²)/(1 − a²z²) = (1 − a²)(1 + z²)/(1 − a²z²), and 1 − a_k² ≤ 4τ^{-k}
            sum += 4.0 * (1.0 + r2) / (1.0 - r2) * tau.powi(-(pairs as i32)) / (tau - 1.0);
        }
        sum.exp_m1()
    }

    fn blaschke_tail_sum(&self, truncation: usize) -> f64 {
        // each a_k contributes twice, 1 − a_k ≤ 2τ^{-k}
        let k = truncation.saturating_sub(1) / 2;
        4.0 * self.tau.powi(-(k as i32)) / (self.tau - 1.0)
    }
}

/// `g_τ(z) = z Π_{n≥1} (a_n² − z²)/(1 − a_n² z²)`.
#[derive(Debug, Clone)]
pub struct SineFamilyProduct {
    tau: f64,
    product: TruncatedInfiniteBlaschke<SineZeros>,
}

/// Text record of a sine-family product.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SineProductRecord {
    pub tau: f64,
    pub truncation: usize,
    pub radius: f64,
    pub tail_bound: f64,
    pub phase: f64,
    pub zeros: Vec<[f64; 2]>,
}

/// Truncation cap (number of zeros) for the sine-family product.
pub const SINE_TRUNCATION_CAP: usize = 400_000;

impl SineFamilyProduct {
    pub fn new(tau: f64) -> Result<Self> {
        Self::with_accuracy(tau, 1e-15, WORKING_RADIUS)
    }

    pub fn with_accuracy(tau: f64, accuracy: f64, radius: f64) -> Result<Self> {
        check_tau(tau)?;
        let product = TruncatedInfiniteBlaschke::with_accuracy(
            SineZeros { tau },
            0.0,
            radius,
            accuracy,
            SINE_TRUNCATION_CAP,
        )?;
        Ok(Self { tau, product })
    }

    /// Fixed number of zero pairs (plus the zero at the origin).
    pub fn with_pairs(tau: f64, pairs: usize, radius: f64) -> Result<Self> {
        check_tau(tau)?;
        let product =
            TruncatedInfiniteBlaschke::with_truncation(SineZeros { tau }, 0.0, radius, 2 * pairs + 1)?;
        Ok(Self { tau, product })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn zeros_rule(&self) -> SineZeros {
        SineZeros { tau: self.tau }
    }

    pub fn product(&self) -> &TruncatedInfiniteBlaschke<SineZeros> {
        &self.product
    }

    pub fn tail_bound(&self) -> f64 {
        self.product.tail_bound()
    }

    pub fn radius(&self) -> f64 {
        self.product.radius()
    }

    /// Number of zero pairs `±a_n` kept.
    pub fn pairs(&self) -> usize {
        (self.product.truncation() - 1) / 2
    }

    pub fn eval(&self, z: CPoint) -> Result<CPoint> {
        self.product.eval(z)
    }

    pub fn derivative(&self, z: CPoint) -> Result<CPoint> {
        self.product.derivative(z)
    }

    /// `g'/g` on the real segment `(0, 1)`; its zeros are the critical points.
    pub fn log_derivative_real(&self, x: f64) -> f64 {
        let mut s = 1.0 / x;
        let rule = self.zeros_rule();
        for k in 1..=self.pairs() {
            let a = rule.a(k);
            let a2 = a * a;
            s += -2.0 * x / (a2 - x * x) + 2.0 * a2 * x / (1.0 - a2 * x * x);
        }
        s
    }

    /// The critical point of `g_τ` between consecutive positive zeros
    /// `a_{k−1} < b_k < a_k` (with `a_0 = 0`), for `k >= 1`.
    pub fn positive_critical_point(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.pairs() {
            return Err(Error::Domain(format!(
                "critical point index {k} outside 1..={}",
                self.pairs()
            )));
        }
        let rule = self.zeros_rule();
        let lo = if k == 1 { 0.0 } else { rule.a(k - 1) };
        let hi = rule.a(k);
        let width = hi - lo;
        bracket_root(
            |x| self.log_derivative_real(x),
            lo + width * 1e-9,
            hi - width * 1e-9,
            1e-16,
        )
    }

    pub fn record(&self) -> SineProductRecord {
        SineProductRecord {
            tau: self.tau,
            truncation: self.product.truncation(),
            radius: self.product.radius(),
            tail_bound: self.product.tail_bound(),
            phase: self.product.phase(),
            zeros: self.product.zeros().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl InnerFunction for SineFamilyProduct {
    fn eval(&self, z: CPoint) -> Result<CPoint> {
        SineFamilyProduct::eval(self, z)
    }
}

impl ComplexMap for SineFamilyProduct {
    fn value(&self, z: CPoint) -> Result<CPoint> {
        self.eval(z)
    }
    fn derivative(&self, z: CPoint) -> Result<CPoint> {
        SineFamilyProduct::derivative(self, z)
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 1.0 + 1e-9) || !tau.is_finite() {
        return Err(Error::Domain(format!("τ must exceed 1, got {tau}")));
    }
    Ok(())
}

/// Absolute accuracy targeted by [`lambda_of_tau`].
const LAMBDA_ABS_TOL: f64 = 1e-15;

/// `ln Π a_n(τ)²` together with an upper bound for the absolute error of
/// `exp` of it.
pub fn log_lambda_of_tau(tau: f64) -> Result<(f64, f64)> {
    check_tau(tau)?;
    let mut log_p = 0.0;
    let mut t = 1.0;
    for _ in 0..10_000_000usize {
        t *= tau;
        if t.is_infinite() {
            return Ok((log_p, 0.0));
        }
        // ln a_n² = 2 ln(1 − 2/(τ^n + 1))
        log_p += 2.0 * (-2.0 / (t + 1.0)).ln_1p();
        // −ln(1 − x) ≤ x/(1 − x) = 2/(τ^m − 1) for each dropped factor m > n
        let inv = 1.0 / t;
        let tail = 4.0 * inv / ((tau - 1.0) * (1.0 - inv / tau));
        let abs_err = log_p.exp() * tail.min(1.0);
        if abs_err <= LAMBDA_ABS_TOL {
            return Ok((log_p, abs_err));
        }
    }
    Err(Error::AccuracyUnreachable {
        requested: LAMBDA_ABS_TOL,
        cap: 10_000_000,
    })
}

/// `λ(τ) = Π_{n≥1} a_n(τ)²`, the multiplier of `g_τ` at 0.
pub fn lambda_of_tau(tau: f64) -> Result<f64> {
    Ok(log_lambda_of_tau(tau)?.0.exp())
}

/// Inverse of [`lambda_of_tau`], by bracketing in `ln τ`.
pub fn tau_of_lambda(lambda: f64) -> Result<f64> {
    if !(lambda > 1e-12 && lambda < 1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "λ must lie in (1e-12, 1 - 1e-12), got {lambda}"
        )));
    }
    let target = lambda.ln();
    let f = |d: f64| -> f64 {
        match log_lambda_of_tau(d.exp()) {
            Ok((l, _)) => l - target,
            Err(_) => f64::NAN,
        }
    };
    let (mut lo, mut hi) = (1e-3, 1.0);
    while f(lo) > 0.0 {
        lo *= 0.5;
    }
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 700.0 {
            return Err(Error::Domain(format!("λ = {lambda} too close to 1")));
        }
    }
    let d = bracket_root(f, lo, hi, 1e-15)?;
    Ok(d.exp())
}

/// Result of solving for the parabolic member of the Töpfer family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopferSolution {
    pub k: f64,
    pub value_at_one: f64,
    pub derivative_at_one: f64,
    pub second_derivative_at_one: f64,
}

/// Finds `k ∈ (0, 1)` for which `(z² + k)/(k z² + 1)` has a parabolic fixed
/// point at `z = 1`, and checks that it is a triple fixed point.
pub fn solve_topfer_k() -> Result<TopferSolution> {
    let one = c(1.0, 0.0);
    let k = bracket_root(
        |k| {
            FiniteBlaschke::topfer(k)
                .map(|b| b.derivative(one).re - 1.0)
                .unwrap_or(f64::NAN)
        },
        1e-12,
        1.0 - 1e-12,
        1e-17,
    )?;
    let b = FiniteBlaschke::topfer(k)?;
    let sol = TopferSolution {
        k,
        value_at_one: b.eval(one).re,
        derivative_at_one: b.derivative(one).re,
        second_derivative_at_one: b.second_derivative(one).re,
    };
    if (sol.value_at_one - 1.0).abs() > 1e-12 || sol.second_derivative_at_one.abs() > 1e-10 {
        return Err(Error::Inconclusive(format!(
            "k = {k} does not give a triple fixed point at 1: {sol:?}"
        )));
    }
    Ok(sol)
}

/// `sup_{|z| = 1} |B1(z) − B2(z)|` (equal to the sup over the closed disc by
/// the maximum principle), from a dense grid refined around its largest
/// samples by golden-section search.
pub fn uniform_circle_distance(b1: &FiniteBlaschke, b2: &FiniteBlaschke) -> f64 {
    let diff = |t: f64| (b1.eval(Complex64::from_polar(1.0, t)) - b2.eval(Complex64::from_polar(1.0, t))).norm();
    let m = 4096 * (1 + b1.degree() + b2.degree());
    let h = 2.0 * PI / m as f64;
    let samples: Vec<f64> = (0..m).map(|j| diff(j as f64 * h)).collect();
    let mut peaks: Vec<usize> = (0..m)
        .filter(|&j| samples[j] >= samples[(j + m - 1) % m] && samples[j] >= samples[(j + 1) % m])
        .collect();
    peaks.sort_by(|&a, &b| samples[b].partial_cmp(&samples[a]).unwrap_or(Ordering::Equal));
    let mut best = samples.iter().cloned().fold(0.0, f64::max);
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    for &j in peaks.iter().take(16) {
        let (mut a, mut b) = ((j as f64 - 1.0) * h, (j as f64 + 1.0) * h);
        let mut x1 = b - golden * (b - a);
        let mut x2 = a + golden * (b - a);
        let (mut f1, mut f2) = (diff(x1), diff(x2));
        for _ in 0..80 {
            if f1 > f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - golden * (b - a);
                f1 = diff(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + golden * (b - a);
                f2 = diff(x2);
            }
        }
        best = best.max(f1).max(f2);
    }
    best
}
