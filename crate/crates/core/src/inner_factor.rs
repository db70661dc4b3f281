//! Atomic singular inner functions, their product with a finite Blaschke
//! product, and Frostman shifts.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeRecord, FiniteBlaschke, InnerFunction};
use crate::error::{Error, Result};
use crate::numerics::{c, CPoint};

/// Evaluation is refused closer than this to an atom.
pub const ATOM_TOL: f64 = 1e-12;

/// A point mass of the singular measure: mass `mass > 0` at `e^{i·theta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub theta: f64,
    pub mass: f64,
}

/// Finite sum of point masses on the circle with pairwise distinct
/// positions.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Atom>", into = "Vec<Atom>")]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl TryFrom<Vec<Atom>> for AtomicMeasure {
    type Error = Error;
    fn try_from(atoms: Vec<Atom>) -> Result<Self> {
        AtomicMeasure::new(atoms)
    }
}

impl From<AtomicMeasure> for Vec<Atom> {
    fn from(m: AtomicMeasure) -> Self {
        m.atoms
    }
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if !(a.mass > 0.0 && a.mass.is_finite()) || !a.theta.is_finite() {
                return Err(Error::Domain(format!("atom {a:?} needs finite angle and positive mass")));
            }
            for b in &atoms[..i] {
                if angle_gap(a.theta, b.theta) < ATOM_TOL {
                    return Err(Error::Domain(format!(
                        "atoms at {} and {} coincide mod 2π",
                        a.theta, b.theta
                    )));
                }
            }
        }
        Ok(Self { atoms })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `count` atoms of equal mass at the `count`-th roots of unity.
    pub fn roots_of_unity(count: usize, mass: f64) -> Result<Self> {
        Self::new(
            (0..count)
                .map(|j| Atom {
                    theta: 2.0 * PI * j as f64 / count as f64,
                    mass,
                })
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Distance from `z` to the nearest atom.
    pub fn atom_distance(&self, z: CPoint) -> f64 {
        self.atoms
            .iter()
            .map(|a| (z - Complex64::from_polar(1.0, a.theta)).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `−Σ c_j (e^{iθ_j} + z)/(e^{iθ_j} − z)`; its real part is negative in
    /// the disc.
    pub fn exponent(&self, z: CPoint) -> Result<CPoint> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("|z| = {} is not inside the disc", z.norm())));
        }
        let mut sum = c(0.0, 0.0);
        for a in &self.atoms {
            let e = Complex64::from_polar(1.0, a.theta);
            let gap = (e - z).norm();
            if gap < ATOM_TOL {
                return Err(Error::AtomProximity { z, distance: gap });
            }
            sum -= a.mass * (e + z) / (e - z);
        }
        Ok(sum)
    }

    /// The singular inner function `S(z) = exp(exponent(z))`.
    pub fn eval(&self, z: CPoint) -> Result<CPoint> {
        Ok(self.exponent(z)?.exp())
    }
}

/// `S(z)` for a finite atomic measure.
pub fn eval_singular(measure: &AtomicMeasure, z: CPoint) -> Result<CPoint> {
    measure.eval(z)
}

/// `g = B · S` with `B` a finite Blaschke product of degree `p` and `S`
/// singular with `q` atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AtomicInnerRecord", into = "AtomicInnerRecord")]
pub struct AtomicInnerFunction {
    blaschke: FiniteBlaschke,
    singular: AtomicMeasure,
}

/// Text record: Blaschke phase and zeros plus the atom list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomicInnerRecord {
    pub blaschke: BlaschkeRecord,
    pub atoms: Vec<Atom>,
}

impl TryFrom<AtomicInnerRecord> for AtomicInnerFunction {
    type Error = Error;
    fn try_from(r: AtomicInnerRecord) -> Result<Self> {
        Ok(Self::new(r.blaschke.try_into()?, AtomicMeasure::new(r.atoms)?))
    }
}

impl From<AtomicInnerFunction> for AtomicInnerRecord {
    fn from(g: AtomicInnerFunction) -> Self {
        Self {
            blaschke: g.blaschke.into(),
            atoms: g.singular.atoms,
        }
    }
}

impl AtomicInnerFunction {
    pub fn new(blaschke: FiniteBlaschke, singular: AtomicMeasure) -> Self {
        Self { blaschke, singular }
    }

    /// `exp(iσ + c(z − 1)/(z + 1))`: rotation times one atom at `−1`.
    pub fn exponential_form(mass: f64, sigma: f64) -> Result<Self> {
        Ok(Self::new(
            FiniteBlaschke::rotation(sigma),
            AtomicMeasure::new(vec![Atom { theta: PI, mass }])?,
        ))
    }

    /// `e^{iσ} z exp(c(z − 1)/(z + 1))`.
    pub fn z_exponential_form(mass: f64, sigma: f64) -> Result<Self> {
        Ok(Self::new(
            FiniteBlaschke::new(sigma, vec![c(0.0, 0.0)])?,
            AtomicMeasure::new(vec![Atom { theta: PI, mass }])?,
        ))
    }

    /// `e^{iσ} exp(−c Σ_j (ω^j + z)/(ω^j − z))` with `ω = e^{2πi/q}`.
    pub fn power_exponential_form(q: usize, mass: f64, sigma: f64) -> Result<Self> {
        Ok(Self::new(
            FiniteBlaschke::rotation(sigma),
            AtomicMeasure::roots_of_unity(q, mass)?,
        ))
    }

    pub fn blaschke(&self) -> &FiniteBlaschke {
        &self.blaschke
    }

    pub fn singular(&self) -> &AtomicMeasure {
        &self.singular
    }

    /// Degree `p` of the Blaschke part.
    pub fn blaschke_degree(&self) -> usize {
        self.blaschke.degree()
    }

    /// Number `q` of atoms.
    pub fn atom_count(&self) -> usize {
        self.singular.len()
    }

    pub fn eval(&self, z: CPoint) -> Result<CPoint> {
        let s = self.singular.eval(z)?;
        Ok(self.blaschke.eval(z) * s)
    }
}

impl InnerFunction for AtomicInnerFunction {
    fn eval(&self, z: CPoint) -> Result<CPoint> {
        AtomicInnerFunction::eval(self, z)
    }
}

/// `g(z)` for `g = B · S`.
pub fn eval_atomic_inner(g: &AtomicInnerFunction, z: CPoint) -> Result<CPoint> {
    g.eval(z)
}

/// `(g(z) − ζ)/(1 − conj(ζ) g(z))`.
pub fn frostman_transform<G: InnerFunction + ?Sized>(g: &G, zeta: CPoint, z: CPoint) -> Result<CPoint> {
    if !(zeta.norm() < 1.0) {
        return Err(Error::Domain(format!("|ζ| = {} must be < 1", zeta.norm())));
    }
    let w = g.eval(z)?;
    Ok((w - zeta) / (1.0 - zeta.conj() * w))
}

/// A Frostman shift packaged as an inner function.
#[derive(Debug, Clone)]
pub struct FrostmanShift<G> {
    pub inner: G,
    pub zeta: CPoint,
}

impl<G: InnerFunction> InnerFunction for FrostmanShift<G> {
    fn eval(&self, z: CPoint) -> Result<CPoint> {
        frostman_transform(&self.inner, self.zeta, z)
    }
}
