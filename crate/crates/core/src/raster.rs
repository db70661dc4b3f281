//! Pixel classification of the dynamical plane and component counting on
//! the resulting label grids.
//!
//! Pixel `(i, j)` (column `i`, row `j`, row 0 at the top) samples the point
//! with real part `re0 + (i + ½)·Δx` and imaginary part `im1 − (j + ½)·Δy`.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entire::EntireFamily;
use crate::error::{Error, Result};
use crate::halfplane::{boundary_curve_theta, TanAtlas};
use crate::numerics::{c, ComplexMap, CPoint, Window, BAILOUT};

/// Largest accepted pixel count.
pub const MAX_PIXELS: usize = 100_000_000;
pub const DEFAULT_BUDGET: usize = 256;
pub const DEFAULT_ATTRACTION_RADIUS: f64 = 1e-6;
/// Components smaller than this trigger the undersampling warning.
pub const MIN_COMPONENT_PIXELS: usize = 10;

/// Pixel classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[repr(u8)]
pub enum Label {
    /// Iteration budget exhausted without a decision.
    Undecided = 0,
    /// Attracted to the target fixed point.
    Basin = 1,
    /// Left the bailout radius or produced a non-finite value.
    Escaping = 2,
    /// Mapped into the preimage disc in one step.
    Preimage = 3,
}

impl Label {
    pub fn from_u8(v: u8) -> Option<Self> {
        match v {
            0 => Some(Self::Undecided),
            1 => Some(Self::Basin),
            2 => Some(Self::Escaping),
            3 => Some(Self::Preimage),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Undecided => "undecided",
            Self::Basin => "basin",
            Self::Escaping => "escaping",
            Self::Preimage => "preimage",
        }
    }

    fn gray(&self) -> u8 {
        match self {
            Self::Undecided => 0,
            Self::Basin => 160,
            Self::Escaping => 255,
            Self::Preimage => 96,
        }
    }

    fn rgb(&self) -> [u8; 3] {
        match self {
            Self::Undecided => [0, 0, 0],
            Self::Basin => [150, 150, 150],
            Self::Escaping => [255, 255, 255],
            Self::Preimage => [70, 110, 200],
        }
    }
}

/// A window sampled at `width × height` pixels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub window: Window,
    pub width: usize,
    pub height: usize,
}

impl GridSpec {
    pub fn new(window: Window, width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidConfig("grid must have at least one pixel".into()));
        }
        if width.checked_mul(height).is_none_or(|n| n > MAX_PIXELS) {
            return Err(Error::InvalidConfig(format!(
                "{width}×{height} exceeds {MAX_PIXELS} pixels"
            )));
        }
        Ok(Self {
            window,
            width,
            height,
        })
    }

    pub fn pixel_center(&self, i: usize, j: usize) -> CPoint {
        let w = &self.window;
        let dx = w.width() / self.width as f64;
        let dy = w.height() / self.height as f64;
        c(w.re0 + (i as f64 + 0.5) * dx, w.im1 - (j as f64 + 0.5) * dy)
    }

    /// Same resolution over the window scaled by `factor` about its centre.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            window: self.window.scaled(factor),
            ..*self
        }
    }

    /// Same window at `factor` times the resolution.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            width: self.width * factor,
            height: self.height * factor,
            ..*self
        }
    }
}

/// An open disc `|z − center| < radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: CPoint,
    pub radius: f64,
}

impl Disc {
    pub fn contains(&self, z: CPoint) -> bool {
        (z - self.center).norm() < self.radius
    }
}

/// What a pixel is tested for. The preimage test runs first, then
/// iteration towards `target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Criteria {
    pub target: Option<CPoint>,
    pub attraction_radius: f64,
    pub budget: usize,
    pub bailout: f64,
    pub preimage: Option<Disc>,
}

impl Default for Criteria {
    fn default() -> Self {
        Self {
            target: None,
            attraction_radius: DEFAULT_ATTRACTION_RADIUS,
            budget: DEFAULT_BUDGET,
            bailout: BAILOUT,
            preimage: None,
        }
    }
}

impl Criteria {
    pub fn attraction(target: CPoint) -> Self {
        Self {
            target: Some(target),
            ..Self::default()
        }
    }

    pub fn with_preimage(mut self, disc: Disc) -> Self {
        self.preimage = Some(disc);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.attraction_radius > 0.0 && self.bailout > 0.0 && self.budget > 0) {
            return Err(Error::InvalidConfig(
                "attraction radius, bailout and budget must be positive".into(),
            ));
        }
        if let Some(d) = self.preimage {
            if !(d.radius > 0.0) {
                return Err(Error::InvalidConfig("preimage disc radius must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Label of a single point.
pub fn classify_point<M: ComplexMap + ?Sized>(f: &M, z0: CPoint, criteria: &Criteria) -> Label {
    if let Some(disc) = criteria.preimage {
        if matches!(f.value(z0), Ok(w) if disc.contains(w)) {
            return Label::Preimage;
        }
    }
    let mut z = z0;
    for _ in 0..criteria.budget {
        z = match f.value(z) {
            Ok(w) if w.norm() <= criteria.bailout => w,
            _ => return Label::Escaping,
        };
        if let Some(t) = criteria.target {
            if (z - t).norm() < criteria.attraction_radius {
                return Label::Basin;
            }
        }
    }
    Label::Undecided
}

/// Per-pixel labels in row-major order, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub spec: GridSpec,
    pub labels: Vec<Label>,
}

impl Grid {
    pub fn get(&self, i: usize, j: usize) -> Label {
        self.labels[j * self.spec.width + i]
    }

    pub fn fraction(&self, label: Label) -> f64 {
        self.labels.iter().filter(|&&l| l == label).count() as f64 / self.labels.len() as f64
    }

    /// Binary PGM (`P5`), one byte per pixel.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.spec.width, self.spec.height).into_bytes();
        out.extend(self.labels.iter().map(Label::gray));
        out
    }

    /// Binary PPM (`P6`), three bytes per pixel.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.spec.width, self.spec.height).into_bytes();
        for l in &self.labels {
            out.extend_from_slice(&l.rgb());
        }
        out
    }
}

/// Labels every pixel of `spec`; rows are classified in parallel.
pub fn classify_grid<M>(f: &M, spec: &GridSpec, criteria: &Criteria) -> Result<Grid>
where
    M: ComplexMap + Sync + ?Sized,
{
    criteria.validate()?;
    let labels: Vec<Label> = (0..spec.height)
        .into_par_iter()
        .flat_map_iter(|j| (0..spec.width).map(move |i| classify_point(f, spec.pixel_center(i, j), criteria)))
        .collect();
    Ok(Grid {
        spec: *spec,
        labels,
    })
}

/// A 4-connected component of one label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Component {
    pub pixels: usize,
    pub touches_frame: bool,
    /// 4-adjacent to a [`Label::Preimage`] pixel.
    pub anchored: bool,
    pub centroid: CPoint,
}

/// Result of [`count_unbounded_components`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentCount {
    pub label: Label,
    /// Components that count as unbounded.
    pub count: usize,
    pub components: Vec<Component>,
    /// Some counted component has fewer than [`MIN_COMPONENT_PIXELS`]
    /// pixels.
    pub resolution_warning: bool,
}

impl ComponentCount {
    pub fn counted(&self) -> impl Iterator<Item = &Component> {
        let anchoring = self.components.iter().any(|c| c.anchored);
        self.components
            .iter()
            .filter(move |c| c.touches_frame && (c.anchored || !anchoring))
    }

    /// CSV with one row per component.
    pub fn to_csv(&self) -> String {
        let anchoring = self.components.iter().any(|c| c.anchored);
        let mut out = String::from("label,pixels,touches_frame,anchored,counted,centroid_re,centroid_im\n");
        for c in &self.components {
            let counted = c.touches_frame && (c.anchored || !anchoring);
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.label.name(),
                c.pixels,
                c.touches_frame,
                c.anchored,
                counted,
                c.centroid.re,
                c.centroid.im
            ));
        }
        out
    }
}

/// Counts the components of `label` that touch the window frame.
///
/// When the grid contains preimage pixels, a frame-touching component
/// counts only if it also borders the preimage set: the frame cuts thin
/// fingers off the far part of a tract, and those fragments are not
/// attached to the preimage of the disc inside the window.
pub fn count_unbounded_components(grid: &Grid, label: Label) -> ComponentCount {
    let (w, h) = (grid.spec.width, grid.spec.height);
    let mut seen = vec![false; w * h];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..w * h {
        if seen[start] || grid.labels[start] != label {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let (mut pixels, mut touches_frame, mut anchored) = (0usize, false, false);
        let mut sum = c(0.0, 0.0);
        while let Some(p) = queue.pop_front() {
            let (i, j) = (p % w, p / w);
            pixels += 1;
            sum += grid.spec.pixel_center(i, j);
            touches_frame |= i == 0 || j == 0 || i + 1 == w || j + 1 == h;
            let mut visit = |q: usize| {
                let l = grid.labels[q];
                if l == Label::Preimage {
                    anchored = true;
                }
                if l == label && !seen[q] {
                    seen[q] = true;
                    queue.push_back(q);
                }
            };
            if i > 0 {
                visit(p - 1);
            }
            if i + 1 < w {
                visit(p + 1);
            }
            if j > 0 {
                visit(p - w);
            }
            if j + 1 < h {
                visit(p + w);
            }
        }
        components.push(Component {
            pixels,
            touches_frame,
            anchored: anchored && label != Label::Preimage,
            centroid: sum / pixels as f64,
        });
    }
    let mut out = ComponentCount {
        label,
        count: 0,
        components,
        resolution_warning: false,
    };
    let counted: Vec<usize> = out.counted().map(|c| c.pixels).collect();
    out.count = counted.len();
    out.resolution_warning = counted.iter().any(|&p| p < MIN_COMPONENT_PIXELS);
    out
}

/// Attracting fixed point, preimage disc and window for a tract count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TractSetup {
    pub family: EntireFamily,
    pub fixed_point: CPoint,
    pub disc: Disc,
    /// Largest distance from the disc centre to a singular value; the disc
    /// radius must exceed it.
    pub singular_reach: f64,
    pub spec: GridSpec,
}

impl TractSetup {
    /// `λ sin z`: disc of radius 0.8 about 0, window `[−4π, 4π] × [−4, 4]`.
    pub fn sine(lambda: f64, resolution: usize) -> Result<Self> {
        let family = EntireFamily::SineLambda { lambda };
        family.validate()?;
        let window = Window::new(-4.0 * std::f64::consts::PI, 4.0 * std::f64::consts::PI, -4.0, 4.0)?;
        Self::build(family, c(0.0, 0.0), 0.8, &[c(lambda, 0.0), c(-lambda, 0.0)], window, resolution)
    }

    /// `λ e^z` with `λ = τe^{−τ}` for real `τ ∈ (0, 1)`: disc of radius
    /// 0.75 about `τ`, window `[−6, 10] × [−8, 8]`.
    pub fn exponential(tau: f64, resolution: usize) -> Result<Self> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::Domain(format!("need 0 < τ < 1, got {tau}")));
        }
        let family = EntireFamily::ExpLambda {
            lambda: c(tau * (-tau).exp(), 0.0),
        };
        let window = Window::new(-6.0, 10.0, -8.0, 8.0)?;
        Self::build(family, c(tau, 0.0), 0.75, &[c(0.0, 0.0)], window, resolution)
    }

    /// `λ e^{z^q}` for small real `λ`: disc of radius 0.5 about the fixed
    /// point near `λ`, window `[−2, 2]²`.
    pub fn power_exponential(lambda: f64, q: u32, resolution: usize) -> Result<Self> {
        let family = EntireFamily::PowerExp {
            lambda: c(lambda, 0.0),
            q,
        };
        family.validate()?;
        let mut z = c(lambda, 0.0);
        for _ in 0..1000 {
            z = family.value(z)?;
        }
        let window = Window::new(-2.0, 2.0, -2.0, 2.0)?;
        // singular values: the asymptotic value 0 and the critical value λ
        Self::build(family, z, 0.5, &[c(0.0, 0.0), c(lambda, 0.0)], window, resolution)
    }

    fn build(
        family: EntireFamily,
        fixed_point: CPoint,
        radius: f64,
        singular_values: &[CPoint],
        window: Window,
        resolution: usize,
    ) -> Result<Self> {
        let m = family.derivative(fixed_point)?;
        if (family.value(fixed_point)? - fixed_point).norm() > 1e-12 || !(m.norm() < 1.0) {
            return Err(Error::Domain(format!("{fixed_point} is not an attracting fixed point")));
        }
        let singular_reach = singular_values
            .iter()
            .map(|s| (s - fixed_point).norm())
            .fold(0.0, f64::max);
        if singular_reach >= radius {
            return Err(Error::Domain(format!(
                "disc of radius {radius} misses a singular value at distance {singular_reach}"
            )));
        }
        let aspect = window.height() / window.width();
        let height = ((resolution as f64 * aspect).round() as usize).max(1);
        Ok(Self {
            family,
            fixed_point,
            disc: Disc {
                center: fixed_point,
                radius,
            },
            singular_reach,
            spec: GridSpec::new(window, resolution, height)?,
        })
    }

    pub fn criteria(&self) -> Criteria {
        Criteria::attraction(self.fixed_point).with_preimage(self.disc)
    }

    pub fn classify(&self) -> Result<Grid> {
        classify_grid(&self.family, &self.spec, &self.criteria())
    }

    /// Counts basin components outside the preimage of the disc.
    pub fn count(&self) -> Result<ComponentCount> {
        Ok(count_unbounded_components(&self.classify()?, Label::Basin))
    }

    pub fn with_spec(&self, spec: GridSpec) -> Self {
        Self { spec, ..*self }
    }
}

/// Tract counts at a base grid, at twice its resolution and on a window
/// 1.25 times larger.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub base: usize,
    pub refined: usize,
    pub enlarged: usize,
    pub resolution_warning: bool,
}

impl StabilityReport {
    pub fn stable(&self) -> bool {
        self.base == self.refined && self.base == self.enlarged
    }
}

pub fn tract_count_stability(setup: &TractSetup) -> Result<StabilityReport> {
    let base = setup.count()?;
    let refined = setup.with_spec(setup.spec.refined(2)).count()?;
    let enlarged = setup.with_spec(setup.spec.scaled(1.25)).count()?;
    Ok(StabilityReport {
        base: base.count,
        refined: refined.count,
        enlarged: enlarged.count,
        resolution_warning: base.resolution_warning || refined.resolution_warning || enlarged.resolution_warning,
    })
}

/// RGB image of an atlas: attracting-interior cells grey, others white, and
/// the cells crossed by `|b| = θ(a)` in red. Rows run from high `b` (top)
/// to low `b`.
pub fn atlas_image(atlas: &TanAtlas) -> Vec<u8> {
    let (na, nb) = (atlas.na, atlas.nb);
    let db = (atlas.b_range.1 - atlas.b_range.0) / nb as f64;
    let mut out = format!("P6\n{na} {nb}\n255\n").into_bytes();
    for row in 0..nb {
        let j = nb - 1 - row;
        for i in 0..na {
            let cell = &atlas.cells[j * na + i];
            let on_curve = boundary_curve_theta(cell.a)
                .map(|t| (cell.b.abs() - t).abs() <= 0.5 * db)
                .unwrap_or(false);
            let rgb = if on_curve {
                [200, 30, 30]
            } else if cell.solve_interior() {
                [150, 150, 150]
            } else {
                [255, 255, 255]
            };
            out.extend_from_slice(&rgb);
        }
    }
    out
}
