//! Inner functions dynamically associated to invariant Fatou components of
//! transcendental entire functions.
//!
//! The crate evaluates the explicit model maps on both sides of each
//! correspondence (entire families in the plane, Blaschke products and
//! singular inner functions in the disc, tangent and cotangent models in the
//! upper half-plane) and provides numerical verifiers that tie them together:
//! multiplier matching, Koenigs-chart invariants, parameter-plane
//! classification and raster counts of tracts.
//!
//! Module map:
//!
//! * [`numerics`]: overflow-safe `tan`/`cot`, Newton, bracketing, orbits.
//! * [`blaschke`]: finite and certified-truncation infinite Blaschke products.
//! * [`inner_factor`]: atomic singular inner functions and Frostman shifts.
//! * [`halfplane`]: `a·tan z + b` and `z − λ·cot(z)/2`.
//! * [`entire`]: the entire families, their critical points and Koenigs charts.
//! * [`correspondence`]: pairing reports.
//! * [`raster`]: escape/attraction rasters and tract counting.
//! * [`cli`]: argument model and subcommand drivers for the binary.

// Guards like `!(x > 0.0)` are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blaschke;
pub mod cli;
pub mod correspondence;
pub mod entire;
pub mod error;
pub mod halfplane;
pub mod inner_factor;
pub mod numerics;
pub mod raster;

pub use error::{Error, Result};
pub use numerics::CPoint;
