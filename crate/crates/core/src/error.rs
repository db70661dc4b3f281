use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {z} is within {distance:e} of a pole")]
    PoleProximity { z: Complex64, distance: f64 },

    #[error("orbit hit a pole at step {step} (z = {z})")]
    PoleHit { step: usize, z: Complex64 },

    #[error("no convergence after {iterations} iterations (last iterate {last}, residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        last: Complex64,
        residual: f64,
    },

    #[error("derivative vanishes at {z}")]
    DerivativeVanishes { z: Complex64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("requested accuracy {requested:e} needs truncation beyond cap {cap}")]
    AccuracyUnreachable { requested: f64, cap: usize },

    #[error("point {z} is within {distance:e} of an atom of the singular measure")]
    AtomProximity { z: Complex64, distance: f64 },

    #[error("solution (a, b) = ({a}, {b}) lies outside the attracting region")]
    OutsideRegion { a: f64, b: f64 },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("a zero lies within {distance:e} of the window boundary near {z}")]
    WindowBoundaryZero { z: Complex64, distance: f64 },

    #[error("orbit of {z} does not converge to the fixed point")]
    NotInBasin { z: Complex64 },

    #[error("orbit of critical point {z} escapes the basin")]
    BasinEscape { z: Complex64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite value while evaluating at {z}")]
    NonFinite { z: Complex64 },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
