//! Independent numerical checks: direct quadrature over `R^r`, semicircle arc
//! integrals, and torus-cycle residues.

mod diagnostics;
mod fast;
pub mod gk;
mod line;
mod quad;
mod semicircle;
mod torus;

pub use diagnostics::{expansion_diagnostics, ExpansionStep};
pub use fast::{FastFunction, Slice1D, SliceTerm};
pub use line::line_integral;
pub use quad::{quad_integral, quad_integral_with, QuadOptions, QuadratureReport};
pub use semicircle::{semicircle_check, HalfPlane, SemicircleReport, Trend};
pub use torus::{default_radii, torus_residue, TORUS_NODES};

use thiserror::Error;

use crate::arrangement::ArrangementError;
use crate::symfun::SymfunError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Symfun(#[from] SymfunError),
    #[error("integrand does not decay along the real axis: {0}")]
    NonDecaying(String),
    #[error("quadrature budget exhausted after {panels} panels (error {error:.3e}, target {target:.3e})")]
    Budget { panels: usize, error: f64, target: f64 },
    #[error("non-finite integrand value near {at}")]
    NonFinite { at: f64 },
    #[error("pole on the integration contour: {0}")]
    PoleOnContour(String),
    #[error("pole on the arc of radius {0}")]
    PoleOnArc(f64),
    #[error("hyperplane H{0} meets the torus")]
    ForeignPoleInsideTorus(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
