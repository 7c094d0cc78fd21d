//! Arc integrals `int_{C_R} F(z) dz` over centered half-circles.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::fast::FastFunction;
use super::gk::{adaptive, pointwise, Tolerance};
use super::OracleError;
use crate::symfun::ExpRationalFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Decaying,
    Growing,
    Inconclusive,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::Decaying => "decaying",
            Trend::Growing => "growing",
            Trend::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SemicircleReport {
    /// `(R, int_{C_R} F dz)`; `R` may be perturbed away from a pole.
    pub arcs: Vec<(f64, C64)>,
    pub trend: Trend,
}

impl SemicircleReport {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.arcs.iter().map(|(_, v)| v.norm()).collect()
    }
}

fn pole_near(f: &FastFunction, radius: f64) -> bool {
    let s = f.slice(&[C64::new(0.0, 0.0)], 0);
    s.terms.iter().flat_map(|t| t.poles().collect::<Vec<_>>()).any(|p| (p.norm() - radius).abs() <= 1e-9 * radius)
}

fn arc(f: &FastFunction, radius: f64, half: HalfPlane) -> Result<C64, OracleError> {
    let (lo, hi) = match half {
        HalfPlane::Upper => (0.0, PI),
        HalfPlane::Lower => (PI, 2.0 * PI),
    };
    let g = pointwise(|phi: f64| {
        let z = C64::from_polar(radius, phi);
        let v = f.eval(&[z]) * z * C64::new(0.0, 1.0);
        Ok(if v.re.is_nan() || v.im.is_nan() { C64::new(f64::INFINITY, 0.0) } else { v })
    });
    match adaptive(&g, lo, hi, Tolerance { abs: 1e-300, rel: 1e-8 }, 2048) {
        Ok(r) => Ok(r.value),
        Err(OracleError::NonFinite { .. }) => Ok(C64::new(f64::INFINITY, 0.0)),
        Err(OracleError::Budget { .. }) => {
            // Very large or wildly oscillating arcs: report the magnitude scale instead.
            let mut peak: f64 = 0.0;
            for k in 0..=4096 {
                let phi = lo + (hi - lo) * k as f64 / 4096.0;
                let z = C64::from_polar(radius, phi);
                peak = peak.max((f.eval(&[z]) * z).norm());
            }
            Ok(C64::new(peak, 0.0))
        }
        Err(e) => Err(e),
    }
}

/// Arc integrals at each radius (counterclockwise in the chosen half-plane) and their trend.
pub fn semicircle_check(
    f: &ExpRationalFunction,
    radii: &[f64],
    half: HalfPlane,
) -> Result<SemicircleReport, OracleError> {
    if f.arity() != 1 {
        return Err(OracleError::Unsupported(format!("semicircle check of a function of {} variables", f.arity())));
    }
    let fast = FastFunction::compile(f);
    let mut arcs = Vec::with_capacity(radii.len());
    for &r0 in radii {
        let mut radius = r0;
        if pole_near(&fast, radius) {
            radius *= 1.01;
            if pole_near(&fast, radius) {
                return Err(OracleError::PoleOnArc(r0));
            }
        }
        arcs.push((radius, arc(&fast, radius, half)?));
    }
    let mags: Vec<f64> = arcs.iter().map(|(_, v)| v.norm()).collect();
    let trend = classify(&mags);
    Ok(SemicircleReport { arcs, trend })
}

fn classify(mags: &[f64]) -> Trend {
    if mags.iter().any(|m| !m.is_finite()) {
        return Trend::Growing;
    }
    let (Some(&first), Some(&last)) = (mags.first(), mags.last()) else {
        return Trend::Inconclusive;
    };
    if mags.len() < 2 {
        return Trend::Inconclusive;
    }
    let monotone_down = mags.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    let monotone_up = mags.windows(2).all(|w| w[1] >= 0.9 * w[0]);
    if monotone_down && last < 0.5 * first {
        Trend::Decaying
    } else if monotone_up && last > 2.0 * first {
        Trend::Growing
    } else {
        Trend::Inconclusive
    }
}
