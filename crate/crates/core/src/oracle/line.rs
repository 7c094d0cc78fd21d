//! Integrals over the real line of one-variable slices, by contour deformation.
//!
//! Each frequency group `e^{i beta t} R(t)` with `beta >= 0` is integrated over a
//! U-shaped path: down the left ray `Re t = a`, along the floor `Im t = h`, up the
//! right ray `Re t = b`. The path is homotopic to the real axis in the slit plane and
//! keeps a fixed distance from every pole.

use num_complex::Complex64 as C64;

use super::fast::Slice1D;
use super::gk::{adaptive, pointwise, GkResult, Tolerance};
use super::OracleError;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn add(acc: &mut GkResult, r: GkResult, factor: C64) {
    acc.value += r.value * factor;
    acc.error += r.error;
    acc.resabs += r.resabs;
    acc.panels += r.panels;
}

/// Disjoint intervals `[a, b]` covering the real parts of `poles` with `margin` to spare.
fn wells(poles: &[C64], margin: f64) -> Vec<(f64, f64)> {
    let mut re: Vec<f64> = poles.iter().map(|p| p.re).collect();
    re.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, f64)> = Vec::new();
    for x in re {
        match out.last_mut() {
            Some(last) if x - margin <= last.1 => last.1 = last.1.max(x + margin),
            _ => out.push((x - margin, x + margin)),
        }
    }
    out
}

/// `int_R s(t) dt` to relative tolerance `tol`.
pub fn line_integral(s: &Slice1D, tol: f64, max_panels: usize) -> Result<GkResult, OracleError> {
    let mut total = GkResult { value: C64::new(0.0, 0.0), error: 0.0, resabs: 0.0, panels: 0 };
    for (omega, idx) in s.frequency_groups() {
        if omega.re.abs() > 1e-12 * (1.0 + omega.norm()) {
            return Err(OracleError::NonDecaying(format!("exponential rate {omega} has a real part")));
        }
        let sigma = if omega.im < 0.0 { -1.0 } else { 1.0 };
        let beta = omega.im.abs();
        let terms: Vec<_> = idx.iter().map(|&i| &s.terms[i]).collect();
        let degree = terms.iter().map(|t| t.degree()).max().unwrap_or(i64::MIN);
        let needed = if beta > 0.0 { -1 } else { -2 };
        if degree > needed {
            return Err(OracleError::NonDecaying(format!("rational part of degree {degree} with frequency {beta}")));
        }
        let poles: Vec<C64> = terms.iter().flat_map(|t| t.poles()).map(|p| p * sigma).collect();
        if let Some(p) = poles.iter().find(|p| p.im.abs() <= 1e-12 * (1.0 + p.norm())) {
            return Err(OracleError::PoleOnContour(format!("pole at {p}")));
        }
        let upper: Vec<C64> = poles.iter().copied().filter(|p| p.im > 0.0).collect();
        if upper.is_empty() {
            continue;
        }
        let min_up = upper.iter().map(|p| p.im).fold(f64::INFINITY, f64::min);
        let max_up = upper.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max);
        let max_low = poles.iter().map(|p| p.im).filter(|&y| y < 0.0).fold(min_up - 2.0, f64::max);
        let delta = (0.5 * (min_up - max_low)).min(3.0 / beta).min(1.0);
        let h = min_up - delta;
        let margin = (max_up - h).max(1.0);
        let g = |t: C64| -> C64 { terms.iter().map(|term| term.eval(t * sigma)).sum() };
        let tolerance = Tolerance { abs: 1e-300, rel: tol };
        let scale = if beta > 0.0 { 1.0 / beta } else { 1.0 + h.abs() };
        for (a, b) in wells(&upper, margin) {
            let floor = pointwise(|x: f64| Ok(g(C64::new(x, h))));
            add(&mut total, adaptive(&floor, a, b, tolerance, max_panels)?, C64::new(1.0, 0.0));
            for (base, sign) in [(b, 1.0), (a, -1.0)] {
                let ray = pointwise(|s: f64| {
                    let u = scale * s / (1.0 - s);
                    let jac = scale / ((1.0 - s) * (1.0 - s));
                    let v = g(C64::new(base, h + u)) * jac;
                    Ok(if v.re.is_finite() && v.im.is_finite() { v } else { C64::new(0.0, 0.0) })
                });
                add(&mut total, adaptive(&ray, 0.0, 1.0, tolerance, max_panels)?, I * sign);
            }
        }
    }
    Ok(total)
}
