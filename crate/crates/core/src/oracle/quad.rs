//! Direct quadrature of `int_{R^r} h(x) dx / prod g_k(x)^{m_k}`.
//!
//! The innermost variable is integrated by [`line_integral`]; each outer variable is
//! integrated over `[-T, T]` and then over doubling shells `T <= |x| <= 2T, ...`,
//! with a geometric-tail extrapolation when the shell contributions settle into a ratio.

use num_complex::Complex64 as C64;

use super::fast::FastFunction;
use super::gk::{adaptive, parallel, pointwise, GkResult, Tolerance};
use super::line::line_integral;
use super::OracleError;
use crate::arrangement::Arrangement;
use crate::scalar::ComplexScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureReport {
    pub estimate: ComplexScalar,
    pub error_bound: f64,
    pub box_halfwidth: f64,
    /// Gauss-Kronrod nodes spent along the outermost axis (`r` = 1: the line integral).
    pub nodes_per_axis: usize,
    /// Magnitude of the part of the estimate attributed to `|x_1| > T`.
    pub tail_estimate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub box_halfwidth: f64,
    pub tol: f64,
    /// Panel budget of each adaptive call.
    pub max_panels: usize,
    pub max_doublings: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { box_halfwidth: 50.0, tol: 1e-6, max_panels: 4096, max_doublings: 30 }
    }
}

#[derive(Clone, Copy, Debug)]
struct Level {
    value: C64,
    error: f64,
    panels: usize,
    tail: f64,
}

fn shells<F>(f: &F, opts: &QuadOptions, tol: f64) -> Result<Level, OracleError>
where
    F: Fn(&[f64]) -> Result<Vec<C64>, OracleError>,
{
    let t = opts.box_halfwidth;
    let core = adaptive(f, -t, t, Tolerance { abs: 1e-300, rel: tol }, opts.max_panels)?;
    let mut sum = core.value;
    let mut error = core.error;
    let mut panels = core.panels;
    let mut tail = C64::new(0.0, 0.0);
    let mut prev: Option<C64> = None;
    let mut prev_ext: Option<C64> = None;
    let mut small_streak = 0;
    let mut y = t;
    for _ in 0..opts.max_doublings {
        let target = Tolerance { abs: 0.25 * tol * sum.norm(), rel: tol };
        let shell = |a: f64, b: f64| -> Result<GkResult, OracleError> { adaptive(f, a, b, target, opts.max_panels) };
        let left = shell(-2.0 * y, -y)?;
        let right = shell(y, 2.0 * y)?;
        let p = left.value + right.value;
        sum += p;
        tail += p;
        error += left.error + right.error;
        panels += left.panels + right.panels;
        y *= 2.0;

        if p.norm() <= tol * sum.norm() {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(Level { value: sum, error: error + p.norm(), panels, tail: tail.norm() + p.norm() });
            }
        } else {
            small_streak = 0;
        }
        if let Some(q) = prev {
            let rho = p / q;
            if q.norm() > 0.0 && rho.im.abs() < 0.1 && rho.re > 0.05 && rho.re < 0.75 {
                let rest = p * rho / (C64::new(1.0, 0.0) - rho);
                let ext = sum + rest;
                if let Some(e) = prev_ext {
                    if (ext - e).norm() <= tol * ext.norm() {
                        let gap = (ext - e).norm();
                        return Ok(Level {
                            value: ext,
                            error: error + gap + rest.norm() * 1e-3,
                            panels,
                            tail: (tail + rest).norm(),
                        });
                    }
                }
                prev_ext = Some(ext);
            } else {
                prev_ext = None;
            }
        }
        prev = Some(p);
    }
    Err(OracleError::Budget { panels, error: prev.map_or(f64::INFINITY, |p| p.norm()), target: tol * sum.norm() })
}

struct Integrand<'a> {
    fast: &'a FastFunction,
    opts: QuadOptions,
}

impl Integrand<'_> {
    /// Integral over `x_k, ..., x_{r-1}` with `x_0..x_{k-1}` fixed at `prefix`.
    fn level(&self, prefix: &[f64], tol: f64) -> Result<Level, OracleError> {
        let r = self.fast.arity();
        let k = prefix.len();
        if k + 1 == r {
            let mut values: Vec<C64> = prefix.iter().map(|&x| C64::new(x, 0.0)).collect();
            values.push(C64::new(0.0, 0.0));
            let s = self.fast.slice(&values, r - 1);
            let res = line_integral(&s, tol, self.opts.max_panels)?;
            return Ok(Level { value: res.value, error: res.error, panels: res.panels, tail: 0.0 });
        }
        let inner_tol = tol / 100.0;
        let g = |x: f64| -> Result<C64, OracleError> {
            let mut p = prefix.to_vec();
            p.push(x);
            Ok(self.level(&p, inner_tol)?.value)
        };
        if k == 0 {
            shells(&parallel(g), &self.opts, tol)
        } else {
            shells(&pointwise(g), &self.opts, tol)
        }
    }
}

/// [`quad_integral_with`] with the default budgets.
pub fn quad_integral(a: &Arrangement, box_halfwidth: f64, tol: f64) -> Result<QuadratureReport, OracleError> {
    quad_integral_with(a, &QuadOptions { box_halfwidth, tol, ..QuadOptions::default() })
}

/// Numerical value of `int_{R^r} omega` in the ambient coordinates.
pub fn quad_integral_with(a: &Arrangement, opts: &QuadOptions) -> Result<QuadratureReport, OracleError> {
    let r = a.dimension();
    if r == 0 || r > 3 {
        return Err(OracleError::Unsupported(format!("quadrature in dimension {r}")));
    }
    let integrand = a.integrand()?;
    for t in integrand.terms() {
        if t.exp.linear.iter().any(|l| l.re_f64() != 0.0) {
            return Err(OracleError::NonDecaying("exponential factor with a real linear part".into()));
        }
    }
    let fast = FastFunction::compile(&integrand);
    let level = Integrand { fast: &fast, opts: *opts }.level(&[], opts.tol)?;
    Ok(QuadratureReport {
        estimate: ComplexScalar::from_c64(level.value, a.precision()),
        error_bound: level.error.max(0.0),
        box_halfwidth: opts.box_halfwidth,
        nodes_per_axis: 15 * level.panels,
        tail_estimate: level.tail.max(0.0),
    })
}
