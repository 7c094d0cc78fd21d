//! Adaptive Gauss-Kronrod (G7/K15) quadrature of complex-valued functions.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64 as C64;

use super::OracleError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct GkResult {
    pub value: C64,
    pub error: f64,
    /// Integral of `|f|`; the scale of roundoff.
    pub resabs: f64,
    pub panels: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// The 15 Kronrod abscissae mapped to `[a, b]`.
pub fn nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [0.0; 15];
    for j in 0..7 {
        out[2 * j] = c - h * XGK[j];
        out[2 * j + 1] = c + h * XGK[j];
    }
    out[14] = c;
    out
}

fn rule(a: f64, b: f64, f: &[C64]) -> Panel {
    let h = 0.5 * (b - a);
    let mut k = f[14] * WGK[7];
    let mut g = f[14] * WG[3];
    let mut abs = f[14].norm() * WGK[7];
    for j in 0..7 {
        let pair = f[2 * j] + f[2 * j + 1];
        k += pair * WGK[j];
        abs += (f[2 * j].norm() + f[2 * j + 1].norm()) * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    let value = k * h;
    let error = ((k - g) * h).norm();
    Panel { a, b, value, error, resabs: abs * h.abs() }
}

fn panel<F>(f: &F, a: f64, b: f64) -> Result<Panel, OracleError>
where
    F: Fn(&[f64]) -> Result<Vec<C64>, OracleError>,
{
    let xs = nodes(a, b);
    let vals = f(&xs)?;
    if vals.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(OracleError::NonFinite { at: a.min(b) });
    }
    Ok(rule(a, b, &vals))
}

/// Globally adaptive integration of `f` (evaluated in batches of 15 nodes) over `[a, b]`.
pub fn adaptive<F>(f: &F, a: f64, b: f64, tol: Tolerance, max_panels: usize) -> Result<GkResult, OracleError>
where
    F: Fn(&[f64]) -> Result<Vec<C64>, OracleError>,
{
    let first = panel(f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut resabs = first.resabs;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut panels = 1;
    loop {
        let target = tol.abs.max(tol.rel * value.norm()).max(64.0 * f64::EPSILON * resabs);
        if error <= target {
            break;
        }
        if panels >= max_panels {
            return Err(OracleError::Budget { panels, error, target });
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval exhausted in floating point; accept what we have.
            heap.push(Panel { error: 0.0, ..worst });
            error -= worst.error;
            if heap.iter().all(|p| p.error == 0.0) {
                break;
            }
            continue;
        }
        let left = panel(f, worst.a, mid)?;
        let right = panel(f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        panels += 1;
        if panels % 64 == 0 {
            // Re-sum to shed accumulated cancellation error in the running totals.
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(GkResult { value, error: error.max(0.0), resabs, panels })
}

/// Evaluate a scalar function at each node.
pub fn pointwise<G>(g: G) -> impl Fn(&[f64]) -> Result<Vec<C64>, OracleError>
where
    G: Fn(f64) -> Result<C64, OracleError>,
{
    move |xs: &[f64]| xs.iter().map(|&x| g(x)).collect()
}

/// Evaluate a scalar function at each node in parallel.
pub fn parallel<G>(g: G) -> impl Fn(&[f64]) -> Result<Vec<C64>, OracleError>
where
    G: Fn(f64) -> Result<C64, OracleError> + Sync,
{
    use rayon::prelude::*;
    move |xs: &[f64]| xs.par_iter().map(|&x| g(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_peaked_integrands() {
        let tol = Tolerance { abs: 1e-13, rel: 1e-13 };
        let f = pointwise(|x: f64| Ok(C64::new(x * x, 0.0)));
        let r = adaptive(&f, 0.0, 3.0, tol, 100).unwrap();
        assert!((r.value.re - 9.0).abs() < 1e-12);
        let g = pointwise(|x: f64| Ok(C64::new(0.0, 1.0) / C64::new(x, 1e-3)));
        let r = adaptive(&g, -1.0, 2.0, Tolerance { abs: 1e-10, rel: 1e-10 }, 2000).unwrap();
        // i * (log|2+..| - log|-1+..| + i(arg)) with small offset
        let exact = C64::new(0.0, 1.0) * (C64::new(2.0, 1e-3).ln() - C64::new(-1.0, 1e-3).ln());
        assert!((r.value - exact).norm() < 1e-9);
    }

    #[test]
    fn budget_is_reported() {
        let f = pointwise(|x: f64| Ok(C64::new((1.0 / (x + 1e-300)).sin(), 0.0)));
        let err = adaptive(&f, 0.0, 1.0, Tolerance { abs: 1e-14, rel: 1e-14 }, 8).unwrap_err();
        assert!(matches!(err, OracleError::Budget { .. }));
    }
}
