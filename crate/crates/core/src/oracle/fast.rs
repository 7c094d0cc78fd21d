//! Double-precision evaluation of [`ExpRationalFunction`]s for quadrature.

use num_complex::Complex64 as C64;

use crate::symfun::ExpRationalFunction;

#[derive(Clone, Debug)]
struct FastFactor {
    linear: Vec<f64>,
    constant: C64,
    mult: u32,
}

#[derive(Clone, Debug)]
struct FastTerm {
    coeff: C64,
    monomials: Vec<(Vec<u32>, C64)>,
    exp_linear: Vec<C64>,
    exp_constant: C64,
    denoms: Vec<FastFactor>,
}

/// A compiled copy of an [`ExpRationalFunction`] in `f64` arithmetic.
#[derive(Clone, Debug)]
pub struct FastFunction {
    arity: usize,
    terms: Vec<FastTerm>,
}

fn powu(z: C64, k: u32) -> C64 {
    if k == 0 {
        C64::new(1.0, 0.0)
    } else {
        z.powu(k)
    }
}

impl FastFunction {
    pub fn compile(f: &ExpRationalFunction) -> Self {
        let terms = f
            .terms()
            .iter()
            .map(|t| FastTerm {
                coeff: t.coeff.to_c64(),
                monomials: t.poly.monomials().map(|(e, c)| (e.clone(), c.to_c64())).collect(),
                exp_linear: t.exp.linear.iter().map(|c| c.to_c64()).collect(),
                exp_constant: t.exp.constant.to_c64(),
                denoms: t
                    .denoms
                    .iter()
                    .map(|d| FastFactor {
                        linear: d.form.linear.iter().map(|q| q.to_f64()).collect(),
                        constant: d.form.constant.to_c64(),
                        mult: d.mult,
                    })
                    .collect(),
            })
            .collect();
        Self { arity: f.arity(), terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for t in &self.terms {
            let mut p = C64::new(0.0, 0.0);
            for (e, c) in &t.monomials {
                let mut m = *c;
                for (zi, &k) in z.iter().zip(e) {
                    m *= powu(*zi, k);
                }
                p += m;
            }
            let mut expo = t.exp_constant;
            for (l, zi) in t.exp_linear.iter().zip(z) {
                expo += l * zi;
            }
            let mut v = t.coeff * p * expo.exp();
            for d in &t.denoms {
                let mut g = d.constant;
                for (a, zi) in d.linear.iter().zip(z) {
                    g += zi * *a;
                }
                v /= powu(g, d.mult);
            }
            acc += v;
        }
        acc
    }

    /// Fix every variable except `var` at `values[..]` (the entry at `var` is ignored).
    pub fn slice(&self, values: &[C64], var: usize) -> Slice1D {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut rest = t.exp_constant;
                for (l, (j, v)) in t.exp_linear.iter().zip(values.iter().enumerate()) {
                    if j != var {
                        rest += l * v;
                    }
                }
                let mut scale = t.coeff * rest.exp();
                let mut factors = Vec::new();
                for d in &t.denoms {
                    let mut b = d.constant;
                    for (j, (a, v)) in d.linear.iter().zip(values).enumerate() {
                        if j != var {
                            b += v * *a;
                        }
                    }
                    let a = d.linear[var];
                    if a == 0.0 {
                        scale /= powu(b, d.mult);
                    } else {
                        factors.push((a, b, d.mult));
                    }
                }
                let degree = t.monomials.iter().map(|(e, _)| e[var] as usize).max().unwrap_or(0);
                let mut poly = vec![C64::new(0.0, 0.0); degree + 1];
                for (e, c) in &t.monomials {
                    let mut m = *c * scale;
                    for (j, (v, &k)) in values.iter().zip(e).enumerate() {
                        if j != var {
                            m *= powu(*v, k);
                        }
                    }
                    poly[e[var] as usize] += m;
                }
                SliceTerm { poly, omega: t.exp_linear[var], factors }
            })
            .collect();
        Slice1D { terms }
    }
}

/// `poly(t) exp(omega t) / prod (a t + b)^m`.
#[derive(Clone, Debug)]
pub struct SliceTerm {
    pub poly: Vec<C64>,
    pub omega: C64,
    pub factors: Vec<(f64, C64, u32)>,
}

impl SliceTerm {
    pub fn eval(&self, t: C64) -> C64 {
        let mut p = C64::new(0.0, 0.0);
        for c in self.poly.iter().rev() {
            p = p * t + c;
        }
        let mut v = p * (self.omega * t).exp();
        for &(a, b, m) in &self.factors {
            v /= powu(t * a + b, m);
        }
        v
    }

    pub fn poles(&self) -> impl Iterator<Item = C64> + '_ {
        self.factors.iter().map(|&(a, b, _)| -b / a)
    }

    /// Degree of the rational part: `deg poly - sum m`.
    pub fn degree(&self) -> i64 {
        let top = self.poly.iter().rposition(|c| *c != C64::new(0.0, 0.0)).unwrap_or(0) as i64;
        top - self.factors.iter().map(|f| i64::from(f.2)).sum::<i64>()
    }
}

/// A function of one complex variable: a sum of [`SliceTerm`]s.
#[derive(Clone, Debug)]
pub struct Slice1D {
    pub terms: Vec<SliceTerm>,
}

impl Slice1D {
    pub fn eval(&self, t: C64) -> C64 {
        self.terms.iter().map(|s| s.eval(t)).sum()
    }

    /// Term indices grouped by equal frequency `omega`.
    pub fn frequency_groups(&self) -> Vec<(C64, Vec<usize>)> {
        let mut groups: Vec<(C64, Vec<usize>)> = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            let w = t.omega;
            match groups.iter_mut().find(|(g, _)| (g - w).norm() <= 1e-12 * (1.0 + w.norm())) {
                Some((_, idx)) => idx.push(i),
                None => groups.push((w, vec![i])),
            }
        }
        groups
    }
}
