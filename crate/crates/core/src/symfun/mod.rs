//! The class of functions `sum c * P(z) * exp(L(z)) / prod A_i(z)^m_i`.
//!
//! Denominator factors have rational linear parts, so proportionality of factors is
//! decided exactly on the linear part and by a relative tolerance on the constant.

mod affine;
mod poly;

pub use affine::{Affine, ExpAffine};
pub use poly::Polynomial;

use rug::Rational;
use thiserror::Error;

use crate::exact_linalg::RationalMatrix;
use crate::scalar::ComplexScalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymfunError {
    #[error("denominator factor vanishes identically after substitution")]
    IdenticallyZeroDenominator,
    #[error("evaluation point lies on a pole (|factor| = {magnitude:e})")]
    PoleHit { magnitude: f64 },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
}

/// A denominator factor `form^mult`; `form` has leading linear coefficient 1.
#[derive(Clone, Debug)]
pub struct Factor {
    pub form: Affine,
    pub mult: u32,
    /// Magnitude of the summands that produced `form.constant`; scale for zero tests.
    pub scale: f64,
}

impl PartialEq for Factor {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form && self.mult == other.mult
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: ComplexScalar,
    pub poly: Polynomial,
    pub exp: ExpAffine,
    pub denoms: Vec<Factor>,
}

impl Term {
    pub fn arity(&self) -> usize {
        self.poly.nvars()
    }

    pub fn evaluate(&self, point: &[ComplexScalar], tol: f64) -> Result<ComplexScalar, SymfunError> {
        let mut v = &self.coeff * self.poly.evaluate(point);
        if !self.exp.is_zero() {
            v = v * self.exp.evaluate(point).exp();
        }
        for f in &self.denoms {
            let d = f.form.evaluate(point);
            let scale = f.form.magnitude(point).max(f.scale);
            if d.abs_f64() <= tol * scale {
                return Err(SymfunError::PoleHit { magnitude: d.abs_f64() });
            }
            v = v / d.powu(f.mult);
        }
        Ok(v)
    }

    /// Total denominator multiplicity.
    pub fn denominator_degree(&self) -> u32 {
        self.denoms.iter().map(|f| f.mult).sum()
    }
}

/// Bring raw factors `(form, mult, scale)` into normal form: leading coefficient 1,
/// constants absorbed into `coeff`, proportional factors merged.
fn normalize_factors(
    mut coeff: ComplexScalar,
    raw: Vec<(Affine, u32, f64)>,
    tol: f64,
) -> Result<(ComplexScalar, Vec<Factor>), SymfunError> {
    let mut out: Vec<Factor> = Vec::with_capacity(raw.len());
    for (form, mult, scale) in raw {
        if mult == 0 {
            continue;
        }
        let Some((lead, norm)) = form.normalized() else {
            if form.constant.abs_f64() <= tol * scale.max(f64::MIN_POSITIVE) {
                return Err(SymfunError::IdenticallyZeroDenominator);
            }
            coeff = coeff / form.constant.powu(mult);
            continue;
        };
        if lead != 1 {
            coeff = coeff.div_rational(&lead.clone().pow(mult));
        }
        let lead_abs = lead.to_f64().abs();
        let scale = (scale / lead_abs).max(norm.constant.abs_f64());
        match out.iter_mut().find(|f| {
            f.form.linear == norm.linear && (&f.form.constant - &norm.constant).abs_f64() <= tol * f.scale.max(scale)
        }) {
            Some(f) => f.mult += mult,
            None => out.push(Factor { form: norm, mult, scale }),
        }
    }
    Ok((coeff, out))
}

trait RationalPow {
    fn pow(self, k: u32) -> Rational;
}

impl RationalPow for Rational {
    fn pow(self, k: u32) -> Rational {
        let mut acc = Rational::from(1);
        for _ in 0..k {
            acc *= &self;
        }
        acc
    }
}

/// A finite sum of [`Term`]s in `arity` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpRationalFunction {
    arity: usize,
    prec: u32,
    terms: Vec<Term>,
}

impl ExpRationalFunction {
    pub fn zero(arity: usize, prec: u32) -> Self {
        Self { arity, prec, terms: Vec::new() }
    }

    pub fn constant(c: ComplexScalar, arity: usize) -> Self {
        let prec = c.precision();
        Self::polynomial(Polynomial::constant(c, arity)).with_precision_tag(prec)
    }

    fn with_precision_tag(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn polynomial(p: Polynomial) -> Self {
        let arity = p.nvars();
        let prec = p.precision();
        let mut f = Self::zero(arity, prec);
        if !p.is_zero() {
            f.terms.push(Term {
                coeff: ComplexScalar::one(prec),
                poly: p,
                exp: ExpAffine::zero(arity, prec),
                denoms: Vec::new(),
            });
        }
        f
    }

    /// `exp(L)`.
    pub fn exponential(l: ExpAffine) -> Self {
        let arity = l.arity();
        let prec = l.constant.precision();
        Self {
            arity,
            prec,
            terms: vec![Term {
                coeff: ComplexScalar::one(prec),
                poly: Polynomial::one(arity, prec),
                exp: l,
                denoms: Vec::new(),
            }],
        }
    }

    /// A single term; factors are normalized.
    pub fn from_term(
        coeff: ComplexScalar,
        poly: Polynomial,
        exp: ExpAffine,
        denoms: Vec<(Affine, u32)>,
    ) -> Result<Self, SymfunError> {
        let arity = poly.nvars();
        let prec = coeff.precision();
        let tol = ComplexScalar::tolerance(prec);
        let raw = denoms
            .into_iter()
            .map(|(a, m)| {
                let s = a.constant.abs_f64();
                (a, m, s)
            })
            .collect();
        let (coeff, denoms) = normalize_factors(coeff, raw, tol)?;
        let mut f = Self { arity, prec, terms: vec![Term { coeff, poly, exp, denoms }] };
        f.normalize();
        Ok(f)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn tol(&self) -> f64 {
        ComplexScalar::tolerance(self.prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity, "arity mismatch in add");
        let mut out = self.clone();
        out.prec = self.prec.max(other.prec);
        out.terms.extend(other.terms.iter().cloned());
        out.normalize();
        out
    }

    pub fn scale(&self, c: &ComplexScalar) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.terms.clear();
            return out;
        }
        for t in &mut out.terms {
            t.coeff = &t.coeff * c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SymfunError> {
        assert_eq!(self.arity, other.arity, "arity mismatch in mul");
        let tol = self.tol();
        let mut out = Self::zero(self.arity, self.prec.max(other.prec));
        for a in &self.terms {
            for b in &other.terms {
                let raw = a.denoms.iter().chain(&b.denoms).map(|f| (f.form.clone(), f.mult, f.scale)).collect();
                let (coeff, denoms) = normalize_factors(&a.coeff * &b.coeff, raw, tol)?;
                out.terms.push(Term { coeff, poly: a.poly.mul(&b.poly), exp: a.exp.add(&b.exp), denoms });
            }
        }
        out.normalize();
        Ok(out)
    }

    /// Divide every term by `form^mult`.
    pub fn div_factor(&self, form: &Affine, mult: u32) -> Result<Self, SymfunError> {
        let tol = self.tol();
        let mut out = Self::zero(self.arity, self.prec);
        for t in &self.terms {
            let mut raw: Vec<(Affine, u32, f64)> = t.denoms.iter().map(|f| (f.form.clone(), f.mult, f.scale)).collect();
            raw.push((form.clone(), mult, form.constant.abs_f64()));
            let (coeff, denoms) = normalize_factors(t.coeff.clone(), raw, tol)?;
            out.terms.push(Term { coeff, poly: t.poly.clone(), exp: t.exp.clone(), denoms });
        }
        out.normalize();
        Ok(out)
    }

    /// Merge terms with identical exponential and denominator data; drop zero terms.
    pub fn normalize(&mut self) {
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if t.coeff.is_zero() || t.poly.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|m| m.exp == t.exp && m.denoms == t.denoms) {
                Some(m) => {
                    let p = m.poly.scale(&m.coeff).add(&t.poly.scale(&t.coeff));
                    m.coeff = ComplexScalar::one(self.prec);
                    m.poly = p;
                }
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.poly.is_zero());
        self.terms = merged;
    }

    pub fn differentiate(&self, var: usize) -> Self {
        assert!(var < self.arity, "variable index out of range");
        let mut out = Self::zero(self.arity, self.prec);
        for t in &self.terms {
            let l = &t.exp.linear[var];
            let mut p = t.poly.derivative(var);
            if !l.is_zero() {
                p = p.add(&t.poly.scale(l));
            }
            if !p.is_zero() {
                out.terms.push(Term { coeff: t.coeff.clone(), poly: p, exp: t.exp.clone(), denoms: t.denoms.clone() });
            }
            for (i, f) in t.denoms.iter().enumerate() {
                let a = &f.form.linear[var];
                if *a == 0 {
                    continue;
                }
                let mut denoms = t.denoms.clone();
                denoms[i].mult += 1;
                let factor = a * Rational::from(-i64::from(f.mult));
                out.terms.push(Term {
                    coeff: t.coeff.mul_rational(&factor),
                    poly: t.poly.clone(),
                    exp: t.exp.clone(),
                    denoms,
                });
            }
        }
        out.normalize();
        out
    }

    /// Replace `var` by `point`, an affine form in the remaining variables.
    pub fn substitute_affine(&self, var: usize, point: &Affine) -> Result<Self, SymfunError> {
        assert!(var < self.arity, "variable index out of range");
        if point.arity() + 1 != self.arity {
            return Err(SymfunError::ArityMismatch { expected: self.arity - 1, got: point.arity() });
        }
        let tol = self.tol();
        let mut out = Self::zero(self.arity - 1, self.prec);
        for t in &self.terms {
            let raw = t
                .denoms
                .iter()
                .map(|f| {
                    let (a, s) = f.form.substitute_scaled(var, point);
                    (a, f.mult, s.max(f.scale))
                })
                .collect();
            let (coeff, denoms) = normalize_factors(t.coeff.clone(), raw, tol)?;
            out.terms.push(Term {
                coeff,
                poly: t.poly.substitute(var, point),
                exp: t.exp.substitute(var, point),
                denoms,
            });
        }
        out.normalize();
        Ok(out)
    }

    /// Residue in `var` along `{z_var = point}`.
    pub fn residue_1d(&self, var: usize, point: &Affine) -> Result<Self, SymfunError> {
        assert!(var < self.arity, "variable index out of range");
        if point.arity() + 1 != self.arity {
            return Err(SymfunError::ArityMismatch { expected: self.arity - 1, got: point.arity() });
        }
        let tol = self.tol();
        let mut out = Self::zero(self.arity - 1, self.prec);
        for t in &self.terms {
            let mut order = 0u32;
            let mut coeff = t.coeff.clone();
            let mut rest = Vec::with_capacity(t.denoms.len());
            for f in &t.denoms {
                let a = &f.form.linear[var];
                let (restricted, s) = f.form.substitute_scaled(var, point);
                let vanishes = *a != 0
                    && restricted.is_constant()
                    && restricted.constant.abs_f64() <= tol * s.max(f.scale).max(f64::MIN_POSITIVE);
                if vanishes {
                    order += f.mult;
                    coeff = coeff.div_rational(&a.clone().pow(f.mult));
                } else {
                    rest.push(f.clone());
                }
            }
            if order == 0 {
                continue;
            }
            let mut regular = Self {
                arity: self.arity,
                prec: self.prec,
                terms: vec![Term { coeff, poly: t.poly.clone(), exp: t.exp.clone(), denoms: rest }],
            };
            for _ in 1..order {
                regular = regular.differentiate(var);
            }
            let mut fact = Rational::from(1);
            for k in 2..order {
                fact *= k;
            }
            let restricted = regular.substitute_affine(var, point)?;
            out.terms.extend(restricted.terms.into_iter().map(|mut t| {
                t.coeff = t.coeff.div_rational(&fact);
                t
            }));
        }
        out.normalize();
        Ok(out)
    }

    pub fn evaluate(&self, point: &[ComplexScalar]) -> Result<ComplexScalar, SymfunError> {
        if point.len() != self.arity {
            return Err(SymfunError::ArityMismatch { expected: self.arity, got: point.len() });
        }
        let tol = self.tol();
        let mut acc = ComplexScalar::zero(self.prec);
        for t in &self.terms {
            acc = acc + t.evaluate(point, tol)?;
        }
        Ok(acc)
    }

    /// Pull back along `x = M z` (`M` is arity x new-arity).
    pub fn change_variables(&self, m: &RationalMatrix) -> Result<Self, SymfunError> {
        assert_eq!(m.rows(), self.arity, "matrix rows must equal arity");
        let n = m.cols();
        let images: Vec<Polynomial> = (0..self.arity)
            .map(|i| Affine::new(m.row(i).to_vec(), ComplexScalar::zero(self.prec)).to_polynomial())
            .collect();
        let tol = self.tol();
        let mut out = Self::zero(n, self.prec);
        for t in &self.terms {
            let raw = t
                .denoms
                .iter()
                .map(|f| {
                    let a = Affine::new(m.left_apply(&f.form.linear), f.form.constant.clone());
                    (a, f.mult, f.scale)
                })
                .collect();
            let (coeff, denoms) = normalize_factors(t.coeff.clone(), raw, tol)?;
            let poly = if images.is_empty() {
                Polynomial::constant(t.poly.as_constant().unwrap_or_else(|| ComplexScalar::zero(self.prec)), n)
            } else {
                t.poly.compose(&images)
            };
            out.terms.push(Term { coeff, poly, exp: t.exp.change_variables(m), denoms });
        }
        out.normalize();
        Ok(out)
    }

    /// Fix every variable except `keep` at the given values; the result has arity 1.
    pub fn restrict_to_line(&self, keep: usize, values: &[ComplexScalar]) -> Result<Self, SymfunError> {
        let mut f = self.clone();
        let mut var = 0;
        for (j, v) in values.iter().enumerate().take(self.arity) {
            if j == keep {
                var += 1;
                continue;
            }
            let point = Affine::constant(f.arity - 1, v.clone());
            f = f.substitute_affine(var, &point)?;
        }
        Ok(f)
    }

    /// Largest polynomial degree across terms.
    pub fn polynomial_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.poly.degree()).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::from_f64(re, im, P)
    }

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    fn aff(lin: &[i64], re: f64, im: f64) -> Affine {
        Affine::new(lin.iter().map(|&v| q(v)).collect(), c(re, im))
    }

    /// exp(2 pi i (x + 2y)).
    fn example_two_h() -> ExpRationalFunction {
        let tpi = ComplexScalar::two_pi_i(P);
        ExpRationalFunction::exponential(ExpAffine {
            linear: vec![tpi.clone(), tpi.mul_f64(2.0)],
            constant: ComplexScalar::zero(P),
        })
    }

    #[test]
    fn derivative_of_exponential() {
        let h = example_two_h();
        let d = h.differentiate(0);
        let pt = [c(0.3, 0.1), c(-0.2, 0.4)];
        let expected = ComplexScalar::two_pi_i(P) * h.evaluate(&pt).unwrap();
        assert!(d.evaluate(&pt).unwrap().approx_eq(&expected, 1e-30));
    }

    #[test]
    fn derivative_of_reciprocal() {
        let f = ExpRationalFunction::from_term(
            c(1.0, 0.0),
            Polynomial::one(1, P),
            ExpAffine::zero(1, P),
            vec![(aff(&[1], 0.0, -1.0), 1)],
        )
        .unwrap();
        let d = f.differentiate(0);
        assert_eq!(d.terms().len(), 1);
        assert_eq!(d.terms()[0].denoms[0].mult, 2);
        assert_eq!(d.terms()[0].coeff, c(-1.0, 0.0));
    }

    #[test]
    fn evaluate_examples() {
        let f = ExpRationalFunction::from_term(
            c(1.0, 0.0),
            Polynomial::one(1, P),
            ExpAffine::zero(1, P),
            vec![(aff(&[1], 0.0, -1.0), 1), (aff(&[1], 0.0, 1.0), 1)],
        )
        .unwrap();
        assert!(f.evaluate(&[c(0.0, 0.0)]).unwrap().approx_eq(&c(1.0, 0.0), 1e-35));
        assert!(matches!(f.evaluate(&[c(0.0, 1.0)]), Err(SymfunError::PoleHit { .. })));
        let h = example_two_h().evaluate(&[c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!((h.re_f64() - (-6.0 * std::f64::consts::PI).exp()).abs() < 1e-22);
    }

    #[test]
    fn simple_pole_residue() {
        let f = ExpRationalFunction::from_term(
            c(1.0, 0.0),
            Polynomial::one(1, P),
            ExpAffine::zero(1, P),
            vec![(aff(&[1], 0.0, -1.0), 1), (aff(&[1], 0.0, 1.0), 1)],
        )
        .unwrap();
        let res = f.residue_1d(0, &Affine::constant(0, c(0.0, 1.0))).unwrap();
        let v = res.evaluate(&[]).unwrap();
        assert!(v.approx_eq(&c(0.0, -0.5), 1e-35));
    }

    #[test]
    fn double_pole_residue_gives_derivative() {
        // h(i, y) / (y - i)^2 with h = exp(2 pi i (x + 2y)).
        let h = example_two_h();
        let line = h.substitute_affine(0, &Affine::constant(1, c(0.0, 1.0))).unwrap();
        let f = line.div_factor(&aff(&[1], 0.0, -1.0), 2).unwrap();
        let res = f.residue_1d(0, &Affine::constant(0, c(0.0, 1.0))).unwrap();
        let v = res.evaluate(&[]).unwrap();
        let dy = h.differentiate(1).evaluate(&[c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!(v.approx_eq(&dy, 1e-30));
    }

    #[test]
    fn coincident_factors_merge_after_substitution() {
        // 1/((x - y - i)(y - i)(x - 2i)) on x = 2i: the first factor becomes -(y - i).
        let f = ExpRationalFunction::from_term(
            c(1.0, 0.0),
            Polynomial::one(2, P),
            ExpAffine::zero(2, P),
            vec![(aff(&[1, -1], 0.0, -1.0), 1), (aff(&[0, 1], 0.0, -1.0), 1), (aff(&[1, 0], 0.0, -2.0), 1)],
        )
        .unwrap();
        let r = f.residue_1d(0, &Affine::constant(1, c(0.0, 2.0))).unwrap();
        assert_eq!(r.terms().len(), 1);
        assert_eq!(r.terms()[0].denoms.len(), 1);
        assert_eq!(r.terms()[0].denoms[0].mult, 2);
        assert!(r.terms()[0].coeff.approx_eq(&c(-1.0, 0.0), 1e-35));
    }

    #[test]
    fn identically_zero_denominator_is_an_error() {
        let f = ExpRationalFunction::from_term(
            c(1.0, 0.0),
            Polynomial::one(2, P),
            ExpAffine::zero(2, P),
            vec![(aff(&[1, -1], 0.0, 0.0), 1)],
        )
        .unwrap();
        let err = f.substitute_affine(0, &aff(&[1], 0.0, 0.0)).unwrap_err();
        assert_eq!(err, SymfunError::IdenticallyZeroDenominator);
    }

    #[test]
    fn change_of_variables_matches_direct_evaluation() {
        // 1/(x + y - 2i) * exp(2 pi i (x + 2y)) pulled back along x = z1 - z2, y = z2.
        let f = example_two_h().div_factor(&aff(&[1, 1], 0.0, -2.0), 1).unwrap();
        let m = RationalMatrix::from_i64(&[&[1, -1], &[0, 1]]);
        let g = f.change_variables(&m).unwrap();
        let z = [c(0.3, 0.2), c(-0.7, 0.1)];
        let x = [&z[0] - &z[1], z[1].clone()];
        assert!(g.evaluate(&z).unwrap().approx_eq(&f.evaluate(&x).unwrap(), 1e-30));
    }
}
