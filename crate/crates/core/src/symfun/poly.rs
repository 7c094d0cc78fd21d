use std::collections::BTreeMap;

use crate::scalar::ComplexScalar;

use super::affine::Affine;

/// Sparse polynomial: exponent vector to coefficient, exact zeros pruned.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    prec: u32,
    terms: BTreeMap<Vec<u32>, ComplexScalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize, prec: u32) -> Self {
        Self { nvars, prec, terms: BTreeMap::new() }
    }

    pub fn constant(c: ComplexScalar, nvars: usize) -> Self {
        let mut p = Self::zero(nvars, c.precision());
        p.add_monomial(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize, prec: u32) -> Self {
        Self::constant(ComplexScalar::one(prec), nvars)
    }

    pub fn variable(idx: usize, nvars: usize, prec: u32) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        let mut p = Self::zero(nvars, prec);
        p.add_monomial(e, ComplexScalar::one(prec));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&Vec<u32>, &ComplexScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_monomial(&mut self, exps: Vec<u32>, c: ComplexScalar) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exps) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(exps, sum);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    /// The constant coefficient, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<ComplexScalar> {
        match self.terms.len() {
            0 => Some(ComplexScalar::zero(self.prec)),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_monomial(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-ComplexScalar::one(self.prec))
    }

    pub fn scale(&self, c: &ComplexScalar) -> Self {
        let mut out = Self::zero(self.nvars, self.prec);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.add_monomial(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.prec.max(other.prec));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_monomial(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars, self.prec);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.prec);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_monomial(e2, c.mul_f64(f64::from(e[var])));
            }
        }
        out
    }

    pub fn evaluate(&self, point: &[ComplexScalar]) -> ComplexScalar {
        assert_eq!(point.len(), self.nvars, "point length must equal arity");
        let mut acc = ComplexScalar::zero(self.prec);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (z, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t * z.powu(k);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Replace `var` by an affine form in the remaining variables.
    pub fn substitute(&self, var: usize, point: &Affine) -> Self {
        let n = self.nvars - 1;
        let base = point.to_polynomial();
        let mut powers = vec![Self::one(n, self.prec)];
        let mut out = Self::zero(n, self.prec);
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(&base);
                powers.push(next);
            }
            let rest: Vec<u32> = e.iter().enumerate().filter(|&(j, _)| j != var).map(|(_, &v)| v).collect();
            for (e2, c2) in &powers[k].terms {
                let merged: Vec<u32> = rest.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_monomial(merged, c * c2);
            }
        }
        out
    }

    /// `self(images)` where variable `j` becomes `images[j]`.
    pub fn compose(&self, images: &[Polynomial]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let n = images.first().map_or(0, Polynomial::nvars);
        let mut out = Self::zero(n, self.prec);
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone(), n);
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&img.pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }
}
