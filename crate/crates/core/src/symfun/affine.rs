use rug::Rational;

use crate::scalar::ComplexScalar;

use super::poly::Polynomial;

/// `<a, z> + b` with rational `a` and complex `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Affine {
    pub linear: Vec<Rational>,
    pub constant: ComplexScalar,
}

impl Affine {
    pub fn new(linear: Vec<Rational>, constant: ComplexScalar) -> Self {
        Self { linear, constant }
    }

    pub fn constant(arity: usize, c: ComplexScalar) -> Self {
        Self { linear: vec![Rational::new(); arity], constant: c }
    }

    /// The coordinate function `z_idx`.
    pub fn variable(arity: usize, idx: usize, prec: u32) -> Self {
        let mut linear = vec![Rational::new(); arity];
        linear[idx] = Rational::from(1);
        Self { linear, constant: ComplexScalar::zero(prec) }
    }

    pub fn arity(&self) -> usize {
        self.linear.len()
    }

    pub fn precision(&self) -> u32 {
        self.constant.precision()
    }

    pub fn is_constant(&self) -> bool {
        self.linear.iter().all(|a| *a == 0)
    }

    pub fn evaluate(&self, point: &[ComplexScalar]) -> ComplexScalar {
        assert_eq!(point.len(), self.arity(), "point length must equal arity");
        let mut acc = self.constant.clone();
        for (a, z) in self.linear.iter().zip(point) {
            if *a != 0 {
                acc = acc + z.mul_rational(a);
            }
        }
        acc
    }

    /// Sum of the magnitudes of the summands of `evaluate(point)`; the scale for zero tests.
    pub fn magnitude(&self, point: &[ComplexScalar]) -> f64 {
        let mut acc = self.constant.abs_f64();
        for (a, z) in self.linear.iter().zip(point) {
            if *a != 0 {
                acc += a.to_f64().abs() * z.abs_f64();
            }
        }
        acc
    }

    /// Replace variable `var` by `point` (an affine form in the other variables, in order).
    /// Returns the new form and the magnitude of the summands that built its constant.
    pub fn substitute_scaled(&self, var: usize, point: &Affine) -> (Affine, f64) {
        assert_eq!(point.arity() + 1, self.arity(), "substitution point arity");
        let a = &self.linear[var];
        let mut linear: Vec<Rational> =
            self.linear.iter().enumerate().filter(|&(j, _)| j != var).map(|(_, v)| v.clone()).collect();
        let mut constant = self.constant.clone();
        let mut scale = self.constant.abs_f64();
        if *a != 0 {
            for (l, p) in linear.iter_mut().zip(&point.linear) {
                *l += Rational::from(a * p);
            }
            let shift = point.constant.mul_rational(a);
            scale += shift.abs_f64();
            constant = constant + shift;
        }
        (Affine { linear, constant }, scale)
    }

    pub fn substitute(&self, var: usize, point: &Affine) -> Affine {
        self.substitute_scaled(var, point).0
    }

    /// `self(images)`: composition with affine images of every variable.
    pub fn compose(&self, images: &[Affine]) -> Affine {
        assert_eq!(images.len(), self.arity(), "one image per variable");
        let arity = images.first().map_or(0, Affine::arity);
        let mut linear = vec![Rational::new(); arity];
        let mut constant = self.constant.clone();
        for (a, img) in self.linear.iter().zip(images) {
            if *a == 0 {
                continue;
            }
            for (l, v) in linear.iter_mut().zip(&img.linear) {
                *l += Rational::from(a * v);
            }
            constant = constant + img.constant.mul_rational(a);
        }
        Affine { linear, constant }
    }

    pub fn leading_index(&self) -> Option<usize> {
        self.linear.iter().position(|a| *a != 0)
    }

    /// `(lead, self / lead)` where `lead` is the first nonzero linear coefficient.
    pub fn normalized(&self) -> Option<(Rational, Affine)> {
        let idx = self.leading_index()?;
        let lead = self.linear[idx].clone();
        if lead == 1 {
            return Some((lead, self.clone()));
        }
        let linear = self.linear.iter().map(|a| Rational::from(a / &lead)).collect();
        Some((lead.clone(), Affine { linear, constant: self.constant.div_rational(&lead) }))
    }

    pub fn scale(&self, c: &Rational) -> Affine {
        Affine {
            linear: self.linear.iter().map(|a| Rational::from(a * c)).collect(),
            constant: self.constant.mul_rational(c),
        }
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let prec = self.precision();
        let mut p = Polynomial::constant(self.constant.clone(), self.arity());
        for (j, a) in self.linear.iter().enumerate() {
            if *a != 0 {
                let mut e = vec![0; self.arity()];
                e[j] = 1;
                p.add_monomial(e, ComplexScalar::from_rational(a, prec));
            }
        }
        p
    }

    /// Solve `self = 0` for variable `var`; `None` when its coefficient vanishes.
    pub fn solve_for(&self, var: usize) -> Option<Affine> {
        let c = &self.linear[var];
        if *c == 0 {
            return None;
        }
        let neg_inv = Rational::from(-1) / c.clone();
        let linear = self
            .linear
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != var)
            .map(|(_, v)| Rational::from(v * &neg_inv))
            .collect();
        Some(Affine { linear, constant: self.constant.mul_rational(&neg_inv) })
    }
}

/// `<l, z> + k` with complex coefficients: the exponent of an exponential factor.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpAffine {
    pub linear: Vec<ComplexScalar>,
    pub constant: ComplexScalar,
}

impl ExpAffine {
    pub fn zero(arity: usize, prec: u32) -> Self {
        Self { linear: vec![ComplexScalar::zero(prec); arity], constant: ComplexScalar::zero(prec) }
    }

    pub fn arity(&self) -> usize {
        self.linear.len()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.iter().all(ComplexScalar::is_zero)
    }

    pub fn has_linear_part(&self) -> bool {
        self.linear.iter().any(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            linear: self.linear.iter().zip(&other.linear).map(|(a, b)| a + b).collect(),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn scale(&self, c: &ComplexScalar) -> Self {
        Self { linear: self.linear.iter().map(|a| a * c).collect(), constant: &self.constant * c }
    }

    pub fn evaluate(&self, point: &[ComplexScalar]) -> ComplexScalar {
        let mut acc = self.constant.clone();
        for (l, z) in self.linear.iter().zip(point) {
            if !l.is_zero() {
                acc = acc + l * z;
            }
        }
        acc
    }

    pub fn substitute(&self, var: usize, point: &Affine) -> Self {
        let l = &self.linear[var];
        let mut linear: Vec<ComplexScalar> =
            self.linear.iter().enumerate().filter(|&(j, _)| j != var).map(|(_, v)| v.clone()).collect();
        let mut constant = self.constant.clone();
        if !l.is_zero() {
            for (c, p) in linear.iter_mut().zip(&point.linear) {
                if *p != 0 {
                    *c = &*c + l.mul_rational(p);
                }
            }
            constant = constant + l * &point.constant;
        }
        Self { linear, constant }
    }

    /// Exponent after `x = M z`.
    pub fn change_variables(&self, m: &crate::exact_linalg::RationalMatrix) -> Self {
        let prec = self.constant.precision();
        let linear = (0..m.cols())
            .map(|j| {
                let mut acc = ComplexScalar::zero(prec);
                for (i, l) in self.linear.iter().enumerate() {
                    let mij = m.get(i, j);
                    if *mij != 0 && !l.is_zero() {
                        acc = acc + l.mul_rational(mij);
                    }
                }
                acc
            })
            .collect();
        Self { linear, constant: self.constant.clone() }
    }
}
