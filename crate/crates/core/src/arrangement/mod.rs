//! Polar hyperplanes `{f(v) = i s}`, polyhedra `V + i Theta`, and flags.

mod flags;

pub use flags::{permutations, AuditReport, FlagClass, Violator, ZStar, MAX_VIOLATORS};

use std::fmt;

use rug::{Integer, Rational};
use thiserror::Error;

use crate::exact_linalg::{LinalgError, RationalMatrix};
use crate::scalar::{ComplexScalar, GaussRational};
use crate::symfun::{Affine, ExpRationalFunction, SymfunError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArrangementError {
    #[error("linear part is zero")]
    ZeroLinearPart,
    #[error("real and imaginary parts of the linear form are not parallel")]
    NotAlignable,
    #[error("hyperplane meets R^r")]
    MeetsRealLocus,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cone generators are linearly dependent")]
    SingularBasis,
    #[error("flag {0} is not transverse")]
    NotTransverse(Flag),
    #[error("flag {0} is insoluble (a leading principal minor vanishes)")]
    InsolubleFlag(Flag),
    #[error("numerator must not have denominator factors")]
    NumeratorHasPoles,
    #[error("arrangement has no hyperplanes")]
    Empty,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Symfun(#[from] SymfunError),
}

/// `H = {f(v) = i s}` stored once with its multiplicity in the denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub f: Vec<Rational>,
    pub s: ComplexScalar,
    pub multiplicity: u32,
}

impl Hyperplane {
    pub fn new(f: Vec<Rational>, s: ComplexScalar) -> Self {
        Self { f, s, multiplicity: 1 }
    }

    pub fn with_multiplicity(mut self, m: u32) -> Self {
        self.multiplicity = m;
        self
    }

    pub fn dimension(&self) -> usize {
        self.f.len()
    }

    /// `g(x) = f(x) - i s`.
    pub fn g(&self) -> Affine {
        Affine::new(self.f.clone(), -self.s.mul_i())
    }
}

/// Canonical form `g = scale * (f - i s)` of an affine function.
#[derive(Clone, Debug, PartialEq)]
pub struct Canonical {
    pub hyperplane: Hyperplane,
    pub scale: ComplexScalar,
}

/// Canonicalize `<a, x> + b` with exact Gaussian-rational linear coefficients.
pub fn canonicalize_exact(linear: &[GaussRational], constant: &ComplexScalar) -> Result<Canonical, ArrangementError> {
    let re: Vec<Rational> = linear.iter().map(|a| a.re.clone()).collect();
    let im: Vec<Rational> = linear.iter().map(|a| a.im.clone()).collect();
    let nonzero = |v: &[Rational]| v.iter().any(|x| *x != 0);
    if !nonzero(&re) && !nonzero(&im) {
        return Err(ArrangementError::ZeroLinearPart);
    }
    for i in 0..linear.len() {
        for j in i + 1..linear.len() {
            if Rational::from(&re[i] * &im[j]) != Rational::from(&re[j] * &im[i]) {
                return Err(ArrangementError::NotAlignable);
            }
        }
    }
    let base = if nonzero(&re) { re } else { im };
    let k = base.iter().position(|x| *x != 0).expect("nonzero base");
    let c = linear[k].div(&GaussRational::real(base[k].clone())).expect("nonzero pivot");
    finish_canonical(&base, c.to_scalar(constant.precision()), constant)
}

/// Canonicalize `<a, x> + b` with floating coefficients.
pub fn canonicalize_hyperplane(
    linear: &[ComplexScalar],
    constant: &ComplexScalar,
) -> Result<Canonical, ArrangementError> {
    let prec = constant.precision();
    let tol = ComplexScalar::tolerance(prec);
    if linear.iter().all(ComplexScalar::is_zero) {
        return Err(ArrangementError::ZeroLinearPart);
    }
    let exact: Option<Vec<GaussRational>> =
        linear.iter().map(|a| Some(GaussRational::new(a.re().to_rational()?, a.im().to_rational()?))).collect();
    if let Some(ex) = &exact {
        match canonicalize_exact(ex, constant) {
            Err(ArrangementError::NotAlignable) => {}
            other => return other,
        }
    }
    // Approximate alignment: pick the dominant component and the largest entry.
    let re: Vec<f64> = linear.iter().map(ComplexScalar::re_f64).collect();
    let im: Vec<f64> = linear.iter().map(ComplexScalar::im_f64).collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (base, _) = if norm(&re) >= norm(&im) { (&re, &im) } else { (&im, &re) };
    let k = (0..base.len()).max_by(|&a, &b| base[a].abs().total_cmp(&base[b].abs())).unwrap();
    let c = linear[k].clone();
    for (j, a) in linear.iter().enumerate() {
        let ratio = base[j] / base[k];
        let predicted = c.mul_f64(ratio);
        if (a - &predicted).abs_f64() > tol.max(1e-12) * c.abs_f64() {
            return Err(ArrangementError::NotAlignable);
        }
    }
    let f0: Vec<Rational> = base.iter().map(|x| approximate_rational(x / base[k], 1 << 20, 1e-12)).collect();
    finish_canonical(&f0, c, constant)
}

/// Best rational approximation with bounded denominator by continued fractions.
fn approximate_rational(x: f64, max_den: i64, tol: f64) -> Rational {
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i64;
        let h2 = ai.saturating_mul(h1).saturating_add(h0);
        let k2 = ai.saturating_mul(k1).saturating_add(k0);
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol * x.abs().max(1.0) || (v - a).abs() < 1e-300 {
            break;
        }
        v = 1.0 / (v - a);
    }
    if k1 == 0 {
        return Rational::from_f64(x).unwrap_or_default();
    }
    Rational::from((h1, k1))
}

/// `a = c * f0` with `f0` rational: scale `f0` to a primitive integer vector and fix the sign.
fn finish_canonical(
    f0: &[Rational],
    c: ComplexScalar,
    constant: &ComplexScalar,
) -> Result<Canonical, ArrangementError> {
    let prec = constant.precision();
    let mut lcm = Integer::from(1);
    for v in f0 {
        lcm.lcm_mut(v.denom());
    }
    let ints: Vec<Integer> = f0.iter().map(|v| v.numer() * Integer::from(&lcm / v.denom())).collect();
    let mut gcd = Integer::new();
    for v in &ints {
        gcd.gcd_mut(v);
    }
    let lambda = Rational::from((lcm, gcd.clone()));
    let mut f: Vec<Rational> = ints.into_iter().map(|v| Rational::from(v / &gcd)).collect();
    let mut scale = c.div_rational(&lambda);
    // g = scale * (f x + b / scale) and -i s = b / scale.
    let mut s = (constant / &scale).mul_i();
    let tol = ComplexScalar::tolerance(prec);
    let negligible = |s: &ComplexScalar| s.re_f64().abs() <= tol * s.abs_f64() || s.re().is_zero();
    if negligible(&s) {
        return Err(ArrangementError::MeetsRealLocus);
    }
    if s.re().is_sign_negative() {
        s = -s;
        scale = -scale;
        for v in &mut f {
            *v = Rational::from(-&*v);
        }
    }
    Ok(Canonical { hyperplane: Hyperplane::new(f, s), scale })
}

/// `Pi = V + i Theta` given by ordered cone generators (the dual basis of `z`).
#[derive(Clone, Debug, PartialEq)]
pub struct Polyhedron {
    v_basis: Vec<Vec<Rational>>,
    v_matrix: RationalMatrix,
    z_matrix: RationalMatrix,
    det_v: Rational,
}

impl Polyhedron {
    pub fn new(v_basis: Vec<Vec<Rational>>) -> Result<Self, ArrangementError> {
        let r = v_basis.len();
        if r == 0 || v_basis.iter().any(|v| v.len() != r) {
            return Err(ArrangementError::DimensionMismatch(format!("{r} generators must each have {r} entries")));
        }
        let v_matrix = RationalMatrix::from_rows(v_basis.clone())?.transpose();
        let z_matrix = v_matrix.inverse().map_err(|_| ArrangementError::SingularBasis)?;
        let det_v = v_matrix.determinant()?;
        Ok(Self { v_basis, v_matrix, z_matrix, det_v })
    }

    pub fn from_i64(gens: &[&[i64]]) -> Result<Self, ArrangementError> {
        Self::new(gens.iter().map(|g| g.iter().map(|&v| Rational::from(v)).collect()).collect())
    }

    pub fn standard(r: usize) -> Self {
        let basis = (0..r).map(|i| (0..r).map(|j| Rational::from(i32::from(i == j))).collect()).collect();
        Self::new(basis).expect("standard basis is independent")
    }

    pub fn dimension(&self) -> usize {
        self.v_basis.len()
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.v_basis
    }

    /// Columns are the generators: `x = V z`.
    pub fn v_matrix(&self) -> &RationalMatrix {
        &self.v_matrix
    }

    /// Rows are the coordinate forms `z_1..z_r`.
    pub fn z_matrix(&self) -> &RationalMatrix {
        &self.z_matrix
    }

    pub fn det_v(&self) -> &Rational {
        &self.det_v
    }

    /// Sign of `det V`: +1 when `z` induces the standard orientation.
    pub fn orientation(&self) -> i32 {
        if self.det_v > 0 {
            1
        } else {
            -1
        }
    }

    /// Same cone with the generators reordered.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::new(perm.iter().map(|&i| self.v_basis[i].clone()).collect()).expect("permutation keeps independence")
    }

    /// Each generator multiplied by a positive rational.
    pub fn rescaled(&self, factors: &[Rational]) -> Result<Self, ArrangementError> {
        Self::new(
            self.v_basis.iter().zip(factors).map(|(v, c)| v.iter().map(|x| Rational::from(x * c)).collect()).collect(),
        )
    }
}

/// An ordered tuple of distinct hyperplane indices (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flag(pub Vec<usize>);

impl Flag {
    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| format!("H{i}")).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `omega = h dx / prod g_k^{m_k}` on `C^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    dimension: usize,
    hyperplanes: Vec<Hyperplane>,
    numerator: ExpRationalFunction,
}

impl Arrangement {
    pub fn new(
        dimension: usize,
        hyperplanes: Vec<Hyperplane>,
        numerator: ExpRationalFunction,
    ) -> Result<Self, ArrangementError> {
        if hyperplanes.is_empty() {
            return Err(ArrangementError::Empty);
        }
        if let Some(h) = hyperplanes.iter().find(|h| h.dimension() != dimension) {
            return Err(ArrangementError::DimensionMismatch(format!(
                "hyperplane of dimension {} in a {dimension}-dimensional arrangement",
                h.dimension()
            )));
        }
        if hyperplanes.iter().any(|h| h.f.iter().all(|x| *x == 0)) {
            return Err(ArrangementError::ZeroLinearPart);
        }
        if hyperplanes.iter().any(|h| !h.s.re().is_sign_positive() || h.s.re().is_zero()) {
            return Err(ArrangementError::MeetsRealLocus);
        }
        if numerator.arity() != dimension {
            return Err(ArrangementError::DimensionMismatch(format!(
                "numerator of arity {} in dimension {dimension}",
                numerator.arity()
            )));
        }
        if numerator.terms().iter().any(|t| !t.denoms.is_empty()) {
            return Err(ArrangementError::NumeratorHasPoles);
        }
        Ok(Self { dimension, hyperplanes, numerator })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn numerator(&self) -> &ExpRationalFunction {
        &self.numerator
    }

    pub fn precision(&self) -> u32 {
        self.hyperplanes[0].s.precision().max(self.numerator.precision())
    }

    /// Total denominator degree `R` (multiplicities counted).
    pub fn total_degree(&self) -> u32 {
        self.hyperplanes.iter().map(|h| h.multiplicity).sum()
    }

    /// Rows `f_j` of the listed hyperplanes.
    pub fn f_matrix(&self, indices: &[usize]) -> RationalMatrix {
        RationalMatrix::from_rows(indices.iter().map(|&i| self.hyperplanes[i].f.clone()).collect())
            .expect("hyperplanes share the dimension")
    }

    /// `g_k` expressed in the polyhedron's `z`-coordinates.
    pub fn g_in(&self, idx: usize, pi: &Polyhedron) -> Affine {
        let h = &self.hyperplanes[idx];
        Affine::new(pi.v_matrix().left_apply(&h.f), -h.s.mul_i())
    }

    /// The integrand `|det V| h(V z) / prod g_k(V z)^{m_k}` as a function of `z`.
    pub fn integrand_in(&self, pi: &Polyhedron) -> Result<ExpRationalFunction, ArrangementError> {
        let prec = self.precision();
        let mut f = self.numerator.change_variables(pi.v_matrix())?;
        f = f.scale(&ComplexScalar::from_rational(&Rational::from(pi.det_v().abs_ref()), prec));
        for (k, h) in self.hyperplanes.iter().enumerate() {
            f = f.div_factor(&self.g_in(k, pi), h.multiplicity)?;
        }
        Ok(f)
    }

    /// The integrand `h(x) / prod g_k(x)^{m_k}` in the original coordinates.
    pub fn integrand(&self) -> Result<ExpRationalFunction, ArrangementError> {
        let mut f = self.numerator.clone();
        for h in &self.hyperplanes {
            f = f.div_factor(&h.g(), h.multiplicity)?;
        }
        Ok(f)
    }

    /// Same data with a different numerator.
    pub fn with_numerator(&self, numerator: ExpRationalFunction) -> Result<Self, ArrangementError> {
        Self::new(self.dimension, self.hyperplanes.clone(), numerator)
    }

    /// Same data with new shifts `s`.
    pub fn with_shifts(&self, s: &[ComplexScalar]) -> Result<Self, ArrangementError> {
        let hyperplanes = self
            .hyperplanes
            .iter()
            .zip(s)
            .map(|(h, s)| Hyperplane { f: h.f.clone(), s: s.clone(), multiplicity: h.multiplicity })
            .collect();
        Self::new(self.dimension, hyperplanes, self.numerator.clone())
    }
}

/// `J[j][k] = f_j(v_k)`.
pub fn jacobian(hyperplanes: &[&Hyperplane], pi: &Polyhedron) -> Result<RationalMatrix, ArrangementError> {
    if hyperplanes.is_empty() || hyperplanes.len() > pi.dimension() {
        return Err(ArrangementError::DimensionMismatch(format!(
            "{} hyperplanes in dimension {}",
            hyperplanes.len(),
            pi.dimension()
        )));
    }
    if let Some(h) = hyperplanes.iter().find(|h| h.dimension() != pi.dimension()) {
        return Err(ArrangementError::DimensionMismatch(format!(
            "hyperplane of dimension {} against a polyhedron of dimension {}",
            h.dimension(),
            pi.dimension()
        )));
    }
    let f = RationalMatrix::from_rows(hyperplanes.iter().map(|h| h.f.clone()).collect())?;
    Ok(f.mul(pi.v_matrix())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn g(re: i64, im: i64) -> GaussRational {
        GaussRational::new(Rational::from(re), Rational::from(im))
    }

    #[test]
    fn canonical_forms() {
        // -x - i
        let c = canonicalize_exact(&[g(-1, 0)], &ComplexScalar::from_f64(0.0, -1.0, P)).unwrap();
        assert_eq!(c.hyperplane.f, vec![Rational::from(-1)]);
        assert_eq!(c.hyperplane.s, ComplexScalar::one(P));
        // x + y - 2i
        let c = canonicalize_exact(&[g(1, 0), g(1, 0)], &ComplexScalar::from_f64(0.0, -2.0, P)).unwrap();
        assert_eq!(c.hyperplane.f, vec![Rational::from(1), Rational::from(1)]);
        assert_eq!(c.hyperplane.s, ComplexScalar::from_f64(2.0, 0.0, P));
        // -i x + 1
        let c = canonicalize_exact(&[g(0, -1)], &ComplexScalar::one(P)).unwrap();
        assert_eq!(c.hyperplane.f, vec![Rational::from(-1)]);
        assert_eq!(c.hyperplane.s, ComplexScalar::one(P));
        assert_eq!(c.scale, ComplexScalar::i(P));
    }

    #[test]
    fn canonical_errors() {
        let zero = ComplexScalar::zero(P);
        assert_eq!(canonicalize_exact(&[g(1, 0)], &zero).unwrap_err(), ArrangementError::MeetsRealLocus);
        assert_eq!(
            canonicalize_exact(&[g(1, 0), g(0, 1)], &ComplexScalar::i(P)).unwrap_err(),
            ArrangementError::NotAlignable
        );
        assert_eq!(canonicalize_exact(&[g(0, 0)], &ComplexScalar::i(P)).unwrap_err(), ArrangementError::ZeroLinearPart);
    }

    #[test]
    fn float_path_agrees_with_exact_path() {
        let lin = [ComplexScalar::from_f64(0.5, 0.5, P), ComplexScalar::from_f64(-1.0, -1.0, P)];
        let b = ComplexScalar::from_f64(3.0, -1.0, P);
        let c = canonicalize_hyperplane(&lin, &b).unwrap();
        let e =
            canonicalize_exact(&[GaussRational::new(Rational::from((1, 2)), Rational::from((1, 2))), g(-1, -1)], &b)
                .unwrap();
        assert_eq!(c, e);
        assert_eq!(c.hyperplane.f.iter().map(|v| v.to_f64()).collect::<Vec<_>>().len(), 2);
    }

    #[test]
    fn polyhedron_coordinates() {
        let pi = Polyhedron::from_i64(&[&[1, 0], &[-1, 1]]).unwrap();
        assert_eq!(pi.z_matrix(), &RationalMatrix::from_i64(&[&[1, 1], &[0, 1]]));
        assert_eq!(*pi.det_v(), 1);
        assert!(Polyhedron::from_i64(&[&[1, 1], &[2, 2]]).is_err());
    }

    #[test]
    fn example_jacobians() {
        let h1 = Hyperplane::new(vec![Rational::from(1), Rational::from(0)], ComplexScalar::one(P));
        let h2 = Hyperplane::new(vec![Rational::from(0), Rational::from(1)], ComplexScalar::one(P));
        let pi = Polyhedron::from_i64(&[&[1, 0], &[-1, 1]]).unwrap();
        assert_eq!(jacobian(&[&h1, &h2], &pi).unwrap(), RationalMatrix::from_i64(&[&[1, -1], &[0, 1]]));
        let h3 = Hyperplane::new(vec![Rational::from(1), Rational::from(1)], ComplexScalar::one(P));
        let h1a = Hyperplane::new(vec![Rational::from(-1), Rational::from(0)], ComplexScalar::one(P));
        let std = Polyhedron::standard(2);
        assert_eq!(jacobian(&[&h3, &h1a], &std).unwrap(), RationalMatrix::from_i64(&[&[1, 1], &[-1, 0]]));
    }
}
