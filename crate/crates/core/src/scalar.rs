//! Arbitrary-precision complex scalars.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

pub const DEFAULT_PRECISION: u32 = 128;

/// Complex number with `precision` mantissa bits in each component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexScalar(Complex);

impl ComplexScalar {
    pub fn zero(prec: u32) -> Self {
        Self(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self(Complex::with_val(prec, 1))
    }

    pub fn i(prec: u32) -> Self {
        Self(Complex::with_val(prec, (0, 1)))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self(Complex::with_val(prec, (re, im)))
    }

    pub fn from_c64(z: Complex64, prec: u32) -> Self {
        Self::from_f64(z.re, z.im, prec)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        Self(Complex::with_val(prec, (Float::with_val(prec, q), 0)))
    }

    pub fn from_rationals(re: &Rational, im: &Rational, prec: u32) -> Self {
        Self(Complex::with_val(prec, (Float::with_val(prec, re), Float::with_val(prec, im))))
    }

    pub fn from_floats(re: Float, im: Float) -> Self {
        let prec = re.prec().max(im.prec());
        Self(Complex::with_val(prec, (re, im)))
    }

    pub fn pi(prec: u32) -> Self {
        Self(Complex::with_val(prec, (Float::with_val(prec, Constant::Pi), 0)))
    }

    /// `2 pi i`.
    pub fn two_pi_i(prec: u32) -> Self {
        let mut two_pi = Float::with_val(prec, Constant::Pi);
        two_pi *= 2;
        Self(Complex::with_val(prec, (0, two_pi)))
    }

    pub fn inner(&self) -> &Complex {
        &self.0
    }

    pub fn into_inner(self) -> Complex {
        self.0
    }

    pub fn precision(&self) -> u32 {
        self.0.prec().0
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self(Complex::with_val(prec, &self.0))
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn re_f64(&self) -> f64 {
        self.0.real().to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.0.imag().to_f64()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re_f64(), self.im_f64())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.precision(), self.0.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.real().is_finite() && self.0.imag().is_finite()
    }

    pub fn exp(&self) -> Self {
        Self(Complex::with_val(self.precision(), self.0.exp_ref()))
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self(Complex::with_val(self.precision(), self.0.ln_ref()))
    }

    pub fn recip(&self) -> Self {
        Self(Complex::with_val(self.precision(), self.0.recip_ref()))
    }

    pub fn conj(&self) -> Self {
        Self(Complex::with_val(self.precision(), self.0.conj_ref()))
    }

    pub fn mul_i(&self) -> Self {
        Self(Complex::with_val(self.precision(), self.0.mul_i_ref(false)))
    }

    pub fn powu(&self, n: u32) -> Self {
        Self(Complex::with_val(self.precision(), (&self.0).pow(n)))
    }

    pub fn powi(&self, n: i32) -> Self {
        Self(Complex::with_val(self.precision(), (&self.0).pow(n)))
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let f = Float::with_val(self.precision(), q);
        Self(Complex::with_val(self.precision(), &self.0 * &f))
    }

    pub fn div_rational(&self, q: &Rational) -> Self {
        let f = Float::with_val(self.precision(), q);
        Self(Complex::with_val(self.precision(), &self.0 / &f))
    }

    pub fn add_rational(&self, q: &Rational) -> Self {
        let f = Float::with_val(self.precision(), q);
        Self(Complex::with_val(self.precision(), &self.0 + &f))
    }

    pub fn mul_f64(&self, x: f64) -> Self {
        Self(Complex::with_val(self.precision(), &self.0 * x))
    }

    /// `|self - other| <= rel * max(|self|, |other|)`, or both exactly equal.
    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        if self == other {
            return true;
        }
        let d = (self - other).abs_f64();
        d <= rel * self.abs_f64().max(other.abs_f64())
    }

    /// Relative comparison tolerance `10^-(prec/4)`.
    pub fn tolerance(prec: u32) -> f64 {
        10f64.powi(-((prec / 4) as i32))
    }

    /// Decimal rendering of one component with as many digits as the precision supports.
    pub fn component_string(x: &Float) -> String {
        let digits = ((x.prec() as f64) * std::f64::consts::LOG10_2).floor() as usize;
        if x.is_zero() {
            return "0".into();
        }
        x.to_string_radix(10, Some(digits.max(2)))
    }

    pub fn re_string(&self) -> String {
        Self::component_string(self.re())
    }

    pub fn im_string(&self) -> String {
        Self::component_string(self.im())
    }

    /// Short rendering with `digits` significant digits.
    pub fn display_digits(&self, digits: usize) -> String {
        // `x + 0.0` turns -0 into +0.
        let r = self.re_f64() + 0.0;
        let i = self.im_f64() + 0.0;
        let fmt_one = |x: f64| format!("{:.*e}", digits.saturating_sub(1), x);
        if i >= 0.0 || i.is_nan() {
            format!("{} + {}i", fmt_one(r), fmt_one(i))
        } else {
            format!("{} - {}i", fmt_one(r), fmt_one(-i))
        }
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_digits(17))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&ComplexScalar> for &ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: &ComplexScalar) -> ComplexScalar {
                let prec = self.precision().max(rhs.precision());
                ComplexScalar(Complex::with_val(prec, &self.0 $op &rhs.0))
            }
        }
        impl $trait<ComplexScalar> for ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: ComplexScalar) -> ComplexScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ComplexScalar> for ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: &ComplexScalar) -> ComplexScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ComplexScalar> for &ComplexScalar {
            type Output = ComplexScalar;
            fn $method(self, rhs: ComplexScalar) -> ComplexScalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> ComplexScalar {
        ComplexScalar(-self.0)
    }
}

impl Neg for &ComplexScalar {
    type Output = ComplexScalar;
    fn neg(self) -> ComplexScalar {
        ComplexScalar(Complex::with_val(self.precision(), -&self.0))
    }
}

impl std::iter::Sum for ComplexScalar {
    fn sum<I: Iterator<Item = ComplexScalar>>(iter: I) -> Self {
        let mut acc: Option<ComplexScalar> = None;
        for v in iter {
            acc = Some(match acc {
                None => v,
                Some(a) => a + v,
            });
        }
        acc.unwrap_or_else(|| ComplexScalar::zero(DEFAULT_PRECISION))
    }
}


/// Exact complex rational `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::new() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::new())
    }

    pub fn i() -> Self {
        Self { re: Rational::new(), im: Rational::from(1) }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }

    pub fn to_scalar(&self, prec: u32) -> ComplexScalar {
        ComplexScalar::from_rationals(&self.re, &self.im, prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(Rational::from(&self.re + &o.re), Rational::from(&self.im + &o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(Rational::from(&self.re - &o.re), Rational::from(&self.im - &o.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(Rational::from(-&self.re), Rational::from(-&self.im))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        Self::new(re, im)
    }

    /// `None` on division by zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let den = Rational::from(o.re.square_ref()) + Rational::from(o.im.square_ref());
        if den == 0 {
            return None;
        }
        let conj = Self::new(o.re.clone(), Rational::from(-&o.im));
        let num = self.mul(&conj);
        Some(Self::new(num.re / den.clone(), num.im / den))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(Rational::from(&self.re * q), Rational::from(&self.im * q))
    }
}
