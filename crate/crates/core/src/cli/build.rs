//! Turning a parsed [`ProblemSpec`] into an [`Arrangement`] and a [`Polyhedron`].

use std::collections::HashMap;

use rug::{Integer, Rational};
use thiserror::Error;

use super::ast::{BinOp, Expr, ProblemSpec};
use super::lexer::Pos;
use crate::arrangement::{
    canonicalize_exact, canonicalize_hyperplane, Arrangement, ArrangementError, Hyperplane, Polyhedron,
};
use crate::scalar::{ComplexScalar, GaussRational};
use crate::symfun::{ExpAffine, ExpRationalFunction, Polynomial, SymfunError};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{pos}: {message}")]
pub struct BuildError {
    pub pos: Pos,
    pub message: String,
}

fn fail<T>(pos: Pos, message: impl Into<String>) -> Result<T, BuildError> {
    Err(BuildError { pos, message: message.into() })
}

/// A complex constant, with its exact Gaussian-rational value when known.
#[derive(Clone, Debug)]
struct Num {
    value: ComplexScalar,
    exact: Option<GaussRational>,
}

impl Num {
    fn exact(q: GaussRational, prec: u32) -> Self {
        Self { value: q.to_scalar(prec), exact: Some(q) }
    }

    fn inexact(value: ComplexScalar) -> Self {
        Self { value, exact: None }
    }

    fn is_zero(&self) -> bool {
        self.exact.as_ref().map_or_else(|| self.value.is_zero(), GaussRational::is_zero)
    }

    fn add(&self, o: &Num) -> Num {
        Num { value: &self.value + &o.value, exact: self.exact.as_ref().zip(o.exact.as_ref()).map(|(a, b)| a.add(b)) }
    }

    fn neg(&self) -> Num {
        Num { value: -&self.value, exact: self.exact.as_ref().map(GaussRational::neg) }
    }

    fn mul(&self, o: &Num) -> Num {
        Num { value: &self.value * &o.value, exact: self.exact.as_ref().zip(o.exact.as_ref()).map(|(a, b)| a.mul(b)) }
    }

    fn div(&self, o: &Num) -> Option<Num> {
        if o.is_zero() {
            return None;
        }
        let exact = match (&self.exact, &o.exact) {
            (Some(a), Some(b)) => a.div(b),
            _ => None,
        };
        Some(Num { value: &self.value / &o.value, exact })
    }

    fn integer(&self) -> Option<i64> {
        let q = self.exact.as_ref()?;
        if !q.is_real() || *q.re.denom() != 1 {
            return None;
        }
        q.re.numer().to_i64()
    }
}

/// `sum a_j x_j + c`.
#[derive(Clone, Debug)]
struct Lin {
    linear: Vec<Num>,
    constant: Num,
}

#[derive(Clone, Debug)]
enum Val {
    Const(Num),
    Lin(Lin),
    Fun(ExpRationalFunction),
}

struct Env<'a> {
    vars: &'a [String],
    params: HashMap<String, Num>,
    prec: u32,
}

fn decimal(s: &str) -> Option<Rational> {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: Integer = format!("{int}{frac}").parse().ok()?;
    let den = Integer::from(Integer::u_pow_u(10, frac.len() as u32));
    Some(Rational::from((digits, den)))
}

fn symfun(pos: Pos, e: SymfunError) -> BuildError {
    BuildError { pos, message: e.to_string() }
}

impl Env<'_> {
    fn zero(&self) -> Num {
        Num::exact(GaussRational::zero(), self.prec)
    }

    fn to_fun(&self, v: &Val) -> ExpRationalFunction {
        let r = self.vars.len();
        match v {
            Val::Const(c) => ExpRationalFunction::constant(c.value.clone(), r),
            Val::Lin(l) => {
                let mut p = Polynomial::constant(l.constant.value.clone(), r);
                for (j, a) in l.linear.iter().enumerate() {
                    if !a.is_zero() {
                        let mut e = vec![0; r];
                        e[j] = 1;
                        p.add_monomial(e, a.value.clone());
                    }
                }
                ExpRationalFunction::polynomial(p)
            }
            Val::Fun(f) => f.clone(),
        }
    }

    fn lin_of(&self, v: Val) -> Option<Lin> {
        match v {
            Val::Const(c) => Some(Lin { linear: vec![self.zero(); self.vars.len()], constant: c }),
            Val::Lin(l) => Some(l),
            Val::Fun(_) => None,
        }
    }

    fn normalize(&self, l: Lin) -> Val {
        if l.linear.iter().all(Num::is_zero) {
            Val::Const(l.constant)
        } else {
            Val::Lin(l)
        }
    }

    fn add(&self, a: Val, b: Val) -> Val {
        match (a, b) {
            (Val::Const(x), Val::Const(y)) => Val::Const(x.add(&y)),
            (a @ (Val::Const(_) | Val::Lin(_)), b @ (Val::Const(_) | Val::Lin(_))) => {
                let (x, y) = (self.lin_of(a).unwrap(), self.lin_of(b).unwrap());
                self.normalize(Lin {
                    linear: x.linear.iter().zip(&y.linear).map(|(p, q)| p.add(q)).collect(),
                    constant: x.constant.add(&y.constant),
                })
            }
            (a, b) => Val::Fun(self.to_fun(&a).add(&self.to_fun(&b))),
        }
    }

    fn scale_lin(&self, l: &Lin, c: &Num) -> Val {
        self.normalize(Lin { linear: l.linear.iter().map(|a| a.mul(c)).collect(), constant: l.constant.mul(c) })
    }

    fn mul(&self, a: Val, b: Val, pos: Pos) -> Result<Val, BuildError> {
        Ok(match (a, b) {
            (Val::Const(x), Val::Const(y)) => Val::Const(x.mul(&y)),
            (Val::Const(c), Val::Lin(l)) | (Val::Lin(l), Val::Const(c)) => self.scale_lin(&l, &c),
            (a, b) => Val::Fun(self.to_fun(&a).mul(&self.to_fun(&b)).map_err(|e| symfun(pos, e))?),
        })
    }

    fn neg(&self, a: Val) -> Val {
        match a {
            Val::Const(c) => Val::Const(c.neg()),
            Val::Lin(l) => self.scale_lin(&l, &Num::exact(GaussRational::real(Rational::from(-1)), self.prec)),
            Val::Fun(f) => Val::Fun(f.scale(&-ComplexScalar::one(self.prec))),
        }
    }

    fn exp(&self, arg: Val, pos: Pos) -> Result<Val, BuildError> {
        match arg {
            Val::Const(c) => Ok(Val::Const(Num::inexact(c.value.exp()))),
            Val::Lin(l) => Ok(Val::Fun(ExpRationalFunction::exponential(ExpAffine {
                linear: l.linear.iter().map(|a| a.value.clone()).collect(),
                constant: l.constant.value,
            }))),
            Val::Fun(_) => fail(pos, "exponents must be affine in the variables"),
        }
    }

    fn pow(&self, base: Val, exp: Val, pos: Pos) -> Result<Val, BuildError> {
        if let Val::Const(e) = &exp {
            if let Some(n) = e.integer() {
                return match base {
                    Val::Const(b) => {
                        if b.is_zero() && n < 0 {
                            return fail(pos, "division by zero");
                        }
                        let exact = b.exact.as_ref().and_then(|q| {
                            let mut acc = GaussRational::real(Rational::from(1));
                            for _ in 0..n.unsigned_abs().min(4096) {
                                acc = acc.mul(q);
                            }
                            if n < 0 {
                                GaussRational::real(Rational::from(1)).div(&acc)
                            } else {
                                Some(acc)
                            }
                        });
                        let exact = if n.unsigned_abs() > 4096 { None } else { exact };
                        Ok(Val::Const(Num { value: b.value.powi(n as i32), exact }))
                    }
                    other if n >= 0 => {
                        let f = self.to_fun(&other);
                        let mut acc = ExpRationalFunction::constant(ComplexScalar::one(self.prec), self.vars.len());
                        for _ in 0..n {
                            acc = acc.mul(&f).map_err(|e| symfun(pos, e))?;
                        }
                        Ok(Val::Fun(acc))
                    }
                    _ => fail(pos, "negative powers of non-constants belong in `den`"),
                };
            }
        }
        let Val::Const(b) = base else {
            return fail(pos, "only constants may be raised to non-integer or variable powers");
        };
        if b.is_zero() {
            return fail(pos, "0 raised to a non-integer power");
        }
        let ln = Num::inexact(b.value.ln());
        let arg = self.mul(exp, Val::Const(ln), pos)?;
        self.exp(arg, pos)
    }

    fn eval(&self, e: &Expr, pos: Pos) -> Result<Val, BuildError> {
        match e {
            Expr::Number(s) => match decimal(s) {
                Some(q) => Ok(Val::Const(Num::exact(GaussRational::real(q), self.prec))),
                None => fail(pos, format!("malformed number `{s}`")),
            },
            Expr::Ident(name) => {
                if name == "i" {
                    return Ok(Val::Const(Num::exact(GaussRational::i(), self.prec)));
                }
                if name == "pi" {
                    return Ok(Val::Const(Num::inexact(ComplexScalar::pi(self.prec))));
                }
                if let Some(j) = self.vars.iter().position(|v| v == name) {
                    let mut linear = vec![self.zero(); self.vars.len()];
                    linear[j] = Num::exact(GaussRational::real(Rational::from(1)), self.prec);
                    return Ok(Val::Lin(Lin { linear, constant: self.zero() }));
                }
                match self.params.get(name) {
                    Some(v) => Ok(Val::Const(v.clone())),
                    None => fail(pos, format!("unbound parameter `{name}`")),
                }
            }
            Expr::Neg(x) => Ok(self.neg(self.eval(x, pos)?)),
            Expr::Call(f, arg) => {
                let v = self.eval(arg, pos)?;
                match f.as_str() {
                    "exp" => self.exp(v, pos),
                    "ln" => match v {
                        Val::Const(c) if !c.is_zero() => Ok(Val::Const(Num::inexact(c.value.ln()))),
                        Val::Const(_) => fail(pos, "ln(0)"),
                        _ => fail(pos, "ln takes a constant argument"),
                    },
                    _ => fail(pos, format!("unknown function `{f}`")),
                }
            }
            Expr::Binary(op, l, r) => {
                let a = self.eval(l, pos)?;
                let b = self.eval(r, pos)?;
                match op {
                    BinOp::Add => Ok(self.add(a, b)),
                    BinOp::Sub => Ok(self.add(a, self.neg(b))),
                    BinOp::Mul => self.mul(a, b, pos),
                    BinOp::Div => {
                        let Val::Const(c) = b else {
                            return fail(pos, "division by a non-constant; put denominators in `den`");
                        };
                        let Some(inv) = Num::exact(GaussRational::real(Rational::from(1)), self.prec).div(&c) else {
                            return fail(pos, "division by zero");
                        };
                        self.mul(a, Val::Const(inv), pos)
                    }
                    BinOp::Pow => self.pow(a, b, pos),
                }
            }
        }
    }
}

/// A problem ready for evaluation.
#[derive(Clone, Debug)]
pub struct Problem {
    pub vars: Vec<String>,
    pub arrangement: Arrangement,
    pub polyhedron: Polyhedron,
    /// Source position of each hyperplane's first factor.
    pub hyperplane_positions: Vec<Pos>,
}

fn arrangement_error(pos: Pos, e: ArrangementError) -> BuildError {
    BuildError { pos, message: e.to_string() }
}

pub fn build(spec: &ProblemSpec, prec: u32) -> Result<Problem, BuildError> {
    let origin = Pos { line: 1, col: 1 };
    let vars: Vec<String> = spec.vars.iter().map(|v| v.value.clone()).collect();
    if vars.is_empty() {
        return fail(origin, "no variables declared (`vars x y;`)");
    }
    for (k, v) in spec.vars.iter().enumerate() {
        if vars[..k].contains(&v.value) {
            return fail(v.pos, format!("variable `{}` declared twice", v.value));
        }
    }
    let r = vars.len();
    let mut env = Env { vars: &vars, params: HashMap::new(), prec };
    for (name, expr) in &spec.params {
        if vars.contains(&name.value) || env.params.contains_key(&name.value) {
            return fail(name.pos, format!("`{}` is already bound", name.value));
        }
        match env.eval(expr, name.pos)? {
            Val::Const(c) => {
                env.params.insert(name.value.clone(), c);
            }
            _ => return fail(name.pos, format!("parameter `{}` depends on a variable", name.value)),
        }
    }

    let polyhedron = match &spec.cone {
        None => Polyhedron::standard(r),
        Some(gens) => {
            if gens.len() != r {
                return fail(
                    gens.first().map_or(origin, |g| g.pos),
                    format!("{r} cone generators are required, found {}", gens.len()),
                );
            }
            let mut basis = Vec::with_capacity(r);
            for g in gens {
                if g.value.len() != r {
                    return fail(g.pos, format!("cone generators need {r} entries"));
                }
                let mut row = Vec::with_capacity(r);
                for e in &g.value {
                    match env.eval(e, g.pos)? {
                        Val::Const(Num { exact: Some(q), .. }) if q.is_real() => row.push(q.re),
                        _ => return fail(g.pos, "cone generator entries must be exact real rationals"),
                    }
                }
                basis.push(row);
            }
            Polyhedron::new(basis).map_err(|e| arrangement_error(gens[0].pos, e))?
        }
    };

    let mut numerator = match &spec.num {
        None => ExpRationalFunction::constant(ComplexScalar::one(prec), r),
        Some(n) => {
            let v = env.eval(&n.value, n.pos)?;
            env.to_fun(&v)
        }
    };

    let mut hyperplanes: Vec<Hyperplane> = Vec::new();
    let mut positions = Vec::new();
    let tol = ComplexScalar::tolerance(prec);
    for factor in &spec.den {
        let pos = factor.pos;
        let lin = match env.eval(&factor.value.expr, pos)? {
            Val::Lin(l) => l,
            Val::Const(_) => return fail(pos, "denominator factor is constant; move it to `num`"),
            Val::Fun(_) => return fail(pos, "denominator factors must be affine"),
        };
        let exact: Option<Vec<GaussRational>> = lin.linear.iter().map(|a| a.exact.clone()).collect();
        let canonical = match exact {
            Some(ex) => canonicalize_exact(&ex, &lin.constant.value),
            None => {
                let floats: Vec<ComplexScalar> = lin.linear.iter().map(|a| a.value.clone()).collect();
                canonicalize_hyperplane(&floats, &lin.constant.value)
            }
        }
        .map_err(|e| arrangement_error(pos, e))?;
        let m = factor.value.power;
        numerator = numerator.scale(&canonical.scale.powu(m).recip());
        let h = canonical.hyperplane;
        match hyperplanes.iter_mut().find(|k| k.f == h.f && k.s.approx_eq(&h.s, tol)) {
            Some(k) => k.multiplicity += m,
            None => {
                hyperplanes.push(h.with_multiplicity(m));
                positions.push(pos);
            }
        }
    }
    if hyperplanes.is_empty() {
        return fail(origin, "no denominator factors (`den (...);`)");
    }
    let arrangement = Arrangement::new(r, hyperplanes, numerator).map_err(|e| arrangement_error(origin, e))?;
    Ok(Problem { vars, arrangement, polyhedron, hyperplane_positions: positions })
}
