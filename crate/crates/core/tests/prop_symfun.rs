mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use residuum::symfun::{Affine, ExpAffine, ExpRationalFunction, Polynomial};
use residuum::{ComplexScalar, Rational};

fn complex<R: Rng>(rng: &mut R, scale: f64) -> ComplexScalar {
    c(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Nonzero on real points: the constant has `|Im| >= 1/2`.
fn real_free_form<R: Rng>(rng: &mut R, arity: usize) -> Affine {
    let im = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Affine::new(int_vec(rng, arity, 2), c(rng.gen_range(-1.0..1.0), im))
}

fn random_poly<R: Rng>(rng: &mut R, arity: usize) -> Polynomial {
    let mut p = Polynomial::zero(arity, P);
    for _ in 0..rng.gen_range(1..=3) {
        let exps = (0..arity).map(|_| rng.gen_range(0..=2)).collect();
        p.add_monomial(exps, complex(rng, 2.0));
    }
    if p.is_zero() {
        p = Polynomial::one(arity, P);
    }
    p
}

fn random_exp<R: Rng>(rng: &mut R, arity: usize) -> ExpAffine {
    ExpAffine { linear: (0..arity).map(|_| complex(rng, 0.5)).collect(), constant: complex(rng, 0.5) }
}

fn random_term<R: Rng>(rng: &mut R, arity: usize, extra: &[(Affine, u32)]) -> ExpRationalFunction {
    let mut denoms: Vec<(Affine, u32)> =
        (0..rng.gen_range(0..=2)).map(|_| (real_free_form(rng, arity), rng.gen_range(1..=2))).collect();
    denoms.extend_from_slice(extra);
    ExpRationalFunction::from_term(complex(rng, 2.0), random_poly(rng, arity), random_exp(rng, arity), denoms).unwrap()
}

fn random_function<R: Rng>(rng: &mut R, arity: usize) -> ExpRationalFunction {
    let mut f = random_term(rng, arity, &[]);
    for _ in 0..rng.gen_range(0..=1) {
        f = f.add(&random_term(rng, arity, &[]));
    }
    f
}

fn real_point<R: Rng>(rng: &mut R, arity: usize) -> Vec<ComplexScalar> {
    (0..arity).map(|_| c(rng.gen_range(-2.0..2.0), 0.0)).collect()
}

fn agree(
    f: &ExpRationalFunction,
    g: &ExpRationalFunction,
    rng: &mut ChaCha8Rng,
    rel: f64,
) -> Result<(), TestCaseError> {
    for _ in 0..5 {
        let x = real_point(rng, f.arity());
        let (u, v) = (f.evaluate(&x).unwrap(), g.evaluate(&x).unwrap());
        prop_assert!((&u - &v).abs_f64() <= rel * (1.0 + u.abs_f64()), "{} vs {}", u, v);
    }
    Ok(())
}

/// `z_0 - alpha(z_1, ...)` with `alpha` real-pole-free.
fn pole<R: Rng>(rng: &mut R, arity: usize) -> (Affine, Affine) {
    let alpha = real_free_form(rng, arity - 1);
    let mut linear = vec![Rational::from(1)];
    linear.extend(alpha.linear.iter().map(|a| Rational::from(-a)));
    (Affine::new(linear, -alpha.constant.clone()), alpha)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_matches_central_differences(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arity = rng.gen_range(1..=2);
        let f = random_function(&mut rng, arity);
        let h = 1e-6;
        for _ in 0..20 {
            let x = real_point(&mut rng, arity);
            for var in 0..arity {
                let d = f.differentiate(var).evaluate(&x).unwrap();
                let (mut up, mut down) = (x.clone(), x.clone());
                up[var] = &up[var] + c(h, 0.0);
                down[var] = &down[var] - c(h, 0.0);
                let fd = (f.evaluate(&up).unwrap() - f.evaluate(&down).unwrap()).mul_f64(0.5 / h);
                prop_assert!((&d - &fd).abs_f64() <= 1e-6 * (1.0 + d.abs_f64()), "{} vs {}", d, fd);
            }
        }
    }

    #[test]
    fn simple_pole_residue_is_the_cofactor(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (form, alpha) = pole(&mut rng, 2);
        let coeff = complex(&mut rng, 2.0);
        let (poly, exp) = (random_poly(&mut rng, 2), random_exp(&mut rng, 2));
        let rest: Vec<(Affine, u32)> = (0..rng.gen_range(0..=2)).map(|_| (real_free_form(&mut rng, 2), 1)).collect();
        let mut with_pole = rest.clone();
        with_pole.push((form, 1));
        let f = ExpRationalFunction::from_term(coeff.clone(), poly.clone(), exp.clone(), with_pole).unwrap();
        let cofactor = ExpRationalFunction::from_term(coeff, poly, exp, rest).unwrap();
        let res = f.residue_1d(0, &alpha).unwrap();
        let expected = cofactor.substitute_affine(0, &alpha).unwrap();
        prop_assert_eq!(res.terms().len(), expected.terms().len());
        agree(&res, &expected, &mut rng, 1e-30)?;
    }

    #[test]
    fn residue_is_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (form, alpha) = pole(&mut rng, 2);
        let m = rng.gen_range(1..=3);
        let f = random_term(&mut rng, 2, &[(form.clone(), m)]);
        let n = rng.gen_range(1..=2);
        let g = random_term(&mut rng, 2, &[(form, n)]).add(&random_function(&mut rng, 2));
        let lhs = f.add(&g).residue_1d(0, &alpha).unwrap();
        let rhs = f.residue_1d(0, &alpha).unwrap().add(&g.residue_1d(0, &alpha).unwrap());
        agree(&lhs, &rhs, &mut rng, 1e-25)?;
    }

    #[test]
    fn substitution_commutes_with_other_derivatives(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_function(&mut rng, 3);
        // `z_0 = a z_2 + b`, independent of `z_1`.
        let point = Affine::new(vec![Rational::new(), Rational::from(rng.gen_range(-2..=2))], complex(&mut rng, 1.0));
        let lhs = f.differentiate(1).substitute_affine(0, &point).unwrap();
        let rhs = f.substitute_affine(0, &point).unwrap().differentiate(0);
        for _ in 0..5 {
            let x = real_point(&mut rng, 2);
            let (Ok(u), Ok(v)) = (lhs.evaluate(&x), rhs.evaluate(&x)) else { continue };
            prop_assert!((&u - &v).abs_f64() <= 1e-25 * (1.0 + u.abs_f64()), "{} vs {}", u, v);
        }
    }
}
