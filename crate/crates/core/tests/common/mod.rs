#![allow(dead_code)]

use rand::Rng;
use residuum::arrangement::{Arrangement, Hyperplane, Polyhedron};
use residuum::cli::{build, parse, Problem};
use residuum::symfun::{ExpAffine, ExpRationalFunction};
use residuum::{ComplexScalar, Rational};

pub const P: u32 = 128;

pub fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::from_f64(re, im, P)
}

pub fn problem(src: &str) -> Problem {
    build(&parse(src).expect("parses"), P).expect("builds")
}

pub const PI_A: &str = "(1,0) (0,1)";
pub const PI_B: &str = "(-1,1) (0,1)";
pub const PI_C: &str = "(1,-1) (1,0)";

pub fn example_one_src(n1: u32, n2: u32, cone: &str) -> String {
    format!(
        "vars x y;\ncone {cone};\nparam s1 = 1, s2 = 1, s3 = 1, n1 = {n1}, n2 = {n2};\n\
         num n1^(i*x - s1) * n2^(i*y - s2);\nden (-x - i*s1) (-y - i*s2) (x + y - i*s3);\n"
    )
}

pub const EXAMPLE_TWO_SRC: &str =
    "vars x y;\ncone (1,0) (-1,1);\nnum exp(2*pi*i*(x + 2*y));\nden (x - i) (y - i) (x + y - 2*i);\n";

/// `(2 pi i)^2 i m^{-3} / 3`.
pub fn example_one_value(n1: u32, n2: u32) -> ComplexScalar {
    let m = n1.max(n2) as f64;
    let v = c(m, 0.0).ln().mul_f64(-3.0).exp().mul_i() / c(3.0, 0.0);
    v * ComplexScalar::two_pi_i(P).powu(2)
}

/// `(d_x h, d_y h)` at `(i, i)` for `h = exp(2 pi i (x + 2y))`.
pub fn example_two_derivatives() -> (ComplexScalar, ComplexScalar) {
    let h = ComplexScalar::pi(P).mul_f64(-6.0).exp();
    let two_pi_i = ComplexScalar::two_pi_i(P);
    (&two_pi_i * &h, two_pi_i.mul_f64(2.0) * &h)
}

pub fn rel_close(a: &ComplexScalar, b: &ComplexScalar, rel: f64) -> bool {
    let d = (a - b).abs_f64();
    d <= rel * a.abs_f64().max(b.abs_f64())
}

pub fn rational<R: Rng>(rng: &mut R, range: i64, dens: &[i64]) -> Rational {
    let num = rng.gen_range(-range..=range);
    let den = dens[rng.gen_range(0..dens.len())];
    Rational::from((num, den))
}

pub fn int_vec<R: Rng>(rng: &mut R, r: usize, range: i64) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..r).map(|_| Rational::from(rng.gen_range(-range..=range))).collect();
        if v.iter().any(|x| *x != 0) {
            return v;
        }
    }
}

pub fn random_polyhedron<R: Rng>(rng: &mut R, r: usize) -> Polyhedron {
    loop {
        let basis: Vec<Vec<Rational>> = (0..r).map(|_| int_vec(rng, r, 2)).collect();
        if let Ok(p) = Polyhedron::new(basis) {
            return p;
        }
    }
}

pub fn random_shift<R: Rng>(rng: &mut R) -> ComplexScalar {
    c(rng.gen_range(0.3..2.5), rng.gen_range(-1.0..1.0))
}

/// `exp(i <l, x>)` with `<l, v_k> = c_k >= 0` on the generators: bounded on `Pi`.
pub fn bounded_exponential<R: Rng>(rng: &mut R, pi: &Polyhedron) -> ExpRationalFunction {
    let r = pi.dimension();
    let weights: Vec<Rational> = (0..r).map(|_| Rational::from((rng.gen_range(0..=2), 2))).collect();
    let z = pi.z_matrix();
    let linear: Vec<ComplexScalar> = (0..r)
        .map(|j| {
            let mut acc = Rational::new();
            for (k, w) in weights.iter().enumerate() {
                acc += Rational::from(w * z.get(k, j));
            }
            ComplexScalar::from_rational(&acc, P).mul_i()
        })
        .collect();
    ExpRationalFunction::exponential(ExpAffine { linear, constant: ComplexScalar::zero(P) })
}

/// `count` hyperplanes in dimension `r`, pairwise transverse.
pub fn random_hyperplanes<R: Rng>(rng: &mut R, r: usize, count: usize) -> Vec<Hyperplane> {
    loop {
        let hs: Vec<Hyperplane> = (0..count).map(|_| Hyperplane::new(int_vec(rng, r, 2), random_shift(rng))).collect();
        let probe = Arrangement::new(r, hs.clone(), ExpRationalFunction::constant(c(1.0, 0.0), r)).unwrap();
        let transverse = (0..count).all(|i| (i + 1..count).all(|j| probe.is_transverse(&[i, j])));
        if transverse {
            return hs;
        }
    }
}
