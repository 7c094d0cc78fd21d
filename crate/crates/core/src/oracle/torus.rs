//! Residues as torus integrals `(2 pi i)^{-r} int_{|g_j| = eps_j} omega` for transverse `H`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::fast::FastFunction;
use super::OracleError;
use crate::arrangement::{Arrangement, Flag};
use crate::scalar::ComplexScalar;

pub const TORUS_NODES: usize = 256;

struct Torus {
    m: Vec<C64>,
    /// `F^{-1}` for the rows `f_j`, `j in H`.
    inv: Vec<Vec<f64>>,
    det: f64,
    /// `(k, sum_j |(f_k F^{-1})_j|, |g_k(m)|)` for hyperplanes outside `H`.
    foreign: Vec<(usize, Vec<f64>, f64)>,
}

fn setup(a: &Arrangement, h: &[usize]) -> Result<Torus, OracleError> {
    let r = a.dimension();
    if h.len() != r || !a.is_transverse(h) {
        return Err(OracleError::Unsupported("torus cycles need r transverse hyperplanes".into()));
    }
    let f = a.f_matrix(h);
    let inv_exact = f.inverse().map_err(|e| OracleError::Unsupported(e.to_string()))?;
    let det = f.determinant().map_err(|e| OracleError::Unsupported(e.to_string()))?.to_f64();
    let inv: Vec<Vec<f64>> = (0..r).map(|i| inv_exact.row(i).iter().map(|q| q.to_f64()).collect()).collect();
    let m_exact = a.pole_location(&Flag(h.to_vec()))?;
    let m: Vec<C64> = m_exact.iter().map(ComplexScalar::to_c64).collect();
    let mut foreign = Vec::new();
    for (k, hp) in a.hyperplanes().iter().enumerate() {
        if h.contains(&k) {
            continue;
        }
        let row = inv_exact.left_apply(&hp.f);
        let weights: Vec<f64> = row.iter().map(|q| q.to_f64().abs()).collect();
        let gk = hp.g().evaluate(&m_exact).abs_f64();
        foreign.push((k, weights, gk));
    }
    Ok(Torus { m, inv, det, foreign })
}

/// `eps_j = 1/10` of the distance (in `g`-units) from `m` to the nearest foreign hyperplane.
pub fn default_radii(a: &Arrangement, h: &[usize]) -> Result<Vec<f64>, OracleError> {
    let t = setup(a, h)?;
    let eps = t.foreign.iter().map(|(_, w, gk)| gk / w.iter().sum::<f64>()).fold(f64::INFINITY, f64::min);
    let eps = if eps.is_finite() { 0.1 * eps } else { 0.5 };
    Ok(vec![eps; a.dimension()])
}

/// Trapezoid rule with `n` nodes per angle on the torus `g_j(z) = eps_j e^{i theta_j}`.
pub fn torus_residue(a: &Arrangement, h: &[usize], eps: &[f64], n: usize) -> Result<ComplexScalar, OracleError> {
    let r = a.dimension();
    if eps.len() != r || eps.iter().any(|e| e.is_nan() || *e <= 0.0) {
        return Err(OracleError::Unsupported("one positive radius per hyperplane is required".into()));
    }
    let t = setup(a, h)?;
    for (k, w, gk) in &t.foreign {
        let reach: f64 = w.iter().zip(eps).map(|(w, e)| w * e).sum();
        if reach >= *gk {
            return Err(OracleError::ForeignPoleInsideTorus(k + 1));
        }
    }
    let fast = FastFunction::compile(&a.integrand()?);
    let total_nodes = n.pow(r as u32);
    let step = 2.0 * std::f64::consts::PI / n as f64;
    let rows: Vec<C64> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut acc = C64::new(0.0, 0.0);
            let inner = total_nodes / n;
            let mut z = vec![C64::new(0.0, 0.0); r];
            let mut w = vec![C64::new(0.0, 0.0); r];
            for rest in 0..inner {
                let mut code = rest;
                for j in 0..r {
                    let idx = if j == 0 {
                        first
                    } else {
                        let i = code % n;
                        code /= n;
                        i
                    };
                    w[j] = C64::from_polar(eps[j], step * idx as f64);
                }
                for (i, zi) in z.iter_mut().enumerate() {
                    *zi = t.m[i] + t.inv[i].iter().zip(&w).map(|(c, wj)| wj * *c).sum::<C64>();
                }
                let jac: C64 = w.iter().product();
                acc += fast.eval(&z) * jac;
            }
            acc
        })
        .collect();
    let sum: C64 = rows.iter().sum();
    let value = sum / (total_nodes as f64 * t.det);
    Ok(ComplexScalar::from_c64(value, a.precision()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{Hyperplane, Polyhedron};
    use crate::residue_engine::iterated_residue;
    use crate::symfun::{ExpAffine, ExpRationalFunction};
    use rug::Rational;

    const P: u32 = 128;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::from_f64(re, im, P)
    }

    #[test]
    fn unit_residue() {
        let a = Arrangement::new(
            1,
            vec![Hyperplane::new(vec![Rational::from(1)], c(1.0, 0.0))],
            ExpRationalFunction::constant(c(1.0, 0.0), 1),
        )
        .unwrap();
        let v = torus_residue(&a, &[0], &[0.1], TORUS_NODES).unwrap();
        assert!((v.to_c64() - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(default_radii(&a, &[0]).unwrap(), vec![0.5]);
    }

    #[test]
    fn example_one_matches_iterated_residue() {
        let (n1, n2) = (2.0f64, 3.0f64);
        let ln = [c(n1, 0.0).ln(), c(n2, 0.0).ln()];
        let l = ExpAffine { linear: vec![ln[0].mul_i(), ln[1].mul_i()], constant: -(&ln[0] + &ln[1]) };
        let hp = |f: [i64; 2]| Hyperplane::new(f.iter().map(|&v| Rational::from(v)).collect(), c(1.0, 0.0));
        let a = Arrangement::new(2, vec![hp([-1, 0]), hp([0, -1]), hp([1, 1])], ExpRationalFunction::exponential(l))
            .unwrap();
        let eps = default_radii(&a, &[0, 2]).unwrap();
        let torus = torus_residue(&a, &[0, 2], &eps, TORUS_NODES).unwrap();
        let iterated = iterated_residue(&a, &Flag(vec![0, 2]), &Polyhedron::standard(2)).unwrap();
        assert!((torus.to_c64() - iterated.to_c64()).norm() < 1e-8, "{torus} vs {iterated}");
        let half: Vec<f64> = eps.iter().map(|e| e / 2.0).collect();
        let torus2 = torus_residue(&a, &[0, 2], &half, TORUS_NODES).unwrap();
        assert!((torus.to_c64() - torus2.to_c64()).norm() < 1e-9);
        let big = vec![10.0; 2];
        assert_eq!(torus_residue(&a, &[0, 2], &big, 16).unwrap_err(), OracleError::ForeignPoleInsideTorus(2));
    }
}
