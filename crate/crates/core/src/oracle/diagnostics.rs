//! Semicircle diagnostics along the iterated residue expansion in `z_1, z_2, ...`.

use super::semicircle::{semicircle_check, HalfPlane, SemicircleReport, Trend};
use super::OracleError;
use crate::arrangement::{Arrangement, Polyhedron};
use crate::scalar::ComplexScalar;
use crate::symfun::{Affine, ExpRationalFunction};

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionStep {
    /// 1-based variable being integrated.
    pub variable: usize,
    /// Arc reports at sampled real values of the later variables.
    pub samples: Vec<(Vec<f64>, SemicircleReport)>,
    pub trend: Trend,
}

fn upper_poles(f: &ExpRationalFunction) -> Vec<Affine> {
    let prec = f.precision();
    let zeros = vec![ComplexScalar::zero(prec); f.arity().saturating_sub(1)];
    let mut out: Vec<Affine> = Vec::new();
    for t in f.terms() {
        for d in &t.denoms {
            let Some(p) = d.form.solve_for(0) else { continue };
            if p.evaluate(&zeros).im_f64() <= 0.0 {
                continue;
            }
            if !out.iter().any(|q| q.linear == p.linear && q.constant.approx_eq(&p.constant, 1e-20)) {
                out.push(p);
            }
        }
    }
    out
}

/// Close each one-variable integral in the upper half-plane and report whether the
/// arc integrals vanish as the radius grows.
pub fn expansion_diagnostics(
    a: &Arrangement,
    pi: &Polyhedron,
    radii: &[f64],
) -> Result<Vec<ExpansionStep>, OracleError> {
    let prec = a.precision();
    let r = a.dimension();
    let mut f = a.integrand_in(pi)?;
    let mut steps = Vec::with_capacity(r);
    for k in 0..r {
        let rest = r - k - 1;
        let grids: Vec<Vec<f64>> = if rest == 0 { vec![vec![]] } else { vec![vec![0.0; rest], vec![0.7; rest]] };
        let mut samples = Vec::new();
        for g in grids {
            let mut values = vec![ComplexScalar::zero(prec)];
            values.extend(g.iter().map(|&x| ComplexScalar::from_f64(x, 0.0, prec)));
            let line = f.restrict_to_line(0, &values)?;
            samples.push((g, semicircle_check(&line, radii, HalfPlane::Upper)?));
        }
        let trends: Vec<Trend> = samples.iter().map(|(_, s)| s.trend).collect();
        let trend = if trends.contains(&Trend::Growing) {
            Trend::Growing
        } else if trends.iter().all(|t| *t == Trend::Decaying) {
            Trend::Decaying
        } else {
            Trend::Inconclusive
        };
        steps.push(ExpansionStep { variable: k + 1, samples, trend });
        let mut next = ExpRationalFunction::zero(rest, prec);
        for p in upper_poles(&f) {
            next = next.add(&f.residue_1d(0, &p)?);
        }
        f = next;
    }
    Ok(steps)
}
