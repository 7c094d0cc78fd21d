use crate::arrangement::{permutations, Arrangement, Flag, Polyhedron};
use crate::scalar::ComplexScalar;
use crate::symfun::Term;

use super::ResidueError;

/// Which sufficient condition certifies convergence of the iterated expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convergence {
    BoundedNumeratorRule,
    DecayRule,
    UserAsserted,
    Unknown,
}

impl Convergence {
    pub fn as_str(self) -> &'static str {
        match self {
            Convergence::BoundedNumeratorRule => "BoundedNumeratorRule",
            Convergence::DecayRule => "DecayRule",
            Convergence::UserAsserted => "UserAsserted",
            Convergence::Unknown => "Unknown",
        }
    }
}

/// `exp(L)` is bounded on `Pi`: `Re L` has no linear part and `Re(i L(theta)) <= 0` on generators.
fn exponential_bounded(t: &Term, pi: &Polyhedron, tol: f64) -> bool {
    let l = &t.exp.linear;
    let size: f64 = l.iter().map(ComplexScalar::abs_f64).sum();
    if l.iter().any(|c| c.re_f64().abs() > tol * size) {
        return false;
    }
    pi.generators().iter().all(|theta| {
        let growth: f64 = l.iter().zip(theta).map(|(c, th)| -c.im_f64() * th.to_f64()).sum();
        growth <= tol * size
    })
}

pub fn convergence_heuristic(a: &Arrangement, pi: &Polyhedron) -> Result<Convergence, ResidueError> {
    if !a.compatibility_audit(pi)?.all_compatible {
        return Ok(Convergence::Unknown);
    }
    let big_r = a.total_degree();
    let r = a.dimension() as u32;
    let tol = ComplexScalar::tolerance(a.precision()).max(1e-14);
    let terms = a.numerator().terms();
    if !terms.iter().all(|t| exponential_bounded(t, pi, tol)) {
        return Ok(Convergence::Unknown);
    }
    if big_r > r && terms.iter().all(|t| t.poly.degree() == 0) {
        return Ok(Convergence::BoundedNumeratorRule);
    }
    if terms.iter().all(|t| t.poly.degree() + r < big_r) {
        return Ok(Convergence::DecayRule);
    }
    Ok(Convergence::Unknown)
}

/// Stable orderings whose row permutations are also stable.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProbeReport {
    pub stable_checked: usize,
    pub permutations_checked: usize,
    /// `(stable ordering, second stable ordering of the same hyperplanes)`.
    pub counterexamples: Vec<(Flag, Flag)>,
}

pub fn permutation_stability_probe(a: &Arrangement, pi: &Polyhedron) -> Result<ProbeReport, ResidueError> {
    let r = a.dimension();
    let perms = permutations(r);
    let mut report = ProbeReport::default();
    for flag in a.stable_collections(pi)? {
        report.stable_checked += 1;
        for w in perms.iter().filter(|w| w.iter().enumerate().any(|(i, &j)| i != j)) {
            report.permutations_checked += 1;
            let other = Flag(w.iter().map(|&j| flag.indices()[j]).collect());
            if a.profile(&other, pi)?.stable {
                report.counterexamples.push((flag.clone(), other));
            }
        }
    }
    Ok(report)
}
