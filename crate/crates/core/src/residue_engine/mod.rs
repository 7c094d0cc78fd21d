//! Iterated residues along flags and the residue formula
//! `int_{R^r} omega = (2 pi i)^r sum_{gamma in Z_Pi} res[omega, gamma]`.
//!
//! Residues are taken of the density `|det V| h(V z) / prod g_k(V z)^{m_k}` in the
//! polyhedron's coordinates `z`, so the formula holds without orientation signs.

mod convergence;
mod grothendieck;

pub use convergence::{convergence_heuristic, permutation_stability_probe, Convergence, ProbeReport};
pub use grothendieck::{
    canonical_grouping, grothendieck_residue, grouping_report, DivisorGrouping, GroupingPoint, GroupingReport,
};

use rayon::prelude::*;
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, AuditReport, Flag, FlagClass, Polyhedron};
use crate::scalar::ComplexScalar;
use crate::symfun::{Affine, SymfunError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResidueError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Symfun(#[from] SymfunError),
    #[error("flag {0} is not complete")]
    IncompleteFlag(Flag),
    #[error("flag {0} is insoluble in these coordinates")]
    InsolubleFlag(Flag),
    #[error("flag {0} arising from the grouping is insoluble in every coordinate system tried")]
    BruhatViolation(Flag),
    #[error("no Pi-stable flags: the stable set is empty")]
    EmptyStableSet,
    #[error("grouping is not discrete: {0}")]
    NotDiscrete(String),
    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),
}

/// Contribution of one flag of `Z_Pi`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagContribution {
    pub flag: Flag,
    /// Ordered stable collections cutting out this flag.
    pub members: Vec<Flag>,
    /// `res[omega, gamma]` (without the `(2 pi i)^r` factor).
    pub residue: ComplexScalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub all_compatible: bool,
    pub convergence: Convergence,
    pub warnings: Vec<String>,
}

impl Certificate {
    /// Compatible, and convergent by a sufficient rule or by assertion.
    pub fn certified(&self) -> bool {
        self.all_compatible && self.convergence != Convergence::Unknown
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueResult {
    pub value: ComplexScalar,
    pub flag_contributions: Vec<FlagContribution>,
    pub certificate: Certificate,
    pub audit: AuditReport,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalOptions {
    /// Record `UserAsserted` when no sufficient convergence rule applies.
    pub assume_convergent: bool,
}

fn require_complete(a: &Arrangement, flag: &Flag) -> Result<(), ResidueError> {
    if flag.depth() != a.dimension() {
        return Err(ResidueError::IncompleteFlag(flag.clone()));
    }
    Ok(())
}

/// `tres_z[omega, gamma]`: zero outside the open Bruhat cell, else the iterated
/// one-variable residue in `z_1`, then `z_2`, ...
pub fn truncated_iterated_residue(
    a: &Arrangement,
    flag: &Flag,
    pi: &Polyhedron,
) -> Result<ComplexScalar, ResidueError> {
    require_complete(a, flag)?;
    let r = a.dimension();
    let prec = a.precision();
    let mut f = a.integrand_in(pi)?;
    // Images of z_1..z_r as affine forms in the variables still free.
    let mut chart: Vec<Affine> = (0..r).map(|j| Affine::variable(r, j, prec)).collect();
    for &h in flag.indices() {
        let g = a.g_in(h, pi).compose(&chart);
        let Some(point) = g.solve_for(0) else {
            return Ok(ComplexScalar::zero(prec));
        };
        f = f.residue_1d(0, &point)?;
        chart = chart.iter().map(|c| c.substitute(0, &point)).collect();
    }
    Ok(f.evaluate(&[])?)
}

/// `res[omega, gamma]` for a soluble flag.
pub fn iterated_residue(a: &Arrangement, flag: &Flag, pi: &Polyhedron) -> Result<ComplexScalar, ResidueError> {
    require_complete(a, flag)?;
    if !a.profile(flag, pi)?.in_bruhat_cell {
        return Err(ResidueError::InsolubleFlag(flag.clone()));
    }
    truncated_iterated_residue(a, flag, pi)
}

fn class_residues(
    a: &Arrangement,
    classes: Vec<FlagClass>,
    pi: &Polyhedron,
) -> Result<Vec<FlagContribution>, ResidueError> {
    classes
        .into_par_iter()
        .map(|c| {
            let residue = truncated_iterated_residue(a, &c.representative, pi)?;
            Ok(FlagContribution { flag: c.representative, members: c.members, residue })
        })
        .collect()
}

fn total(contributions: &[FlagContribution], prec: u32) -> ComplexScalar {
    contributions.iter().fold(ComplexScalar::zero(prec), |acc, c| acc + &c.residue)
}

/// Warnings for complete collections whose pole sits on the real contour.
fn degeneracy_warnings(a: &Arrangement, pi: &Polyhedron) -> Result<Vec<String>, ResidueError> {
    let r = a.dimension();
    let zeros = vec![0.0; r.saturating_sub(1)];
    let mut out = Vec::new();
    for flag in a.enumerate_flags(r) {
        if !a.profile(&flag, pi)?.in_bruhat_cell {
            continue;
        }
        if a.z_star(&flag, pi, &zeros)?.degenerate {
            out.push(format!("flag {flag} has a pole on the contour (Im z* = 0); treated as non-contributing"));
        }
    }
    Ok(out)
}

/// Sum over `Z_Pi` of iterated residues times `(2 pi i)^r`, with its certificate.
pub fn evaluate_integral(
    a: &Arrangement,
    pi: &Polyhedron,
    options: &EvalOptions,
) -> Result<ResidueResult, ResidueError> {
    let prec = a.precision();
    let audit = a.compatibility_audit(pi)?;
    let contributions = class_residues(a, a.stable_flags(pi)?, pi)?;
    let value = total(&contributions, prec) * ComplexScalar::two_pi_i(prec).powu(a.dimension() as u32);
    let mut warnings = degeneracy_warnings(a, pi)?;
    let mut convergence = convergence_heuristic(a, pi)?;
    if convergence == Convergence::Unknown && options.assume_convergent {
        convergence = Convergence::UserAsserted;
    }
    if !audit.all_compatible {
        warnings.push(format!(
            "{} ordered collection(s) are not Pi-compatible; the residue formula may fail",
            audit.violator_count
        ));
    }
    if contributions.is_empty() {
        warnings.push("no Pi-stable flags; the residue sum is empty".into());
    }
    Ok(ResidueResult {
        value,
        flag_contributions: contributions,
        certificate: Certificate { all_compatible: audit.all_compatible, convergence, warnings },
        audit,
    })
}

/// Flags picked up by the iterated expansion at the current shifts (`Im z_k* > 0`)
/// and the sum of their residues (without `(2 pi i)^r`).
pub fn arising_flag_sum(
    a: &Arrangement,
    pi: &Polyhedron,
) -> Result<(ComplexScalar, Vec<FlagContribution>), ResidueError> {
    let r = a.dimension();
    let zeros = vec![0.0; r.saturating_sub(1)];
    let mut arising = Vec::new();
    for flag in a.enumerate_flags(r) {
        if !a.profile(&flag, pi)?.in_bruhat_cell {
            continue;
        }
        if a.z_star(&flag, pi, &zeros)?.arises {
            arising.push(flag);
        }
    }
    let contributions = class_residues(a, a.flag_classes(&arising), pi)?;
    Ok((total(&contributions, a.precision()), contributions))
}
