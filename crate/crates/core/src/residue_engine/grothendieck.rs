use std::fmt;

use rug::Rational;

use crate::arrangement::{permutations, Arrangement, Flag, Polyhedron};
use crate::scalar::ComplexScalar;

use super::{truncated_iterated_residue, ResidueError};

/// `D = (D_1, ..., D_r)`: each `D_k` is a set of hyperplane indices (0-based, sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorGrouping {
    pub groups: Vec<Vec<usize>>,
}

impl DivisorGrouping {
    pub fn new(groups: Vec<Vec<usize>>) -> Self {
        let groups = groups
            .into_iter()
            .map(|mut g| {
                g.sort_unstable();
                g.dedup();
                g
            })
            .collect();
        Self { groups }
    }

    fn validate(&self, a: &Arrangement) -> Result<(), ResidueError> {
        if self.groups.len() != a.dimension() {
            return Err(ResidueError::InvalidGrouping(format!(
                "{} groups for dimension {}",
                self.groups.len(),
                a.dimension()
            )));
        }
        for g in &self.groups {
            if g.is_empty() {
                return Err(ResidueError::InvalidGrouping("empty group".into()));
            }
            if let Some(&i) = g.iter().find(|&&i| i >= a.hyperplanes().len()) {
                return Err(ResidueError::InvalidGrouping(format!("hyperplane index {} out of range", i + 1)));
            }
        }
        Ok(())
    }

    /// Every ordered choice `(H_1, ..., H_r)` with `H_k in D_k`.
    fn choices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for g in &self.groups {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    g.iter().map(move |&h| {
                        let mut p = prefix.clone();
                        p.push(h);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

impl fmt::Display for DivisorGrouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.groups.iter().map(|g| g.iter().map(|i| format!("H{}", i + 1)).collect::<String>()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn same_point(a: &[ComplexScalar], b: &[ComplexScalar], tol: f64) -> bool {
    let scale = 1.0 + a.iter().chain(b).map(ComplexScalar::abs_f64).fold(0.0, f64::max);
    a.iter().zip(b).all(|(x, y)| (x - y).abs_f64() <= tol * scale)
}

type PointFlags = (Vec<ComplexScalar>, Vec<Flag>);

/// Transverse choices from `D`, grouped by terminal point, then by flag.
fn points_of(a: &Arrangement, d: &DivisorGrouping) -> Result<Vec<PointFlags>, ResidueError> {
    d.validate(a)?;
    let tol = ComplexScalar::tolerance(a.precision());
    let mut points: Vec<PointFlags> = Vec::new();
    for choice in d.choices() {
        if !a.is_transverse(&choice) {
            let mut basis: Vec<usize> = Vec::new();
            let mut consistent = true;
            for &h in &choice {
                let mut trial = basis.clone();
                trial.push(h);
                if a.is_transverse(&trial) {
                    basis = trial;
                } else if !a.contains_intersection(h, &basis) {
                    consistent = false;
                    break;
                }
            }
            if consistent {
                let label: Vec<String> = choice.iter().map(|i| format!("H{}", i + 1)).collect();
                return Err(ResidueError::NotDiscrete(format!(
                    "{} meet in a positive-dimensional set",
                    label.join(" cap ")
                )));
            }
            continue;
        }
        let flag = Flag(choice);
        let m = a.pole_location(&flag)?;
        match points.iter_mut().find(|(p, _)| same_point(p, &m, tol)) {
            Some((_, flags)) => flags.push(flag),
            None => points.push((m, vec![flag])),
        }
    }
    Ok(points)
}

/// Coordinate systems tried in order: the polyhedron's generators permuted, the
/// standard basis permuted, then small integer bases.
fn coordinate_candidates(pi: &Polyhedron) -> impl Iterator<Item = Polyhedron> + '_ {
    let r = pi.dimension();
    let perms = permutations(r);
    let from_pi: Vec<Polyhedron> = perms.iter().map(|p| pi.permuted(p)).collect();
    let std = Polyhedron::standard(r);
    let from_std: Vec<Polyhedron> = perms.iter().map(|p| std.permuted(p)).collect();
    let entries = [1i64, -1, 2, 0, -2, 3];
    let total = entries.len().pow((r * r) as u32).min(200_000);
    let enumerated = (0..total).filter_map(move |mut code| {
        let mut basis = vec![vec![Rational::new(); r]; r];
        for row in basis.iter_mut() {
            for v in row.iter_mut() {
                *v = Rational::from(entries[code % entries.len()]);
                code /= entries.len();
            }
        }
        Polyhedron::new(basis).ok()
    });
    from_pi.into_iter().chain(from_std).chain(enumerated)
}

fn residue_at(a: &Arrangement, flags: &[Flag], pi: &Polyhedron) -> Result<ComplexScalar, ResidueError> {
    let mut classes: Vec<Flag> = Vec::new();
    for f in flags {
        if !classes.iter().any(|c| a.same_flag(c, f)) {
            classes.push(f.clone());
        }
    }
    for w in coordinate_candidates(pi) {
        let mut soluble = true;
        for f in &classes {
            if !a.profile(f, &w)?.in_bruhat_cell {
                soluble = false;
                break;
            }
        }
        if !soluble {
            continue;
        }
        let mut sum = ComplexScalar::zero(a.precision());
        for f in &classes {
            sum = sum + truncated_iterated_residue(a, f, &w)?;
        }
        // Residues in `w` carry sign(det W) relative to the coordinate-free residue.
        return Ok(if w.orientation() == pi.orientation() { sum } else { -sum });
    }
    Err(ResidueError::BruhatViolation(classes.into_iter().next().expect("nonempty flag list")))
}

/// `res_D[omega, m]` as the sum of truncated residues over flags arising from `D` at `m`.
pub fn grothendieck_residue(
    a: &Arrangement,
    d: &DivisorGrouping,
    m: &[ComplexScalar],
    pi: &Polyhedron,
) -> Result<ComplexScalar, ResidueError> {
    let tol = ComplexScalar::tolerance(a.precision());
    let points = points_of(a, d)?;
    match points.iter().find(|(p, _)| same_point(p, m, tol)) {
        Some((_, flags)) => residue_at(a, flags, pi),
        None => Ok(ComplexScalar::zero(a.precision())),
    }
}

/// `D_k` = union of the `k`-th members of all Pi-stable ordered collections.
pub fn canonical_grouping(a: &Arrangement, pi: &Polyhedron) -> Result<DivisorGrouping, ResidueError> {
    let stable = a.stable_collections(pi)?;
    if stable.is_empty() {
        return Err(ResidueError::EmptyStableSet);
    }
    let groups = (0..a.dimension()).map(|k| stable.iter().map(|f| f.indices()[k]).collect()).collect();
    let d = DivisorGrouping::new(groups);
    points_of(a, &d)?;
    Ok(d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupingPoint {
    pub point: Vec<ComplexScalar>,
    pub flags: Vec<Flag>,
    pub residue: ComplexScalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupingReport {
    pub grouping: DivisorGrouping,
    pub points: Vec<GroupingPoint>,
    /// Sum of `res_D` over all points.
    pub total: ComplexScalar,
    /// Sum of residues over `Z_Pi`.
    pub stable_sum: ComplexScalar,
    pub matches_stable_sum: bool,
}

/// Grothendieck residues of `D` at every point it cuts out, compared with the `Z_Pi` sum.
pub fn grouping_report(a: &Arrangement, d: &DivisorGrouping, pi: &Polyhedron) -> Result<GroupingReport, ResidueError> {
    let prec = a.precision();
    let mut points = Vec::new();
    let mut total = ComplexScalar::zero(prec);
    for (m, flags) in points_of(a, d)? {
        let residue = residue_at(a, &flags, pi)?;
        total = total + &residue;
        points.push(GroupingPoint { point: m, flags, residue });
    }
    let mut stable_sum = ComplexScalar::zero(prec);
    for c in a.stable_flags(pi)? {
        stable_sum = stable_sum + truncated_iterated_residue(a, &c.representative, pi)?;
    }
    let matches_stable_sum = total.approx_eq(&stable_sum, 1e-8) || (&total - &stable_sum).abs_f64() <= 1e-30;
    Ok(GroupingReport { grouping: d.clone(), points, total, stable_sum, matches_stable_sum })
}
