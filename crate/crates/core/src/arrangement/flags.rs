use rug::Rational;

use crate::exact_linalg::{minor_profile, MinorProfile};
use crate::scalar::ComplexScalar;

use super::{jacobian, Arrangement, ArrangementError, Flag, Polyhedron};

/// Ordered stable collections cutting out one flag.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagClass {
    pub representative: Flag,
    pub members: Vec<Flag>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violator {
    pub flag: Flag,
    /// Positive q-minors `((j, l), q_jl)`, 1-based.
    pub offending_q: Vec<((usize, usize), Rational)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub all_compatible: bool,
    pub violators: Vec<Violator>,
    pub violator_count: usize,
    pub flags_checked: usize,
}

pub const MAX_VIOLATORS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct ZStar {
    pub values: Vec<ComplexScalar>,
    /// Every `Im z_k* > 0`.
    pub arises: bool,
    /// Some `Im z_k* = 0` within tolerance.
    pub degenerate: bool,
}

fn permutations_of(items: &[usize], k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    for &i in items {
        if !prefix.contains(&i) {
            prefix.push(i);
            permutations_of(items, k, prefix, out);
            prefix.pop();
        }
    }
}

/// All orderings of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    permutations_of(&items, n, &mut Vec::new(), &mut out);
    out
}

impl Arrangement {
    pub fn is_transverse(&self, indices: &[usize]) -> bool {
        self.f_matrix(indices).rank() == indices.len()
    }

    /// Ordered k-tuples of distinct indices with independent `f`-rows.
    pub fn enumerate_flags(&self, k: usize) -> Vec<Flag> {
        let items: Vec<usize> = (0..self.hyperplanes().len()).collect();
        let mut tuples = Vec::new();
        permutations_of(&items, k, &mut Vec::new(), &mut tuples);
        tuples.into_iter().filter(|t| self.is_transverse(t)).map(Flag).collect()
    }

    pub fn jacobian_of(
        &self,
        flag: &Flag,
        pi: &Polyhedron,
    ) -> Result<crate::exact_linalg::RationalMatrix, ArrangementError> {
        let hs: Vec<_> = flag.indices().iter().map(|&i| &self.hyperplanes()[i]).collect();
        jacobian(&hs, pi)
    }

    pub fn profile(&self, flag: &Flag, pi: &Polyhedron) -> Result<MinorProfile, ArrangementError> {
        Ok(minor_profile(&self.jacobian_of(flag, pi)?)?)
    }

    /// Terminal point `z_gamma` of a complete flag, in the original coordinates.
    pub fn pole_location(&self, flag: &Flag) -> Result<Vec<ComplexScalar>, ArrangementError> {
        let r = self.dimension();
        if flag.depth() != r {
            return Err(ArrangementError::DimensionMismatch(format!(
                "flag of depth {} in dimension {r}",
                flag.depth()
            )));
        }
        let inv = self.f_matrix(flag.indices()).inverse().map_err(|_| ArrangementError::NotTransverse(flag.clone()))?;
        let prec = self.precision();
        let rhs: Vec<ComplexScalar> = flag.indices().iter().map(|&i| self.hyperplanes()[i].s.mul_i()).collect();
        Ok((0..r)
            .map(|a| {
                let mut acc = ComplexScalar::zero(prec);
                for (b, v) in rhs.iter().enumerate() {
                    let m = inv.get(a, b);
                    if *m != 0 {
                        acc = acc + v.mul_rational(m);
                    }
                }
                acc
            })
            .collect())
    }

    /// Whether hyperplane `h` contains `H_{i_1} cap ... cap H_{i_k}` (a transverse intersection).
    pub fn contains_intersection(&self, h: usize, indices: &[usize]) -> bool {
        let f = self.f_matrix(indices);
        let Some(lambda) = f.row_combination(&self.hyperplanes()[h].f) else {
            return false;
        };
        let prec = self.precision();
        let mut predicted = ComplexScalar::zero(prec);
        let mut scale = 0.0;
        for (l, &i) in lambda.iter().zip(indices) {
            if *l != 0 {
                let term = self.hyperplanes()[i].s.mul_rational(l);
                scale += term.abs_f64();
                predicted = predicted + term;
            }
        }
        let s = &self.hyperplanes()[h].s;
        let scale = scale.max(s.abs_f64());
        (s - &predicted).abs_f64() <= ComplexScalar::tolerance(prec) * scale
    }

    /// Two complete ordered collections cut out the same flag.
    pub fn same_flag(&self, a: &Flag, b: &Flag) -> bool {
        if a.depth() != b.depth() {
            return false;
        }
        (1..=a.depth()).all(|k| {
            let prefix = &a.indices()[..k];
            b.indices()[..k].iter().all(|&h| self.contains_intersection(h, prefix))
        })
    }

    /// Group ordered collections by the flag they cut out, keeping first-seen order.
    pub fn flag_classes(&self, collections: &[Flag]) -> Vec<FlagClass> {
        let mut classes: Vec<FlagClass> = Vec::new();
        for c in collections {
            match classes.iter_mut().find(|cl| self.same_flag(&cl.representative, c)) {
                Some(cl) => cl.members.push(c.clone()),
                None => classes.push(FlagClass { representative: c.clone(), members: vec![c.clone()] }),
            }
        }
        classes
    }

    /// Ordered complete collections whose Jacobian is stable.
    pub fn stable_collections(&self, pi: &Polyhedron) -> Result<Vec<Flag>, ArrangementError> {
        let mut out = Vec::new();
        for flag in self.enumerate_flags(self.dimension()) {
            if self.profile(&flag, pi)?.stable {
                out.push(flag);
            }
        }
        Ok(out)
    }

    /// `Z_Pi`: flags cut out by some stable collection.
    pub fn stable_flags(&self, pi: &Polyhedron) -> Result<Vec<FlagClass>, ArrangementError> {
        Ok(self.flag_classes(&self.stable_collections(pi)?))
    }

    pub fn compatibility_audit(&self, pi: &Polyhedron) -> Result<AuditReport, ArrangementError> {
        let flags = self.enumerate_flags(self.dimension());
        let mut violators = Vec::new();
        let mut count = 0;
        for flag in &flags {
            let p = self.profile(flag, pi)?;
            if !p.compatible {
                count += 1;
                if violators.len() < MAX_VIOLATORS {
                    violators.push(Violator { flag: flag.clone(), offending_q: p.positive_q() });
                }
            }
        }
        Ok(AuditReport { all_compatible: count == 0, violators, violator_count: count, flags_checked: flags.len() })
    }

    /// `z_k*` for a complete flag from the minors of its Jacobian; `x = (x_2, ..., x_r)`.
    pub fn z_star(&self, flag: &Flag, pi: &Polyhedron, x: &[f64]) -> Result<ZStar, ArrangementError> {
        let r = self.dimension();
        if flag.depth() != r || x.len() + 1 != r {
            return Err(ArrangementError::DimensionMismatch(format!(
                "z_star needs a complete flag and {} real samples",
                r - 1
            )));
        }
        let prof = self.profile(flag, pi)?;
        if !prof.in_bruhat_cell {
            return Err(ArrangementError::InsolubleFlag(flag.clone()));
        }
        let prec = self.precision();
        let s: Vec<&ComplexScalar> = flag.indices().iter().map(|&i| &self.hyperplanes()[i].s).collect();
        let tol = ComplexScalar::tolerance(prec).max(1e-300);
        let mut values = Vec::with_capacity(r);
        let mut arises = true;
        let mut degenerate = false;
        for k in 1..=r {
            let mut alt = s[k - 1].mul_rational(&prof.p(k - 1));
            let mut scale = alt.abs_f64();
            for j in 1..k {
                let rj = &prof.r_minors[&(j, k)];
                if *rj != 0 {
                    let mut t = s[j - 1].mul_rational(rj);
                    if (k - j) % 2 == 1 {
                        t = -t;
                    }
                    scale += t.abs_f64();
                    alt = alt + t;
                }
            }
            let mut v = alt.mul_i();
            for l in k + 1..=r {
                let q = &prof.q[&(k, l)];
                if *q != 0 {
                    v = v - ComplexScalar::from_f64(x[l - 2], 0.0, prec).mul_rational(q);
                }
            }
            let v = v.div_rational(&prof.p(k));
            let im = v.im_f64();
            let im_scale = scale / prof.p(k).to_f64().abs();
            if im.abs() <= tol * im_scale {
                degenerate = true;
                arises = false;
            } else if im < 0.0 {
                arises = false;
            }
            values.push(v);
        }
        Ok(ZStar { values, arises, degenerate })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Hyperplane;
    use crate::symfun::ExpRationalFunction;

    const P: u32 = 128;

    fn hp(f: &[i64], s: f64) -> Hyperplane {
        Hyperplane::new(f.iter().map(|&v| Rational::from(v)).collect(), ComplexScalar::from_f64(s, 0.0, P))
    }

    fn example_one(s: [f64; 3]) -> Arrangement {
        Arrangement::new(
            2,
            vec![hp(&[-1, 0], s[0]), hp(&[0, -1], s[1]), hp(&[1, 1], s[2])],
            ExpRationalFunction::constant(ComplexScalar::one(P), 2),
        )
        .unwrap()
    }

    fn example_two() -> Arrangement {
        Arrangement::new(
            2,
            vec![hp(&[1, 0], 1.0), hp(&[0, 1], 1.0), hp(&[1, 1], 2.0)],
            ExpRationalFunction::constant(ComplexScalar::one(P), 2),
        )
        .unwrap()
    }

    #[test]
    fn six_flags_in_example_one() {
        let a = example_one([1.0, 1.0, 1.0]);
        let flags = a.enumerate_flags(2);
        let labels: Vec<Vec<usize>> = flags.iter().map(Flag::one_based).collect();
        assert_eq!(labels, vec![vec![1, 2], vec![1, 3], vec![2, 1], vec![2, 3], vec![3, 1], vec![3, 2]]);
    }

    #[test]
    fn parallel_hyperplanes_give_no_flags() {
        let a = Arrangement::new(
            2,
            vec![hp(&[1, 1], 1.0), hp(&[2, 2], 1.0)],
            ExpRationalFunction::constant(ComplexScalar::one(P), 2),
        )
        .unwrap();
        assert!(a.enumerate_flags(2).is_empty());
    }

    #[test]
    fn example_two_stable_flags_collapse() {
        let a = example_two();
        let pi = Polyhedron::from_i64(&[&[1, 0], &[-1, 1]]).unwrap();
        let stable: Vec<Vec<usize>> = a.stable_collections(&pi).unwrap().iter().map(Flag::one_based).collect();
        // J(H1,H3) = [[1,-1],[1,0]] has r12 = 1, so the definition makes it unstable.
        assert_eq!(stable, vec![vec![1, 2], vec![3, 2]]);
        assert!(a.same_flag(&Flag(vec![0, 1]), &Flag(vec![0, 2])));
        assert!(!a.same_flag(&Flag(vec![0, 1]), &Flag(vec![2, 1])));
        let classes = a.flag_classes(&[Flag(vec![0, 1]), Flag(vec![0, 2]), Flag(vec![2, 1])]);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].members.len(), 2);
    }

    #[test]
    fn pole_locations() {
        let a = example_one([1.0, 2.0, 3.0]);
        let z = a.pole_location(&Flag(vec![1, 2])).unwrap();
        assert!(z[0].approx_eq(&ComplexScalar::from_f64(0.0, 5.0, P), 1e-35));
        assert!(z[1].approx_eq(&ComplexScalar::from_f64(0.0, -2.0, P), 1e-35));
        let b = example_two();
        let z = b.pole_location(&Flag(vec![0, 1])).unwrap();
        assert!(z.iter().all(|v| v.approx_eq(&ComplexScalar::i(P), 1e-35)));
    }

    #[test]
    fn audit_of_example_one() {
        let a = example_one([1.0, 1.0, 1.0]);
        let rep = a.compatibility_audit(&Polyhedron::standard(2)).unwrap();
        assert!(!rep.all_compatible);
        assert_eq!(rep.violators.len(), 1);
        assert_eq!(rep.violators[0].flag.one_based(), vec![3, 1]);
        assert_eq!(rep.violators[0].offending_q, vec![((1, 2), Rational::from(1))]);
        let pi_b = Polyhedron::from_i64(&[&[-1, 1], &[0, 1]]).unwrap();
        assert!(a.compatibility_audit(&pi_b).unwrap().all_compatible);
    }

    #[test]
    fn z_star_two_by_two_example() {
        // 1/((x^2 + s1^2)((x + y)^2 + s2^2)) has hyperplanes x = i s1 and x + y = i s2.
        let a = Arrangement::new(
            2,
            vec![hp(&[1, 0], 1.0), hp(&[1, 1], 3.0)],
            ExpRationalFunction::constant(ComplexScalar::one(P), 2),
        )
        .unwrap();
        let z = a.z_star(&Flag(vec![0, 1]), &Polyhedron::standard(2), &[0.7]).unwrap();
        assert!(z.values[1].approx_eq(&ComplexScalar::from_f64(0.0, 2.0, P), 1e-35));
        assert!(z.values[0].approx_eq(&ComplexScalar::from_f64(0.0, 1.0, P), 1e-35));
        assert!(z.arises);
        let b = a.with_shifts(&[ComplexScalar::from_f64(3.0, 0.0, P), ComplexScalar::one(P)]).unwrap();
        assert!(!b.z_star(&Flag(vec![0, 1]), &Polyhedron::standard(2), &[0.7]).unwrap().arises);
    }
}
