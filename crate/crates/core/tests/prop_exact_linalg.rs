use proptest::prelude::*;
use residuum::exact_linalg::{leading_principal_minor, minor_profile, q_minor, r_minor, RationalMatrix};
use residuum::Rational;

fn matrix(max: usize, range: i64) -> impl Strategy<Value = RationalMatrix> {
    (1..=max).prop_flat_map(move |n| {
        proptest::collection::vec(-range..=range, n * n)
            .prop_map(move |v| RationalMatrix::new(n, n, v.into_iter().map(Rational::from).collect()).unwrap())
    })
}

fn wide_matrix() -> impl Strategy<Value = RationalMatrix> {
    (1usize..=4, 0usize..=2).prop_flat_map(|(k, extra)| {
        let r = k + extra;
        proptest::collection::vec((-4i64..=4, 1i64..=3), k * r)
            .prop_map(move |v| RationalMatrix::new(k, r, v.into_iter().map(Rational::from).collect()).unwrap())
    })
}

fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::from(1);
    }
    let mut acc = Rational::new();
    for j in 0..n {
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = Rational::from(&m[0][j] * &cofactor_det(&minor));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn block(m: &RationalMatrix, rows: &[usize], cols: &[usize]) -> Vec<Vec<Rational>> {
    rows.iter().map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn minors_match_cofactor_expansion(m in matrix(5, 3)) {
        let n = m.rows();
        for k in 1..=n {
            let idx: Vec<usize> = (0..k).collect();
            prop_assert_eq!(leading_principal_minor(&m, k).unwrap(), cofactor_det(&block(&m, &idx, &idx)));
            for l in k + 1..=n {
                let cols: Vec<usize> = (0..k - 1).chain([l - 1]).collect();
                prop_assert_eq!(q_minor(&m, k, l).unwrap(), cofactor_det(&block(&m, &idx, &cols)));
            }
            for j in 1..k {
                let rows: Vec<usize> = (0..k).filter(|&i| i != j - 1).collect();
                let cols: Vec<usize> = (0..k - 1).collect();
                prop_assert_eq!(r_minor(&m, j, k).unwrap(), cofactor_det(&block(&m, &rows, &cols)));
            }
        }
        prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&block(&m, &(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>())));
    }

    #[test]
    fn positive_row_scaling_keeps_verdicts(m in wide_matrix(), d in proptest::collection::vec((1i64..=9, 1i64..=9), 4)) {
        let d: Vec<Rational> = d.into_iter().take(m.rows()).map(Rational::from).collect();
        let a = minor_profile(&m).unwrap();
        let b = minor_profile(&m.scale_rows(&d)).unwrap();
        prop_assert_eq!(a.stable, b.stable);
        prop_assert_eq!(a.compatible, b.compatible);
        prop_assert_eq!(a.in_bruhat_cell, b.in_bruhat_cell);
    }

    #[test]
    fn bruhat_cell_iff_lu_without_pivoting(m in matrix(4, 2)) {
        let profile = minor_profile(&m).unwrap();
        let lu = m.lu_without_pivoting().filter(|(_, u)| (0..u.rows()).all(|i| *u.get(i, i) != 0));
        if let Some((l, u)) = &lu {
            prop_assert_eq!(&l.mul(u).unwrap(), &m);
        }
        prop_assert_eq!(profile.in_bruhat_cell, lu.is_some());
    }

    #[test]
    fn profile_verdicts_follow_their_definitions(m in wide_matrix()) {
        let p = minor_profile(&m).unwrap();
        prop_assert_eq!(p.in_bruhat_cell, p.p.iter().all(|x| *x != 0));
        prop_assert_eq!(p.compatible, !p.stable || p.q.values().all(|q| *q <= 0));
        if p.stable {
            prop_assert!(p.p.iter().all(|x| *x > 0));
            for (&(j, l), v) in &p.r_minors {
                let signed = if (l - j) % 2 == 0 { v.clone() } else { Rational::from(-v) };
                prop_assert!(signed >= 0);
            }
        }
    }
}
