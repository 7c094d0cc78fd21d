mod common;

use common::*;
use residuum::cli::{eval, verify};

#[test]
fn incompatible_cone_disagrees_with_quadrature_when_n1_exceeds_n2() {
    let p = problem(&example_one_src(3, 2, PI_A));
    let e = eval(&p, false).unwrap();
    assert_eq!(e.json["certified"], false);
    let v = verify(&p, 50.0, 1e-4, true).unwrap();
    assert_eq!(v.json["pass"], false);
    assert_eq!(v.exit, 3);
}

#[test]
fn compatible_cone_without_convergence_rule_is_not_certified() {
    let b = eval(&problem(&example_one_src(2, 3, PI_B)), false).unwrap();
    let c = eval(&problem(&example_one_src(2, 3, PI_C)), false).unwrap();
    assert_eq!(b.json["certified"], true);
    assert_eq!(c.json["certificate"]["all_compatible"], true);
    assert_eq!(c.json["certificate"]["convergence"], "Unknown");
    assert_eq!(c.json["certified"], false);
    assert_ne!(b.json["value"], c.json["value"]);
}

#[test]
fn canonical_grouping_can_cut_out_points_outside_the_stable_set() {
    use residuum::arrangement::Flag;
    use residuum::oracle::{default_radii, torus_residue, TORUS_NODES};
    use residuum::residue_engine::{canonical_grouping, grouping_report, DivisorGrouping};

    let p = problem(
        "vars x y;\ncone (2,0) (-2,-1);\nnum exp(i*(x/2 - y));\n\
         den (-x - 2*y - i) (2*x + 2*y - i) (-2*x - y - 2*i) (2*x - y - 3*i);\n",
    );
    let (a, pi) = (&p.arrangement, &p.polyhedron);
    assert!(a.compatibility_audit(pi).unwrap().all_compatible);
    let stable: Vec<Flag> = a.stable_flags(pi).unwrap().into_iter().map(|c| c.representative).collect();
    assert_eq!(stable, vec![Flag(vec![1, 0]), Flag(vec![3, 0]), Flag(vec![3, 2])]);
    let d = canonical_grouping(a, pi).unwrap();
    assert_eq!(d, DivisorGrouping::new(vec![vec![1, 3], vec![0, 2]]));

    let report = grouping_report(a, &d, pi).unwrap();
    assert_eq!(report.points.len(), 4);
    assert!(!report.matches_stable_sum);
    let extra = report.points.iter().find(|q| q.flags == vec![Flag(vec![1, 2])]).unwrap();
    let gap = &report.total - &report.stable_sum;
    assert!(gap.approx_eq(&extra.residue, 1e-25));

    let eps = default_radii(a, &[1, 2]).unwrap();
    let torus = torus_residue(a, &[1, 2], &eps, TORUS_NODES).unwrap();
    let oriented = if pi.orientation() > 0 { torus } else { -torus };
    assert!(rel_close(&extra.residue, &oriented, 1e-8), "{} vs {}", extra.residue, oriented);
}
