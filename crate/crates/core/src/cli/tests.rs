use super::commands::problem_from_str;
use super::*;
use crate::scalar::ComplexScalar;

const EXAMPLE_TWO: &str =
    "vars x y;\ncone (1,0) (-1,1);\nnum exp(2*pi*i*(x + 2*y));\nden (x - i) (y - i) (x + y - 2*i);\n";
const EXAMPLE_ONE: &str = "vars x y;\ncone (-1,1) (0,1);\nparam s1 = 1, s2 = 1, s3 = 1, n1 = 2, n2 = 3;\n\
num n1^(i*x - s1) * n2^(i*y - s2);\nden (-x - i*s1) (-y - i*s2) (x + y - i*s3);\n";

#[test]
fn example_two_spec() {
    let spec = parse(EXAMPLE_TWO).unwrap();
    assert_eq!(spec.vars.len(), 2);
    assert_eq!(spec.den.len(), 3);
    let p = build(&spec, 128).unwrap();
    assert_eq!(p.arrangement.hyperplanes().len(), 3);
    let gens: Vec<Vec<String>> =
        p.polyhedron.generators().iter().map(|g| g.iter().map(|q| q.to_string()).collect()).collect();
    assert_eq!(gens, vec![vec!["1", "0"], vec!["-1", "1"]]);
}

#[test]
fn example_one_numerator_and_round_trip() {
    let spec = parse(EXAMPLE_ONE).unwrap();
    let printed = spec.to_string();
    assert_eq!(parse(&printed).unwrap(), spec);
    let p = build(&spec, 128).unwrap();
    let terms = p.arrangement.numerator().terms();
    assert_eq!(terms.len(), 1);
    let ln2 = ComplexScalar::from_f64(2.0, 0.0, 128).ln();
    let ln3 = ComplexScalar::from_f64(3.0, 0.0, 128).ln();
    let exp = &terms[0].exp;
    assert!(exp.linear[0].approx_eq(&ln2.mul_i(), 1e-30));
    assert!(exp.linear[1].approx_eq(&ln3.mul_i(), 1e-30));
    assert!(exp.constant.approx_eq(&-(&ln2 + &ln3), 1e-30));
}

#[test]
fn real_hyperplane_is_rejected() {
    let err = build(&parse("vars x;\nden (x);").unwrap(), 128).unwrap_err();
    assert!(err.message.contains("meets R^r"), "{err}");
    assert_eq!((err.pos.line, err.pos.col), (2, 5));
}

#[test]
fn parse_errors_carry_position_and_expectations() {
    let err = parse("vars x;\nnum x + ;").unwrap_err();
    assert_eq!((err.pos.line, err.pos.col), (2, 9));
    assert!(err.expected.contains(&"number".to_string()));
    let err = parse("vars x\nden (x-i);").unwrap_err();
    assert_eq!(err.pos.line, 2);
    let err = parse("vars x; num sin(x);").unwrap_err();
    assert!(err.message.unwrap().contains("sin"));
}

#[test]
fn semantic_errors() {
    let msg = |src: &str| build(&parse(src).unwrap(), 128).unwrap_err().message;
    assert!(msg("vars x; num a; den (x - i);").contains("unbound parameter `a`"));
    assert!(msg("vars x y; den (x*y - i);").contains("affine"));
    assert!(msg("vars x; den (x - i); num 1/x;").contains("den"));
    assert!(msg("vars x y; cone (1,0); den (x - i);").contains("2 cone generators"));
    assert!(msg("vars x y; cone (1,0) (2,0); den (x - i);").contains("dependent"));
}

#[test]
fn repeated_factors_merge() {
    let p = problem_from_str("vars x; den (x - i) (2*x - 2*i) (-x - i)^2;");
    let hs = p.arrangement.hyperplanes();
    assert_eq!(hs.len(), 2);
    assert_eq!(hs[0].multiplicity, 2);
    assert_eq!(hs[1].multiplicity, 2);
    // 1 / ((x - i) 2 (x - i) (x + i)^2) has numerator 1/2.
    let c = p.arrangement.numerator().terms()[0].coeff.clone();
    assert!(c.approx_eq(&ComplexScalar::from_f64(0.5, 0.0, 128), 1e-30));
}

#[test]
fn commands_produce_schema_one_documents() {
    let p = problem_from_str(EXAMPLE_TWO);
    let out = eval(&p, false).unwrap();
    assert_eq!(out.exit, EXIT_OK);
    assert_eq!(out.json["schema"], 1);
    assert_eq!(out.json["contributions"].as_array().unwrap().len(), 2);
    let g = grouping(&p, None).unwrap();
    assert_eq!(g.json["report"]["grouping"], "(H1H3,H2)");
    assert_eq!(g.json["report"]["groups"], serde_json::json!([[1, 3], [2]]));
    let a = analyze(&p).unwrap();
    assert_eq!(a.json["flags"].as_array().unwrap().len(), 6);
    // Deterministic output.
    assert_eq!(eval(&p, false).unwrap().render(true), out.render(true));
}

#[test]
fn grouping_labels() {
    assert_eq!(parse_grouping("(H1H2,H3)").unwrap().groups, vec![vec![0, 1], vec![2]]);
    assert_eq!(parse_grouping("H3H1, H2").unwrap().groups, vec![vec![0, 2], vec![1]]);
    assert!(parse_grouping("(H0,H1)").is_err());
    assert!(parse_grouping("(X1,H1)").is_err());
}

#[test]
fn empty_stable_set_is_an_error() {
    let p = problem_from_str("vars x; den (-x - i);");
    assert!(grouping(&p, None).unwrap_err().contains("empty"));
}
