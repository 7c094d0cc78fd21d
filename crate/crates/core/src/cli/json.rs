//! JSON encodings of library values (1-based hyperplane indices, exact numbers as strings).

use serde_json::{json, Map, Value};

use crate::arrangement::{AuditReport, Flag, Polyhedron};
use crate::exact_linalg::RationalMatrix;
use crate::oracle::{ExpansionStep, QuadratureReport};
use crate::residue_engine::{Certificate, FlagContribution, GroupingReport};
use crate::scalar::ComplexScalar;
use rug::Rational;

use super::build::Problem;

pub fn complex(z: &ComplexScalar) -> Value {
    json!({ "re": z.re_string(), "im": z.im_string() })
}

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn flag(f: &Flag) -> Value {
    Value::String(f.to_string())
}

pub fn matrix(m: &RationalMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(rational).collect())).collect())
}

pub fn problem(p: &Problem) -> Value {
    let a = &p.arrangement;
    let hyperplanes: Vec<Value> = a
        .hyperplanes()
        .iter()
        .enumerate()
        .map(|(k, h)| {
            json!({
                "index": k + 1,
                "f": h.f.iter().map(rational).collect::<Vec<_>>(),
                "s": complex(&h.s),
                "multiplicity": h.multiplicity,
            })
        })
        .collect();
    json!({
        "variables": p.vars,
        "cone": cone(&p.polyhedron),
        "hyperplanes": hyperplanes,
        "precision": a.precision(),
    })
}

pub fn cone(pi: &Polyhedron) -> Value {
    Value::Array(pi.generators().iter().map(|g| Value::Array(g.iter().map(rational).collect())).collect())
}

pub fn audit(a: &AuditReport) -> Value {
    let violators: Vec<Value> = a
        .violators
        .iter()
        .map(|v| {
            json!({
                "flag": flag(&v.flag),
                "offending_q": v.offending_q.iter().map(|((k, l), q)| json!({ "k": k, "l": l, "value": rational(q) })).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "all_compatible": a.all_compatible,
        "flags_checked": a.flags_checked,
        "violator_count": a.violator_count,
        "violators": violators,
    })
}

pub fn certificate(c: &Certificate) -> Value {
    json!({
        "all_compatible": c.all_compatible,
        "certified": c.certified(),
        "convergence": c.convergence.as_str(),
        "warnings": c.warnings,
    })
}

pub fn contribution(c: &FlagContribution) -> Value {
    json!({
        "flag": flag(&c.flag),
        "members": c.members.iter().map(flag).collect::<Vec<_>>(),
        "residue": complex(&c.residue),
    })
}

pub fn quadrature(q: &QuadratureReport) -> Value {
    json!({
        "estimate": complex(&q.estimate),
        "error_bound": q.error_bound,
        "box_halfwidth": q.box_halfwidth,
        "nodes_per_axis": q.nodes_per_axis,
        "tail_estimate": q.tail_estimate,
    })
}

pub fn expansion(steps: &[ExpansionStep]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|s| {
                let samples: Vec<Value> = s
                    .samples
                    .iter()
                    .map(|(at, rep)| {
                        json!({
                            "at": at,
                            "radii": rep.arcs.iter().map(|(r, _)| *r).collect::<Vec<_>>(),
                            "magnitudes": rep.magnitudes().iter().map(|m| if m.is_finite() { json!(m) } else { json!("inf") }).collect::<Vec<_>>(),
                            "trend": rep.trend.as_str(),
                        })
                    })
                    .collect();
                json!({ "variable": s.variable, "trend": s.trend.as_str(), "samples": samples })
            })
            .collect(),
    )
}

pub fn grouping(g: &GroupingReport) -> Value {
    let points: Vec<Value> = g
        .points
        .iter()
        .map(|p| {
            json!({
                "point": p.point.iter().map(complex).collect::<Vec<_>>(),
                "flags": p.flags.iter().map(flag).collect::<Vec<_>>(),
                "residue": complex(&p.residue),
            })
        })
        .collect();
    let mut m = Map::new();
    m.insert("grouping".into(), Value::String(g.grouping.to_string()));
    m.insert(
        "groups".into(),
        Value::Array(g.grouping.groups.iter().map(|d| json!(d.iter().map(|i| i + 1).collect::<Vec<_>>())).collect()),
    );
    m.insert("points".into(), Value::Array(points));
    m.insert("total".into(), complex(&g.total));
    m.insert("stable_sum".into(), complex(&g.stable_sum));
    m.insert("matches_stable_sum".into(), Value::Bool(g.matches_stable_sum));
    Value::Object(m)
}
