use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use super::build::{build, Problem};
use super::json;
use super::parser::parse;
use super::{EXIT_ERROR, EXIT_MISMATCH, EXIT_NOT_CERTIFIED, EXIT_OK};
use crate::arrangement::Flag;
use crate::oracle::{expansion_diagnostics, quad_integral_with, QuadOptions, Trend};
use crate::residue_engine::{
    canonical_grouping, evaluate_integral, grouping_report, permutation_stability_probe, DivisorGrouping, EvalOptions,
};
use crate::scalar::ComplexScalar;

#[derive(Debug, Parser)]
#[command(name = "residuum", version, about = "Integrals over R^r of rational-exponential forms by iterated residues")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Problem file.
    pub file: PathBuf,
    /// Working precision in bits.
    #[arg(long, default_value_t = 128)]
    pub precision: u32,
    /// Print only the JSON document.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stability/compatibility table of every complete flag.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Residue-formula value with its certificate.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Accept convergence when no sufficient rule applies.
        #[arg(long)]
        assume_convergent: bool,
    },
    /// Residue-formula value compared with direct quadrature.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long = "box", default_value_t = 50.0)]
        box_halfwidth: f64,
        /// Relative tolerance of the comparison.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        assume_convergent: bool,
    },
    /// Grothendieck residues of the canonical (or a given) divisor grouping.
    Grouping {
        #[command(flatten)]
        common: Common,
        /// Grouping such as `(H1H3,H2)`; defaults to the canonical one.
        #[arg(long)]
        grouping: Option<String>,
    },
}

/// A finished command: the JSON document, its human rendering, and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub json: Value,
    pub human: String,
    pub exit: i32,
}

impl Outcome {
    fn error(command: &str, message: String) -> Self {
        Self {
            json: json!({ "schema": 1, "command": command, "error": message }),
            human: format!("error: {message}\n"),
            exit: EXIT_ERROR,
        }
    }

    /// Human text followed by the machine section, or JSON alone.
    pub fn render(&self, json_only: bool) -> String {
        let doc = serde_json::to_string_pretty(&self.json).expect("serializable");
        if json_only {
            format!("{doc}\n")
        } else {
            format!("{}\n# machine-readable\n{doc}\n", self.human)
        }
    }
}

fn load(common: &Common) -> Result<Problem, String> {
    let src = std::fs::read_to_string(&common.file).map_err(|e| format!("{}: {e}", common.file.display()))?;
    load_str(&src, common.precision)
}

fn load_str(src: &str, precision: u32) -> Result<Problem, String> {
    if precision < 64 {
        return Err("precision must be at least 64 bits".into());
    }
    let spec = parse(src).map_err(|e| format!("parse error at {e}"))?;
    build(&spec, precision).map_err(|e| e.to_string())
}

fn document(command: &str, p: &Problem) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(1));
    m.insert("command".into(), json!(command));
    m.insert("problem".into(), json::problem(p));
    m
}

fn header(p: &Problem) -> String {
    let mut s = String::new();
    let a = &p.arrangement;
    let _ = writeln!(s, "variables: {}", p.vars.join(", "));
    let gens: Vec<String> = p
        .polyhedron
        .generators()
        .iter()
        .map(|g| format!("({})", g.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let _ = writeln!(s, "cone generators: {}", gens.join(" "));
    for (k, h) in a.hyperplanes().iter().enumerate() {
        let f: Vec<String> = h.f.iter().map(|q| q.to_string()).collect();
        let m = if h.multiplicity > 1 { format!("  (multiplicity {})", h.multiplicity) } else { String::new() };
        let _ = writeln!(s, "H{}: f = ({}), s = {}{m}", k + 1, f.join(","), h.s.display_digits(10));
    }
    s
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn analyze(p: &Problem) -> Result<Outcome, String> {
    let a = &p.arrangement;
    let pi = &p.polyhedron;
    let mut rows = Vec::new();
    let mut human = header(p);
    let _ = writeln!(human, "\n{:<14} {:<8} {:<11} {:<8} jacobian", "flag", "stable", "compatible", "soluble");
    for flag in a.enumerate_flags(a.dimension()) {
        let j = a.jacobian_of(&flag, pi).map_err(|e| e.to_string())?;
        let prof = a.profile(&flag, pi).map_err(|e| e.to_string())?;
        let jac: Vec<String> = (0..j.rows())
            .map(|i| format!("[{}]", j.row(i).iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        let _ = writeln!(
            human,
            "{:<14} {:<8} {:<11} {:<8} {}",
            flag.to_string(),
            yes(prof.stable),
            yes(prof.compatible),
            yes(prof.in_bruhat_cell),
            jac.join("")
        );
        let minors = |m: &std::collections::BTreeMap<(usize, usize), rug::Rational>| {
            Value::Object(m.iter().map(|((a, b), q)| (format!("{a},{b}"), json::rational(q))).collect())
        };
        rows.push(json!({
            "flag": json::flag(&flag),
            "indices": flag.one_based(),
            "jacobian": json::matrix(&j),
            "stable": prof.stable,
            "compatible": prof.compatible,
            "soluble": prof.in_bruhat_cell,
            "p": prof.p.iter().map(json::rational).collect::<Vec<_>>(),
            "q": minors(&prof.q),
            "r": minors(&prof.r_minors),
        }));
    }
    let audit = a.compatibility_audit(pi).map_err(|e| e.to_string())?;
    let stable = a.stable_flags(pi).map_err(|e| e.to_string())?;
    let probe = permutation_stability_probe(a, pi).map_err(|e| e.to_string())?;
    let _ = writeln!(
        human,
        "\nstable flags (Z_Pi): {}",
        if stable.is_empty() {
            "none".to_string()
        } else {
            stable.iter().map(|c| c.representative.to_string()).collect::<Vec<_>>().join(" ")
        }
    );
    let _ = writeln!(human, "all compatible: {}", yes(audit.all_compatible));
    for v in &audit.violators {
        let qs: Vec<String> = v.offending_q.iter().map(|((k, l), q)| format!("q{k}{l} = {q}")).collect();
        let _ = writeln!(human, "  violator {}: {}", v.flag, qs.join(", "));
    }
    if !probe.counterexamples.is_empty() {
        let _ = writeln!(human, "permutation probe: {} stable reordering(s) found", probe.counterexamples.len());
    }
    let mut doc = document("analyze", p);
    doc.insert("flags".into(), Value::Array(rows));
    doc.insert("audit".into(), json::audit(&audit));
    doc.insert("stable_flags".into(), Value::Array(stable.iter().map(|c| json::flag(&c.representative)).collect()));
    doc.insert(
        "permutation_probe".into(),
        json!({
            "stable_checked": probe.stable_checked,
            "permutations_checked": probe.permutations_checked,
            "counterexamples": probe.counterexamples.iter().map(|(a, b)| json!([json::flag(a), json::flag(b)])).collect::<Vec<_>>(),
        }),
    );
    Ok(Outcome { json: Value::Object(doc), human, exit: EXIT_OK })
}

struct Evaluated {
    doc: Map<String, Value>,
    human: String,
    value: ComplexScalar,
    certified: bool,
}

fn evaluate(command: &str, p: &Problem, assume_convergent: bool) -> Result<Evaluated, String> {
    let res = evaluate_integral(&p.arrangement, &p.polyhedron, &EvalOptions { assume_convergent })
        .map_err(|e| e.to_string())?;
    let certified = res.certificate.certified();
    let mut human = header(p);
    let _ = writeln!(human, "\nvalue: {}", res.value.display_digits(17));
    let _ = writeln!(human, "status: {}", if certified { "CERTIFIED" } else { "NOT CERTIFIED" });
    let _ = writeln!(human, "convergence: {}", res.certificate.convergence.as_str());
    for c in &res.flag_contributions {
        let _ = writeln!(human, "  res[{}] = {}", c.flag, c.residue.display_digits(17));
    }
    for v in &res.audit.violators {
        let qs: Vec<String> = v.offending_q.iter().map(|((k, l), q)| format!("q{k}{l} = {q}")).collect();
        let _ = writeln!(human, "  incompatible {}: {}", v.flag, qs.join(", "));
    }
    for w in &res.certificate.warnings {
        let _ = writeln!(human, "warning: {w}");
    }
    if res.flag_contributions.is_empty() {
        let _ = writeln!(human, "note: the stable set is empty, so the residue formula predicts 0");
    }
    let mut doc = document(command, p);
    doc.insert("value".into(), json::complex(&res.value));
    doc.insert("certified".into(), json!(certified));
    doc.insert("certificate".into(), json::certificate(&res.certificate));
    doc.insert("contributions".into(), Value::Array(res.flag_contributions.iter().map(json::contribution).collect()));
    doc.insert("audit".into(), json::audit(&res.audit));
    Ok(Evaluated { doc, human, value: res.value, certified })
}

pub fn eval(p: &Problem, assume_convergent: bool) -> Result<Outcome, String> {
    let e = evaluate("eval", p, assume_convergent)?;
    let exit = if e.certified { EXIT_OK } else { EXIT_NOT_CERTIFIED };
    Ok(Outcome { json: Value::Object(e.doc), human: e.human, exit })
}

/// Radii of the divergence diagnostic arcs.
const DIAGNOSTIC_RADII: [f64; 3] = [10.0, 40.0, 160.0];

pub fn verify(p: &Problem, box_halfwidth: f64, tol: f64, assume_convergent: bool) -> Result<Outcome, String> {
    if tol.is_nan() || tol <= 0.0 || box_halfwidth.is_nan() || box_halfwidth <= 0.0 {
        return Err("--tol and --box must be positive".into());
    }
    let mut e = evaluate("verify", p, assume_convergent)?;
    let opts = QuadOptions { box_halfwidth, tol: (tol / 10.0).min(1e-6), ..QuadOptions::default() };
    let quad = quad_integral_with(&p.arrangement, &opts).map_err(|err| format!("oracle failed: {err}"))?;
    let (ev, oc) = (e.value.to_c64(), quad.estimate.to_c64());
    let diff = (ev - oc).norm();
    let scale = ev.norm().max(oc.norm());
    let pass = diff <= tol * scale;
    let _ = writeln!(
        e.human,
        "\noracle: {} (error bound {:.2e}, tail {:.2e})",
        quad.estimate.display_digits(12),
        quad.error_bound,
        quad.tail_estimate
    );
    let _ = writeln!(
        e.human,
        "difference: {diff:.3e} (relative {:.3e}, tolerance {tol:.1e})",
        if scale > 0.0 { diff / scale } else { 0.0 }
    );
    let _ = writeln!(e.human, "verify: {}", if pass { "PASS" } else { "FAIL" });
    e.doc.insert("oracle".into(), json::quadrature(&quad));
    e.doc.insert("difference".into(), json!(diff));
    e.doc.insert("tolerance".into(), json!(tol));
    e.doc.insert("pass".into(), json!(pass));
    if !pass {
        match expansion_diagnostics(&p.arrangement, &p.polyhedron, &DIAGNOSTIC_RADII) {
            Ok(steps) => {
                for s in &steps {
                    let mags: Vec<String> = s
                        .samples
                        .iter()
                        .map(|(_, r)| {
                            r.magnitudes().iter().map(|m| format!("{m:.2e}")).collect::<Vec<_>>().join(" -> ")
                        })
                        .collect();
                    let _ = writeln!(
                        e.human,
                        "  closing z{} in the upper half-plane: arcs {} [{}]",
                        s.variable,
                        s.trend.as_str(),
                        mags.join("; ")
                    );
                }
                if steps.iter().any(|s| s.trend == Trend::Growing) {
                    let _ = writeln!(
                        e.human,
                        "  the iterated residue expansion diverges: arc integrals grow with the radius"
                    );
                }
                e.doc.insert("diagnostics".into(), json::expansion(&steps));
            }
            Err(err) => {
                e.doc.insert("diagnostics".into(), json!({ "error": err.to_string() }));
            }
        }
    }
    let exit = if !pass {
        EXIT_MISMATCH
    } else if !e.certified {
        EXIT_NOT_CERTIFIED
    } else {
        EXIT_OK
    };
    Ok(Outcome { json: Value::Object(e.doc), human: e.human, exit })
}

/// Parse `(H1H3,H2)` into 0-based groups.
pub fn parse_grouping(s: &str) -> Result<DivisorGrouping, String> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let mut groups = Vec::new();
    for part in inner.split(',') {
        let mut g = Vec::new();
        for tok in part.trim().split(['H', 'h']).skip(1) {
            let k: usize = tok.trim().parse().map_err(|_| format!("bad hyperplane label in `{part}`"))?;
            if k == 0 {
                return Err("hyperplanes are numbered from 1".into());
            }
            g.push(k - 1);
        }
        if g.is_empty() || !part.trim().starts_with(['H', 'h']) {
            return Err(format!("bad group `{part}`"));
        }
        groups.push(g);
    }
    Ok(DivisorGrouping::new(groups))
}

pub fn grouping(p: &Problem, requested: Option<&str>) -> Result<Outcome, String> {
    let a = &p.arrangement;
    let d = match requested {
        Some(s) => parse_grouping(s)?,
        None => canonical_grouping(a, &p.polyhedron).map_err(|e| e.to_string())?,
    };
    let report = grouping_report(a, &d, &p.polyhedron).map_err(|e| e.to_string())?;
    let mut human = header(p);
    let _ = writeln!(human, "\ngrouping: {}{}", d, if requested.is_none() { " (canonical)" } else { "" });
    for pt in &report.points {
        let m: Vec<String> = pt.point.iter().map(|z| z.display_digits(8)).collect();
        let flags: Vec<String> = pt.flags.iter().map(Flag::to_string).collect();
        let _ =
            writeln!(human, "  at ({}): res = {}   [{}]", m.join(", "), pt.residue.display_digits(17), flags.join(" "));
    }
    let _ = writeln!(human, "total: {}", report.total.display_digits(17));
    let _ = writeln!(
        human,
        "stable sum: {} ({})",
        report.stable_sum.display_digits(17),
        if report.matches_stable_sum { "matches" } else { "differs" }
    );
    let mut doc = document("grouping", p);
    doc.insert("canonical".into(), json!(requested.is_none()));
    doc.insert("report".into(), json::grouping(&report));
    Ok(Outcome { json: Value::Object(doc), human, exit: EXIT_OK })
}

/// Execute parsed arguments.
pub fn run(args: &Args) -> (Outcome, bool) {
    let (name, common) = match &args.command {
        Command::Analyze { common } => ("analyze", common),
        Command::Eval { common, .. } => ("eval", common),
        Command::Verify { common, .. } => ("verify", common),
        Command::Grouping { common, .. } => ("grouping", common),
    };
    let result = load(common).and_then(|p| match &args.command {
        Command::Analyze { .. } => analyze(&p),
        Command::Eval { assume_convergent, .. } => eval(&p, *assume_convergent),
        Command::Verify { box_halfwidth, tol, assume_convergent, .. } => {
            verify(&p, *box_halfwidth, *tol, *assume_convergent)
        }
        Command::Grouping { grouping: g, .. } => grouping(&p, g.as_deref()),
    });
    let outcome = result.unwrap_or_else(|e| Outcome::error(name, e));
    (outcome, common.json)
}

#[cfg(test)]
pub(crate) fn problem_from_str(src: &str) -> Problem {
    load_str(src, 128).expect("valid problem")
}
