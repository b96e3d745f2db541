use std::fmt::Write;
use std::path::Path;

use proofkit_core::ars::{induced_relation, parse_rewrite_rule, reachable, steps_between, trs_step_expansion, Ars, ArsStep};
use proofkit_core::format::{load_ars, load_signature};
use serde_json::{json, Value};

use super::parse_term;
use crate::report::{invalid, string_list, usage, Failure, Outcome, EXIT_OK};

fn step_json(s: &ArsStep) -> Value {
    json!({ "id": s.id, "src": s.src.to_string(), "tgt": s.tgt.to_string(), "label": s.label })
}

pub fn relation(file: &Path) -> Result<Outcome, Failure> {
    let a = load_ars(file)?;
    let rel = induced_relation(&a);
    let mut text = format!("{} steps, {} related pairs\n", a.step_count(), rel.len());
    for (x, y) in &rel {
        let _ = writeln!(text, "  {x} -> {y}");
    }
    let pairs: Vec<Value> = rel.iter().map(|(x, y)| json!([x.to_string(), y.to_string()])).collect();
    let json = json!({ "command": "ars relation", "steps": a.step_count(), "pairs": pairs });
    Ok(Outcome::new(text, json, EXIT_OK))
}

pub fn steps(file: &Path, from: &str, to: &str) -> Result<Outcome, Failure> {
    let (from, to) = (parse_term(from)?, parse_term(to)?);
    let a = load_ars(file)?;
    let steps = steps_between(&a, &from, &to).map_err(invalid)?;
    let mut text = format!("{} steps from {from} to {to}\n", steps.len());
    for s in &steps {
        let _ = writeln!(text, "  {s}");
    }
    let json = json!({
        "command": "ars steps",
        "from": from.to_string(),
        "to": to.to_string(),
        "steps": steps.iter().map(step_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(text, json, EXIT_OK))
}

pub fn reach(file: &Path, from: &str, max_steps: usize) -> Result<Outcome, Failure> {
    let from = parse_term(from)?;
    let a = load_ars(file)?;
    let r = reachable(&a, &from, max_steps).map_err(invalid)?;
    let mut text = format!("{} objects reachable from {from} in at most {max_steps} steps\n", r.len());
    for t in &r {
        let _ = writeln!(text, "  {t}");
    }
    let json = json!({
        "command": "ars reach",
        "from": from.to_string(),
        "max_steps": max_steps,
        "reachable": string_list(&r),
    });
    Ok(Outcome::new(text, json, EXIT_OK))
}

fn ars_text(a: &Ars) -> String {
    let mut text = format!("{} objects, {} steps\n", a.objects().len(), a.step_count());
    for s in a.steps() {
        let _ = writeln!(text, "  {s}");
    }
    text
}

pub fn expand(rule: &str, sig: &Path, bound: usize) -> Result<Outcome, Failure> {
    let (lhs, rhs) = parse_rewrite_rule(rule).map_err(|e| usage(format!("cannot parse rule `{rule}`: {e}")))?;
    let sig = load_signature(sig)?;
    let a = trs_step_expansion(&sig, &lhs, &rhs, bound).map_err(invalid)?;
    let json = json!({
        "command": "ars expand",
        "rule": format!("{lhs} -> {rhs}"),
        "bound": bound,
        "objects": string_list(a.objects()),
        "steps": a.steps().map(step_json).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(ars_text(&a), json, EXIT_OK))
}
