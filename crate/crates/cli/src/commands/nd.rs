use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::Path;

use proofkit_core::ands::{classify_nd_rule, display_formula, materialize, Ands, NdOptions};
use proofkit_core::format::{load_ands_rule, system_to_json, LoadedSystem};
use serde_json::json;

use super::analysis::{status_code, status_report};
use super::{budget, load};
use crate::report::{invalid, usage, Failure, Outcome, EXIT_OK};
use crate::Bounds;

fn load_ands(path: &Path, command: &str) -> Result<Ands, Failure> {
    match load(path)? {
        LoadedSystem::Ands(n) => Ok(n),
        LoadedSystem::Aphs(_) => Err(usage(format!(
            "{}: `nd {command}` needs a natural-deduction system (set \"system\": \"ands\")",
            path.display()
        ))),
    }
}

pub fn encode(system: &Path, output: Option<&Path>, universe: usize, markers: usize) -> Result<Outcome, Failure> {
    if universe == 0 {
        return Err(usage("--universe must be at least 1"));
    }
    let n = load_ands(system, "encode")?;
    let e = super::encode(&n, markers, &BTreeSet::new(), universe)?;
    let m = materialize(&e);
    let body = system_to_json(&m).map_err(invalid)? + "\n";
    let instances: usize = m.rules().iter().map(|r| r.rule.enumerate(&e.universe()).instances.len()).sum();
    let summary = json!({
        "command": "nd encode",
        "universe": universe,
        "markers": e.markers.as_slice(),
        "hyp_axiom": e.hyp_name,
        "axioms": m.axioms().len(),
        "rules": m.rules().len(),
        "instances": instances,
        "output": output.map(|p| p.display().to_string()),
    });
    match output {
        Some(p) => {
            std::fs::write(p, &body).map_err(|err| usage(format!("{}: {err}", p.display())))?;
            let text = format!(
                "wrote {}: {} axioms, {} rules, {} instances, markers {{{}}}\n",
                p.display(),
                m.axioms().len(),
                m.rules().len(),
                instances,
                e.markers.join(", ")
            );
            Ok(Outcome::new(text, summary, EXIT_OK))
        }
        None => {
            let doc: serde_json::Value = serde_json::from_str(&body).expect("just written");
            Ok(Outcome::new(body, doc, EXIT_OK))
        }
    }
}

pub fn classify(system: &Path, rule: &Path, bounds: Bounds, markers: usize, weakening: bool) -> Result<Outcome, Failure> {
    budget(bounds)?;
    let n = load_ands(system, "classify")?;
    classify_loaded(&n, rule, bounds, markers, weakening)
}

pub fn classify_loaded(n: &Ands, rule: &Path, bounds: Bounds, markers: usize, weakening: bool) -> Result<Outcome, Failure> {
    let b = budget(bounds)?;
    let r = load_ands_rule(rule, &n.signature)?;
    let opts = NdOptions { fresh_markers: markers, check_weakening: weakening };
    let a = classify_nd_rule(n, &r.rule, b, opts).map_err(invalid)?;
    let name = r.name.unwrap_or_else(|| "rule".to_string());
    let (mut text, mut json) = status_report(&name, &r.rule.describe(), &a.status, &display_formula);
    let _ = writeln!(text, "markers: {{{}}}", a.encoding.markers.join(", "));
    if let Some(w) = &a.with_weakening {
        let _ = writeln!(
            text,
            "with weakening: derivable {}, correct {}, admissible {}",
            w.derivable.verdict, w.correct.verdict, w.admissible.verdict
        );
        let _ = writeln!(text, "weakening-sensitive: {}", if a.weakening_sensitive() { "yes" } else { "no" });
        json["with_weakening"] = json!({
            "derivable": w.derivable.verdict.as_str(),
            "correct": w.correct.verdict.as_str(),
            "admissible": w.admissible.verdict.as_str(),
        });
        json["weakening_sensitive"] = json!(a.weakening_sensitive());
    }
    json["command"] = json!("nd classify");
    json["universe"] = json!(bounds.universe);
    json["markers"] = json!(a.encoding.markers.as_slice());
    Ok(Outcome::new(text, json, status_code(&a.status)))
}
