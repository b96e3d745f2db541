use std::collections::BTreeSet;
use std::fmt::Write;
use std::path::Path;

use proofkit_core::aphs::{check_derivation, entails_in, theorem_set_in};
use proofkit_core::format::{load_derivation, LoadedSystem};
use proofkit_core::{Term, Verdict};
use serde_json::json;

use super::{budget, load, markers_in, nd_formula, view};
use crate::report::{derivation_json, string_list, tree, verdict_code, Failure, Outcome, EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN};
use crate::Bounds;

pub fn check(system: &Path, derivation: &Path) -> Result<Outcome, Failure> {
    let sys = load(system)?;
    let d = load_derivation(derivation)?;
    let mut formulas = Vec::new();
    d.visit(&mut |n| formulas.push(n.conclusion().clone()));
    let max = formulas.iter().map(Term::size).max().unwrap_or(1);
    let v = view(sys, max, 0, &markers_in(&formulas))?;
    let show = v.show();
    match check_derivation(&v.system, &d) {
        Ok(()) => {
            let assumptions = d.assumptions();
            let mut text = format!("valid: {}\n", show(d.conclusion()));
            if !assumptions.is_empty() {
                let a: Vec<String> = assumptions.iter().map(show).collect();
                let _ = writeln!(text, "assumptions: {}", a.join(", "));
            }
            let json = json!({
                "command": "check",
                "valid": true,
                "conclusion": show(d.conclusion()),
                "assumptions": string_list(assumptions.iter().map(show)),
                "closed": d.is_closed(),
            });
            Ok(Outcome::new(text, json, EXIT_OK))
        }
        Err(defects) => {
            let mut text = String::from("invalid\n");
            for df in &defects {
                let _ = writeln!(text, "  {df}");
            }
            let json = json!({
                "command": "check",
                "valid": false,
                "defects": string_list(&defects),
            });
            Ok(Outcome::new(text, json, EXIT_REFUTED))
        }
    }
}

pub fn prove(system: &Path, goal: &str, assume: &[String], bounds: Bounds, fresh: usize) -> Result<Outcome, Failure> {
    let b = budget(bounds)?;
    let sys = load(system)?;
    let extra = match &sys {
        LoadedSystem::Ands(_) => {
            let ts = std::iter::once(goal).chain(assume.iter().map(String::as_str)).map(nd_formula).collect::<Result<Vec<_>, _>>()?;
            markers_in(&ts)
        }
        LoadedSystem::Aphs(_) => BTreeSet::new(),
    };
    let v = view(sys, bounds.universe, fresh, &extra)?;
    let show = v.show();
    let goal = v.formula(goal)?;
    let gamma: BTreeSet<Term> = assume.iter().map(|a| v.formula(a)).collect::<Result<_, _>>()?;
    let verdict = entails_in(&v.system, &v.universe, &gamma, &goal, b);
    let mut text = String::new();
    let code = verdict_code(&verdict);
    let mut json = json!({
        "command": "prove",
        "goal": show(&goal),
        "assumptions": string_list(gamma.iter().map(show)),
        "universe": bounds.universe,
        "max_depth": bounds.max_depth,
        "verdict": verdict.as_str(),
    });
    match &verdict {
        Verdict::Yes(d) => {
            let _ = writeln!(text, "proved: {}", show(&goal));
            text.push_str(&tree(d, &show));
            json["derivation"] = derivation_json(d);
        }
        Verdict::No => {
            let _ = writeln!(
                text,
                "refuted: {} does not follow; the closure inside universe {} is saturated",
                show(&goal),
                bounds.universe
            );
        }
        Verdict::Unknown => {
            let reason = if v.universe.contains(&goal) { "the budget ran out" } else { "the goal lies outside the universe" };
            let _ = writeln!(text, "unknown: no derivation of {} found; {reason}", show(&goal));
        }
    }
    Ok(Outcome::new(text, json, code))
}

pub fn theorems(system: &Path, bounds: Bounds, fresh: usize) -> Result<Outcome, Failure> {
    let b = budget(bounds)?;
    let v = view(load(system)?, bounds.universe, fresh, &BTreeSet::new())?;
    let show = v.show();
    let th = theorem_set_in(&v.system, &v.universe, b);
    let mut text = format!(
        "{} theorems within universe {}{}\n",
        th.theorems.len(),
        bounds.universe,
        if th.saturated { "" } else { " (not saturated; the list may be incomplete)" }
    );
    for t in &th.theorems {
        let _ = writeln!(text, "  {}", show(t));
    }
    let json = json!({
        "command": "theorems",
        "universe": bounds.universe,
        "saturated": th.saturated,
        "theorems": string_list(th.theorems.iter().map(show)),
    });
    Ok(Outcome::new(text, json, if th.saturated { EXIT_OK } else { EXIT_UNKNOWN }))
}
