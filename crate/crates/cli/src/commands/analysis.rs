use std::fmt::Write;
use std::path::Path;

use proofkit_core::analysis::{classify_rule, compare_systems, eliminate_rule, RuleStatus, Strategy};
use proofkit_core::aphs::{check_derivation, format_path};
use proofkit_core::audit::run_audit;
use proofkit_core::format::{load_aphs_rule, load_derivation, load_mimicry, LoadedSystem};
use proofkit_core::{Term, Verdict};
use serde_json::{json, Value};

use super::{budget, load, load_aphs_only, nd};
use crate::report::{
    combine, derivation_json, indented_tree, invalid, string_list, tree, usage, Failure, Outcome, EXIT_OK, EXIT_REFUTED,
    EXIT_UNKNOWN,
};
use crate::Bounds;

pub fn classify(system: &Path, rule: &Path, bounds: Bounds, markers: usize) -> Result<Outcome, Failure> {
    let b = budget(bounds)?;
    let s = match load(system)? {
        LoadedSystem::Aphs(s) => s,
        LoadedSystem::Ands(n) => return nd::classify_loaded(&n, rule, bounds, markers, true),
    };
    let r = load_aphs_rule(rule, s.signature())?;
    let status = classify_rule(&s, &r.rule, b);
    let name = r.name.unwrap_or_else(|| "rule".to_string());
    let (text, json) = status_report(&name, &r.rule.describe(), &status, &|t: &Term| t.to_string());
    let mut json = json;
    json["command"] = json!("classify");
    json["universe"] = json!(bounds.universe);
    Ok(Outcome::new(text, json, status_code(&status)))
}

/// 0 when all three verdicts are decided, 2 otherwise.
pub fn status_code(s: &RuleStatus) -> u8 {
    if [&s.derivable.verdict, &s.correct.verdict, &s.admissible.verdict].iter().all(|v| v.is_decided()) {
        EXIT_OK
    } else {
        EXIT_UNKNOWN
    }
}

pub fn status_report(name: &str, describe: &str, s: &RuleStatus, show: &dyn Fn(&Term) -> String) -> (String, Value) {
    let inst = |i: &proofkit_core::Instance| {
        let prem: Vec<String> = i.prem.iter().map(show).collect();
        format!("{}: <{}> / {}", i.id, prem.join(", "), show(&i.concl))
    };
    let mut text = format!("rule {name}: {describe}\n");
    let d = &s.derivable;
    let _ = writeln!(
        text,
        "derivable: {}{}",
        d.verdict,
        if d.fragment { " (on the instances inside the universe)" } else { "" }
    );
    if let Some(c) = &d.counterexample {
        let _ = writeln!(text, "  no mimicking derivation for {}", inst(c));
    }
    if !d.undecided.is_empty() {
        let ids: Vec<String> = d.undecided.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(text, "  undecided instances: {}", ids.join(", "));
    }
    for (id, w) in &d.witnesses {
        let _ = writeln!(text, "  witness for {id}:");
        text.push_str(&indented_tree(w, show, 4));
    }
    for (label, c) in [("correct", &s.correct), ("admissible", &s.admissible)] {
        let _ = writeln!(text, "{label}: {}", c.verdict);
        if let Some(i) = &c.counterexample {
            let _ = writeln!(text, "  premises are theorems but the conclusion is not: {}", inst(i));
        }
    }
    let check_json = |c: &proofkit_core::analysis::RuleCheck| {
        json!({
            "verdict": c.verdict.as_str(),
            "counterexample": c.counterexample.as_ref().map(inst),
            "fragment": c.fragment,
        })
    };
    let witnesses: serde_json::Map<String, Value> =
        d.witnesses.iter().map(|(id, w)| (id.to_string(), derivation_json(w))).collect();
    let json = json!({
        "rule": name,
        "describe": describe,
        "derivable": {
            "verdict": d.verdict.as_str(),
            "instances": d.instances,
            "fragment": d.fragment,
            "counterexample": d.counterexample.as_ref().map(inst),
            "undecided": string_list(&d.undecided),
            "witnesses": witnesses,
        },
        "correct": check_json(&s.correct),
        "admissible": check_json(&s.admissible),
    });
    (text, json)
}

pub fn eliminate(system: &Path, rule: &str, derivation: &Path, mimicry: &Path, strategy: &str) -> Result<Outcome, Failure> {
    let strategy: Strategy = strategy.parse().map_err(usage)?;
    let s = load_aphs_only(system, "eliminate")?;
    let r = s.rule(rule).ok_or_else(|| usage(format!("{}: no rule named `{rule}`", system.display())))?.clone();
    let d = load_derivation(derivation)?;
    let m = load_mimicry(mimicry)?;
    let tr = eliminate_rule(&s, &r, &d, &m, strategy).map_err(invalid)?;
    let base = s.without_rule(rule);
    let valid = check_derivation(&base, &tr.result).is_ok();
    let same_conclusion = tr.result.conclusion() == d.conclusion();
    let assumptions_kept = tr.result.assumptions().is_subset(&d.assumptions());
    let decreasing = tr.measure_strictly_decreases();

    let mut text = format!(
        "eliminating {rule} ({} occurrences) with {strategy}: {} steps\n",
        tr.initial_count,
        tr.step_count()
    );
    for (k, st) in tr.steps.iter().enumerate() {
        let _ = writeln!(
            text,
            "  step {}: at {} instance {}, {} left, heights {:?}",
            k + 1,
            format_path(&st.path),
            st.instance,
            st.remaining,
            st.measure
        );
    }
    let _ = writeln!(text, "valid without {rule}: {}", yes_no(valid));
    let _ = writeln!(text, "same conclusion: {}", yes_no(same_conclusion));
    let _ = writeln!(text, "assumptions not enlarged: {}", yes_no(assumptions_kept));
    let _ = writeln!(text, "measure strictly decreasing: {}", yes_no(decreasing));
    text.push_str("result:\n");
    text.push_str(&tree(&tr.result, &|t: &Term| t.to_string()));
    let steps: Vec<Value> = tr
        .steps
        .iter()
        .map(|st| {
            json!({
                "path": format_path(&st.path),
                "instance": st.instance.to_string(),
                "remaining": st.remaining,
                "measure": st.measure,
            })
        })
        .collect();
    let json = json!({
        "command": "eliminate",
        "rule": rule,
        "strategy": strategy.to_string(),
        "initial_count": tr.initial_count,
        "initial_measure": tr.initial_measure,
        "steps": steps,
        "valid_in_base": valid,
        "same_conclusion": same_conclusion,
        "assumptions_not_enlarged": assumptions_kept,
        "measure_strictly_decreasing": decreasing,
        "result": derivation_json(&tr.result),
    });
    let ok = valid && same_conclusion && assumptions_kept && decreasing;
    Ok(Outcome::new(text, json, if ok { EXIT_OK } else { EXIT_REFUTED }))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn compare(first: &Path, second: &Path, bounds: Bounds) -> Result<Outcome, Failure> {
    let b = budget(bounds)?;
    let s1 = load_aphs_only(first, "compare")?;
    let s2 = load_aphs_only(second, "compare")?;
    let c = compare_systems(&s1, &s2, b).map_err(invalid)?;
    let rows: [(&str, &Verdict); 4] = [
        ("same theorems", &c.same_theorems),
        ("mutually admissible", &c.mutually_admissible),
        ("same consequence", &c.same_consequence),
        ("mutually derivable", &c.mutually_derivable),
    ];
    let mut text = String::new();
    for (label, v) in rows {
        let _ = writeln!(text, "{label}: {v}");
    }
    let witness = c.consequence_witness.as_ref().map(|(gamma, a)| {
        let g: Vec<String> = gamma.iter().map(|t| t.to_string()).collect();
        format!("{{{}}} |- {a}", g.join(", "))
    });
    if let Some(w) = &witness {
        let _ = writeln!(text, "consequence differs on {w}");
    }
    if !c.consequence_exhaustive {
        text.push_str("consequence compared on sampled assumption sets\n");
    }
    for d in &c.discrepancies {
        let _ = writeln!(text, "discrepancy: {d}");
    }
    let json = json!({
        "command": "compare",
        "universe": bounds.universe,
        "same_theorems": c.same_theorems.as_str(),
        "mutually_admissible": c.mutually_admissible.as_str(),
        "same_consequence": c.same_consequence.as_str(),
        "mutually_derivable": c.mutually_derivable.as_str(),
        "consequence_witness": witness,
        "consequence_exhaustive": c.consequence_exhaustive,
        "discrepancies": c.discrepancies,
    });
    let code = if !c.discrepancies.is_empty() {
        EXIT_REFUTED
    } else {
        combine(rows.iter().map(|(_, v)| if v.is_decided() { EXIT_OK } else { EXIT_UNKNOWN }))
    };
    Ok(Outcome::new(text, json, code))
}

pub fn audit(seed: u64, samples: usize, universe: usize) -> Result<Outcome, Failure> {
    if samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    if universe == 0 {
        return Err(usage("--universe must be at least 1"));
    }
    let report = run_audit(seed, samples, universe);
    let mut text = report.summary();
    text.push('\n');
    let _ = writeln!(text, "{}", if report.passed() { "passed" } else { "failed" });
    let json = serde_json::to_value(&report).expect("audit reports serialize");
    let code = if report.passed() { EXIT_OK } else { EXIT_REFUTED };
    Ok(Outcome::new(text, json, code))
}
