//! One line per acceptance criterion, written straight to stderr so it shows
//! in the test log whether or not the criterion holds.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use proofkit_core::analysis::{
    classify_rule, compare_systems, eliminate_rule, extensionalize, intensional_duplicates, rule_from_relation,
    Strategy,
};
use proofkit_core::ands::{encode_system, marker_pool, Context, Sequent};
use proofkit_core::aphs::{check_derivation, is_theorem_in};
use proofkit_core::ars::{induced_relation, parse_rewrite_rule, steps_between, trs_step_expansion};
use proofkit_core::audit::{run_audit, AuditReport};
use proofkit_core::corpus;
use proofkit_core::format::{parse_ands, parse_aphs, parse_aphs_rule, parse_derivation, parse_mimicry, parse_signature};
use proofkit_core::term::MetaVar;
use proofkit_core::{Aphs, Budget, Substitution, Term};

fn report(criterion: &str, pass: bool, detail: &str) {
    let line = format!("{} {criterion}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn t(s: &str) -> Term {
    s.parse().unwrap()
}

fn text(name: &str) -> &'static str {
    corpus::file(name).unwrap()
}

fn aphs(name: &str) -> Aphs {
    parse_aphs(name, text(name)).unwrap()
}

/// The acceptance audit run: seed 1, 200 samples, universes of at most 8 terms.
fn audit() -> &'static (AuditReport, Duration) {
    static RUN: OnceLock<(AuditReport, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let r = run_audit(1, 200, 8);
        (r, start.elapsed())
    })
}

#[test]
fn admissible_iff_correct_on_the_audit() {
    let (r, elapsed) = audit();
    let tally = r.admissible_iff_correct;
    let pass = r.samples >= 200
        && tally.violated == 0
        && tally.undecided == 0
        && tally.holds == r.samples
        && *elapsed < Duration::from_secs(60);
    report(
        "admissible iff correct",
        pass,
        &format!(
            "{} samples, {} agree, {} disagree, {} undecided, {:.2}s",
            r.samples,
            tally.holds,
            tally.violated,
            tally.undecided,
            elapsed.as_secs_f64()
        ),
    );
    assert!(pass);
}

#[test]
fn derivable_implies_admissible_and_the_converse_fails() {
    let (r, _) = audit();
    let tally = r.derivable_implies_admissible;
    let s = aphs("converse.json");
    let rule = parse_aphs_rule("converse-rule.json", text("converse-rule.json"), s.signature()).unwrap();
    let st = classify_rule(&s, &rule.rule, Budget::with_universe(1));
    let converse = st.admissible.verdict.is_yes() && st.derivable.verdict.is_no();
    let pass = tally.violated == 0 && tally.holds > 0 && converse;
    report(
        "derivable implies admissible",
        pass,
        &format!(
            "{} derivable samples admissible, {} violations; b/c admissible {}, derivable {}",
            tally.holds, tally.violated, st.admissible.verdict, st.derivable.verdict
        ),
    );
    assert!(pass);
}

#[test]
fn derivability_persists_and_admissibility_is_refuted() {
    let (r, _) = audit();
    let p = r.derivable_persists;
    let rf = &r.refutation;
    let ratio = if rf.candidates == 0 { 1.0 } else { rf.refuted as f64 / rf.candidates as f64 };
    let pass = p.violated == 0 && p.undecided == 0 && rf.candidates > 0 && ratio >= 0.9;
    report(
        "persistence in extensions",
        pass,
        &format!(
            "{} derivable rules kept their witnesses in 10 extensions each, {} lost them; \
             {} of {} admissible-not-derivable rules refuted by an extension ({:.0}%), {} unknown",
            p.holds,
            p.violated,
            rf.refuted,
            rf.candidates,
            ratio * 100.0,
            rf.unknown
        ),
    );
    assert!(pass);
}

#[test]
fn elimination_takes_one_step_per_occurrence() {
    // corpus case
    let s = aphs("elim-system.json");
    let d = parse_derivation("elim-derivation.json", text("elim-derivation.json")).unwrap();
    let m = parse_mimicry("elim-mimicry.json", text("elim-mimicry.json")).unwrap();
    let r = s.rule("R").unwrap().clone();
    let base = s.without_rule("R");
    let mut corpus_ok = true;
    for st in [Strategy::LeftmostInnermost, Strategy::LeftmostOutermost, Strategy::Random(1)] {
        let tr = eliminate_rule(&s, &r, &d, &m, st).unwrap();
        corpus_ok &= tr.step_count() == d.rule_count("R")
            && tr.measure_strictly_decreases()
            && check_derivation(&base, &tr.result).is_ok()
            && tr.result.conclusion() == d.conclusion()
            && tr.result.assumptions().is_subset(&d.assumptions());
    }

    // sampled cases
    let (rep, _) = audit();
    let e = &rep.elimination;
    let sampled_ok = e.cases > 0 && e.unsound == 0 && e.measure_failures == 0 && e.step_count_mismatches == 0;
    let pass = corpus_ok && sampled_ok;
    report(
        "elimination",
        pass,
        &format!(
            "corpus case {}; {} sampled cases, {} runs, {} unsound, {} measure failures, \
             {} runs whose step count differs from the initial occurrence count",
            if corpus_ok { "ok" } else { "failed" },
            e.cases,
            e.runs,
            e.unsound,
            e.measure_failures,
            e.step_count_mismatches
        ),
    );
    assert!(pass);
}

#[test]
fn system_comparison_equivalences() {
    let (r, _) = audit();
    let c = &r.comparison;
    let s1 = aphs("converse.json");
    let s2 = aphs("converse-extended.json");
    let cmp = compare_systems(&s1, &s2, Budget::with_universe(1)).unwrap();
    let constructed = cmp.same_theorems.is_yes()
        && cmp.mutually_admissible.is_yes()
        && cmp.same_consequence.is_no()
        && cmp.mutually_derivable.is_no()
        && cmp.discrepancies.is_empty();
    let pass = c.discrepancies == 0 && c.theorems_decided > 0 && c.consequence_decided > 0 && constructed;
    report(
        "system comparison",
        pass,
        &format!(
            "{} sampled pairs, {} decided on theorems, {} on consequence, {} discrepancies; \
             constructed pair: same theorems {}, same consequence {}",
            c.pairs, c.theorems_decided, c.consequence_decided, c.discrepancies, cmp.same_theorems, cmp.same_consequence
        ),
    );
    assert!(pass);
}

/// Every single-step rewrite of `t` by f(x) -> x, by direct recursion.
fn collapse_f_everywhere(t: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    if t.head() == "f" && t.args().len() == 1 {
        out.push(t.args()[0].clone());
    }
    for (i, a) in t.args().iter().enumerate() {
        for r in collapse_f_everywhere(a) {
            let mut args = t.args().to_vec();
            args[i] = r;
            out.push(Term::app(t.head(), args));
        }
    }
    out
}

#[test]
fn rewriting_steps_are_not_a_relation() {
    let sig = parse_signature("sig-fa.json", text("sig-fa.json")).unwrap();
    let (l, r) = parse_rewrite_rule("f(?x) -> ?x").unwrap();
    let ars = trs_step_expansion(&sig, &l, &r, 3).unwrap();
    let (from, to) = (t("f(f(a))"), t("f(a)"));
    let steps = steps_between(&ars, &from, &to).unwrap().len();
    let oracle = collapse_f_everywhere(&from).iter().filter(|x| **x == to).count();
    let pairs = induced_relation(&ars).iter().filter(|(x, y)| *x == from && *y == to).count();
    let pass = steps == 2 && oracle == 2 && pairs == 1;
    report(
        "steps versus relation",
        pass,
        &format!("{steps} steps from f(f(a)) to f(a) (direct count {oracle}), pair occurs {pairs} time(s) in the relation"),
    );
    assert!(pass);
}

/// The conclusion context is the union of the premise contexts minus the
/// discharged assumption, read off the instance itself.
fn set_difference_law(prem: &[Term], concl: &Term, id: &str) -> bool {
    let ps: Vec<Sequent> = prem.iter().map(|p| Sequent::from_term(p).unwrap()).collect();
    let c = Sequent::from_term(concl).unwrap();
    let union: Context = ps.iter().flat_map(|p| p.antecedent.iter().cloned()).collect();
    let sigma = Substitution::parse(id).ok();
    let discharged: Context = match sigma.as_ref().and_then(|s| s.get(&MetaVar::new("M")).cloned()) {
        Some(m) => {
            let a = sigma.as_ref().unwrap().get(&MetaVar::new("A")).unwrap().clone();
            Context::from([proofkit_core::ands::MarkedAssumption::new(a, m.head())])
        }
        None => Context::new(),
    };
    discharged.is_subset(&union) && c.antecedent == union.difference(&discharged).cloned().collect::<Context>()
}

#[test]
fn encoded_natural_deduction() {
    let n = parse_ands("nd-minimal.json", text("nd-minimal.json")).unwrap();
    let e = encode_system(&n, marker_pool(&n, &[], 1).unwrap(), 12).unwrap();
    let u = e.universe();
    let b = Budget::with_universe(12).depth(6);
    let mut proved = Vec::new();
    for g in ["{} => imp(a,a)", "{} => imp(a,imp(b,a))"] {
        let goal = g.parse::<Sequent>().unwrap().to_term();
        let v = is_theorem_in(&e.system, &u, &goal, b);
        proved.push(v.witness().is_some_and(|d| check_derivation(&e.system, d).is_ok()));
    }
    let mut instances = 0;
    let mut law = true;
    for r in e.system.rules() {
        for i in r.rule.enumerate(&u).instances {
            instances += 1;
            law &= set_difference_law(&i.prem, &i.concl, i.id.as_str());
        }
    }
    let pass = proved.iter().all(|p| *p) && law && instances > 0;
    report(
        "sequent encoding",
        pass,
        &format!(
            "{{}} => imp(a,a) proved {}, {{}} => imp(a,imp(b,a)) proved {}; {instances} encoded instances, set-difference law {}",
            proved[0],
            proved[1],
            if law { "holds" } else { "broken" }
        ),
    );
    assert!(pass);
}

#[test]
fn conjunction_elimination_collapse() {
    let s = aphs("and-elim.json");
    let r = &s.rule("andE").unwrap().rule;
    let u = s.universe(3);
    let native = r.enumerate(&u).instances.len();
    let collapsed = rule_from_relation(&extensionalize(r, &u)).enumerate(&u).instances.len();
    let dups = intensional_duplicates(r, &u);
    let pass = native == 2 && collapsed == 1 && dups.len() == 1;
    report(
        "extensional collapse",
        pass,
        &format!("native rule {native} instances, rebuilt from its relation {collapsed}, {} duplicate pair(s)", dups.len()),
    );
    assert!(pass);
}

fn run(args: &[&str]) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(env!("CARGO_BIN_EXE_proofkit")).args(args).output().unwrap();
    (out.stdout, out.status.code())
}

#[test]
fn commands_are_deterministic() {
    let dir = corpus::dir();
    let c = |f: &str| dir.join(f).display().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec!["audit".into(), "--seed".into(), "1".into(), "--samples".into(), "40".into()],
        vec!["--json".into(), "audit".into(), "--seed".into(), "7".into(), "--samples".into(), "40".into()],
        vec!["check".into(), c("hilbert-min.json"), c("skk.json")],
        vec!["prove".into(), c("hilbert-min.json"), "--goal".into(), "imp(a,a)".into(), "--universe".into(), "17".into(), "--max-depth".into(), "3".into()],
        vec!["--json".into(), "theorems".into(), c("forall-elim.json"), "--universe".into(), "4".into()],
        vec!["classify".into(), c("converse.json"), "--rule".into(), c("converse-rule.json"), "--universe".into(), "1".into()],
        vec![
            "eliminate".into(), c("elim-system.json"), "--rule".into(), "R".into(),
            "--derivation".into(), c("elim-derivation.json"), "--mimicry".into(), c("elim-mimicry.json"),
            "--strategy".into(), "random:5".into(),
        ],
        vec!["compare".into(), c("converse.json"), c("converse-extended.json"), "--universe".into(), "1".into()],
        vec!["ars".into(), "expand".into(), "--rule".into(), "f(?x) -> ?x".into(), "--sig".into(), c("sig-fa.json"), "--bound".into(), "4".into()],
        vec!["nd".into(), "classify".into(), c("necessitation.json"), "--rule".into(), c("necessitation-rule.json"), "--universe".into(), "7".into()],
    ];
    let mut same = 0;
    let mut differing = Vec::new();
    for args in &commands {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args);
        let second = run(&args);
        if first == second && !first.0.is_empty() {
            same += 1;
        } else {
            differing.push(args.join(" "));
        }
    }
    let pass = same == commands.len();
    report(
        "determinism",
        pass,
        &format!("{same} of {} commands byte-identical on rerun{}", commands.len(), if differing.is_empty() {
            String::new()
        } else {
            format!("; differing: {}", differing.join(" | "))
        }),
    );
    assert!(pass);
}

#[test]
fn acceptance_corpus_is_complete() {
    let names: BTreeSet<&str> = corpus::FILES.iter().map(|(n, _)| *n).collect();
    for f in ["hilbert-min.json", "and-elim.json", "or-intro.json", "forall-elim.json", "nd-imp-intro-instance.json", "necessitation.json"] {
        assert!(names.contains(f), "{f}");
    }
}
