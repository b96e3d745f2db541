use std::collections::BTreeSet;
use std::time::Instant;

use proofkit_core::analysis::check_derivable_in;
use proofkit_core::ands::{
    classify_nd_rule, encode_instance, encode_system, marker_pool, Ands, AndsError, AndsInstance, AndsRule, Context,
    FamilyKind, MarkedAssumption, NamedAndsRule, NdOptions, Sequent,
};
use proofkit_core::aphs::{check_derivation, derives, is_theorem_in, InstanceSource, UnnamedRule};
use proofkit_core::{Aphs, Budget, NamedAxiom, Scheme, Signature, Term};

fn t(s: &str) -> Term {
    s.parse().unwrap()
}

fn sq(s: &str) -> Term {
    s.parse::<Sequent>().unwrap().to_term()
}

fn ctx(items: &[(&str, &str)]) -> Context {
    items.iter().map(|(f, m)| MarkedAssumption::new(t(f), *m)).collect()
}

fn minimal(sig: &[&str]) -> Ands {
    Ands::new(
        Signature::parse(sig.iter().copied()).unwrap(),
        vec![],
        vec![
            NamedAndsRule::new("impE", AndsRule::family(FamilyKind::ImpElim, "imp")),
            NamedAndsRule::new("impI", AndsRule::family(FamilyKind::ImpIntro, "imp")),
        ],
    )
}

#[test]
fn instance_requires_discharged_assumptions_to_be_present() {
    let err = AndsInstance::new("x", vec![t("b")], t("imp(a,b)"), vec![ctx(&[])], ctx(&[("a", "u")]));
    assert!(matches!(err, Err(AndsError::DischargeNotPresent { .. })));
    let err = AndsInstance::new("x", vec![t("b")], t("b"), vec![], ctx(&[]));
    assert!(matches!(err, Err(AndsError::ArityMismatch { .. })));
}

#[test]
fn encoding_subtracts_the_discharged_set() {
    let i = AndsInstance::new(
        "i",
        vec![t("b"), t("c")],
        t("d"),
        vec![ctx(&[("a", "u"), ("b", "v")]), ctx(&[("a", "u"), ("c", "w")])],
        ctx(&[("a", "u"), ("c", "w")]),
    )
    .unwrap();
    let enc = encode_instance(&i);
    assert_eq!(enc.prem, vec![sq("{a^u, b^v} => b"), sq("{a^u, c^w} => c")]);
    assert_eq!(enc.concl, sq("{b^v} => d"));
}

#[test]
fn identity_and_k_are_theorems_at_bound_twelve() {
    let n = minimal(&["a/0", "b/0", "imp/2"]);
    let e = encode_system(&n, marker_pool(&n, &[], 1).unwrap(), 12).unwrap();
    let u = e.universe();
    let b = Budget::with_universe(12).depth(6);
    for goal in ["{} => imp(a,a)", "{} => imp(a,imp(b,a))"] {
        let d = is_theorem_in(&e.system, &u, &sq(goal), b).into_witness().unwrap_or_else(|| panic!("{goal}"));
        assert!(check_derivation(&e.system, &d).is_ok());
        assert!(d.is_closed());
    }
}

#[test]
fn weakened_elimination_is_derivable() {
    let n = minimal(&["a/0", "b/0", "c/0", "imp/2"]);
    let weak = AndsRule::explicit(vec![AndsInstance::new(
        "w",
        vec![t("imp(a,b)"), t("a")],
        t("b"),
        vec![ctx(&[("c", "v")]), ctx(&[])],
        ctx(&[]),
    )
    .unwrap()])
    .unwrap();
    let b = Budget::with_universe(10).depth(4);
    let a = classify_nd_rule(&n, &weak, b, NdOptions { check_weakening: false, ..NdOptions::default() }).unwrap();
    assert!(a.status.derivable.verdict.is_yes());
    let w = &a.status.derivable.witnesses.values().next().unwrap();
    assert_eq!(w.rule_count("impE"), 1);
}

#[test]
fn families_round_trip_their_instance_ids() {
    let n = minimal(&["a/0", "b/0", "imp/2"]);
    let e = encode_system(&n, marker_pool(&n, &[], 2).unwrap(), 9).unwrap();
    let u = e.universe();
    for r in e.system.rules() {
        let insts = r.rule.enumerate(&u).instances;
        assert!(!insts.is_empty());
        for i in insts {
            assert!(i.within(&u));
            assert_eq!(r.rule.instance(&i.id).as_ref(), Some(&i), "{}", i.id);
            assert!(r.rule.concluding(&i.concl, &u).contains(&i));
        }
    }
}

#[test]
fn family_firing_agrees_with_enumeration() {
    use proofkit_core::aphs::FactSet;
    use std::sync::Arc;
    let n = minimal(&["a/0", "b/0", "imp/2"]);
    let markers = Arc::new(marker_pool(&n, &[], 1).unwrap());
    let e = encode_system(&n, markers.to_vec(), 9).unwrap();
    let u = e.universe();
    let all: Vec<Term> = u.terms().iter().cloned().collect();
    let mut known = FactSet::new();
    for f in &all {
        known.insert(f.clone());
    }
    for kind in [FamilyKind::ImpIntro, FamilyKind::ImpElim, FamilyKind::Weakening] {
        let fam = proofkit_core::ands::Family::new(kind, "imp", n.signature.clone(), Arc::clone(&markers));
        let fired: BTreeSet<_> = fam.firing(&known, &all, true, &u).into_iter().map(|i| i.id).collect();
        let enumerated: BTreeSet<_> = fam.enumerate(&u).into_iter().map(|i| i.id).collect();
        assert_eq!(fired, enumerated, "{kind:?}");
    }
}

fn necessitation() -> (Ands, AndsRule) {
    let axioms = ["p", "box(p)", "box(box(p))", "box(box(box(p)))"]
        .iter()
        .enumerate()
        .map(|(i, f)| NamedAxiom::ground(format!("ax{i}"), &t(f)))
        .collect();
    let n = Ands::new(Signature::parse(["p/0", "q/0", "box/1"]).unwrap(), axioms, vec![]);
    let insts = ["p", "q", "box(p)", "box(q)", "box(box(p))", "box(box(q))"]
        .iter()
        .map(|a| AndsInstance::new(*a, vec![t(a)], t(&format!("box({a})")), vec![Context::new()], Context::new()).unwrap())
        .collect();
    (n, AndsRule::explicit(insts).unwrap())
}

#[test]
fn necessitation_is_admissible_but_not_derivable() {
    let (n, nr) = necessitation();
    let b = Budget::with_universe(7);
    let a = classify_nd_rule(&n, &nr, b, NdOptions::default()).unwrap();
    assert!(a.encoding.universe().len() <= 20);
    assert!(a.status.admissible.verdict.is_yes());
    assert!(a.status.correct.verdict.is_yes());
    assert!(a.status.derivable.verdict.is_no());
    assert_eq!(a.status.derivable.counterexample.as_ref().unwrap().id.as_str(), "q");
    assert!(!a.weakening_sensitive());
}

#[test]
fn necessitation_needs_an_assumption_free_premise() {
    let (mut n, nr) = necessitation();
    n.rules.push(NamedAndsRule::new("nec", nr));
    let e = encode_system(&n, marker_pool(&n, &[], 1).unwrap(), 8).unwrap();
    let goal = sq("{q^m1} => box(q)");
    let b = Budget::with_universe(8);
    assert!(is_theorem_in(&e.system, &e.universe(), &goal, b).is_no());

    // the same rule as a pure Hilbert rule derives box(q) from q
    let hilbert = Aphs::new(
        n.signature.clone(),
        vec![],
        vec![proofkit_core::NamedRule::new(
            "nec",
            UnnamedRule::scheme(vec![Scheme::var("A")], "box(?A)".parse().unwrap()),
        )],
    );
    let gamma = BTreeSet::from([t("q")]);
    assert!(derives(&hilbert, &gamma, &t("box(q)"), Budget::with_universe(3)).is_proved());
}

#[test]
fn reserved_symbols_and_marker_collisions_are_rejected() {
    let n = minimal(&["a/0", "nil/0", "imp/2"]);
    assert!(matches!(encode_system(&n, vec!["m1".into()], 5), Err(AndsError::ReservedSymbol(_))));
    let n = minimal(&["a/0", "imp/2"]);
    let clash = AndsRule::explicit(vec![AndsInstance::new("x", vec![t("a")], t("a"), vec![ctx(&[("a", "m1")])], ctx(&[])).unwrap()]).unwrap();
    assert!(matches!(marker_pool(&n, &[&clash], 1), Err(AndsError::MarkerCollision(_))));
    assert!(marker_pool(&n, &[&clash], 0).is_ok());
}

#[test]
fn duplicate_rule_names_cite_clause_two() {
    let mut n = minimal(&["a/0", "imp/2"]);
    n.rules.push(NamedAndsRule::new("impE", AndsRule::family(FamilyKind::ImpIntro, "imp")));
    let err = encode_system(&n, vec![], 5).unwrap_err().to_string();
    assert!(err.contains("(ii)"), "{err}");
}

#[test]
fn encoded_derivable_check_finishes_quickly() {
    let n = minimal(&["a/0", "b/0", "imp/2"]);
    let e = encode_system(&n, marker_pool(&n, &[], 1).unwrap(), 12).unwrap();
    let start = Instant::now();
    let r = e.system.rule("impE").unwrap().rule.clone();
    let d = check_derivable_in(&e.system, &e.universe(), &r, Budget::with_universe(12).depth(1));
    assert!(d.verdict.is_yes());
    assert!(start.elapsed().as_secs() < 60);
}
