//! Property tests for the invariants of terms, rewriting, Hilbert systems,
//! rule analysis and the natural-deduction encoding.

use std::collections::{BTreeMap, BTreeSet};

use proofkit_core::analysis::{check_derivable, eliminate_rule, Strategy as Order};
use proofkit_core::ands::{
    encode_instance, marker_pool, Ands, AndsInstance, AndsRule, Context, MarkedAssumption, NamedAndsRule, Sequent,
};
use proofkit_core::ars::{induced_relation, reachable, trs_step_expansion};
use proofkit_core::audit::{random_rule_derivation, sample_rng};
use proofkit_core::sample::{sample_rule, sample_system, SampleConfig};
use proofkit_core::term::{enumerate_terms, match_scheme, MetaVar};
use proofkit_core::{
    check_derivation, derives, is_theorem, theorem_set, Derivation, NamedAxiom, NamedRule, Scheme, Signature,
    Substitution, Term,
};
use proptest::prelude::*;

fn sig() -> Signature {
    Signature::parse(["a/0", "b/0", "f/1", "g/2"]).unwrap()
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::constant("a")), Just(Term::constant("b"))];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            (inner.clone(), inner).prop_map(|(x, y)| Term::app("g", vec![x, y])),
        ]
    })
}

fn scheme_over(vars: &'static [&'static str]) -> impl Strategy<Value = Scheme> {
    let leaf = prop_oneof![
        Just(Scheme::App("a".into(), vec![])),
        proptest::sample::select(vars).prop_map(Scheme::var),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|s| Scheme::App("f".into(), vec![s])),
            (inner.clone(), inner).prop_map(|(x, y)| Scheme::App("g".into(), vec![x, y])),
        ]
    })
}

fn scheme() -> impl Strategy<Value = Scheme> {
    scheme_over(&["X", "Y"])
}

fn substitution() -> impl Strategy<Value = Substitution> {
    (term(), term()).prop_map(|(x, y)| {
        let mut s = Substitution::new();
        s.insert(MetaVar::new("X"), x);
        s.insert(MetaVar::new("Y"), y);
        s
    })
}

fn linear(s: &Scheme) -> bool {
    s.vars().iter().all(|v| s.occurrences(v) <= 1)
}

/// Replaces every variable by the scheme the substitution maps it to.
fn compose(s: &Scheme, by: &BTreeMap<&str, Scheme>) -> Scheme {
    match s {
        Scheme::Var(v) => by.get(v.name()).cloned().unwrap_or_else(|| s.clone()),
        Scheme::App(h, args) => Scheme::App(h.clone(), args.iter().map(|a| compose(a, by)).collect()),
    }
}

/// Number of terms of each exact size, by convolution over argument sizes.
fn census(arities: &[usize], max: usize) -> Vec<usize> {
    let mut count = vec![0usize; max + 1];
    for n in 1..=max {
        for &k in arities {
            count[n] += tuples(&count, k, n - 1);
        }
    }
    count
}

fn tuples(count: &[usize], k: usize, total: usize) -> usize {
    if k == 0 {
        return usize::from(total == 0);
    }
    (1..=total).map(|first| count[first] * tuples(count, k - 1, total - first)).sum()
}

fn naive_match(s: &Scheme, t: &Term, env: &mut BTreeMap<String, Term>) -> bool {
    match s {
        Scheme::Var(v) => match env.get(v.name()) {
            Some(bound) => bound == t,
            None => {
                env.insert(v.name().to_string(), t.clone());
                true
            }
        },
        Scheme::App(h, args) => {
            &**h == t.head()
                && args.len() == t.args().len()
                && args.iter().zip(t.args()).all(|(a, b)| naive_match(a, b, env))
        }
    }
}

fn naive_apply(s: &Scheme, env: &BTreeMap<String, Term>) -> Term {
    match s {
        Scheme::Var(v) => env[v.name()].clone(),
        Scheme::App(h, args) => Term::app(h.clone(), args.iter().map(|a| naive_apply(a, env)).collect()),
    }
}

/// All one-step rewrites of `t`, at the root or inside an argument.
fn rewrites(t: &Term, lhs: &Scheme, rhs: &Scheme) -> Vec<Term> {
    let mut out = Vec::new();
    let mut env = BTreeMap::new();
    if naive_match(lhs, t, &mut env) {
        out.push(naive_apply(rhs, &env));
    }
    for (i, arg) in t.args().iter().enumerate() {
        for r in rewrites(arg, lhs, rhs) {
            let mut args = t.args().to_vec();
            args[i] = r;
            out.push(Term::app(t.head(), args));
        }
    }
    out
}

fn rewrite_rule() -> impl Strategy<Value = (Scheme, Scheme)> {
    let lhs = scheme_over(&["X", "Y"]).prop_filter("lhs is not a variable", |s| matches!(s, Scheme::App(..)));
    lhs.prop_flat_map(|l| {
        let vars: Vec<String> = l.vars().iter().map(|v| v.name().to_string()).collect();
        let rhs = if vars.is_empty() {
            prop_oneof![Just(Scheme::App("a".into(), vec![])), Just(Scheme::App("b".into(), vec![]))].boxed()
        } else {
            let pick = proptest::sample::select(vars).prop_map(|v| Scheme::var(&v));
            prop_oneof![
                pick.clone(),
                pick.clone().prop_map(|s| Scheme::App("f".into(), vec![s])),
                (pick.clone(), pick).prop_map(|(x, y)| Scheme::App("g".into(), vec![x, y])),
                Just(Scheme::App("b".into(), vec![])),
            ]
            .boxed()
        };
        (Just(l), rhs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn substitution_is_a_homomorphism(s in scheme(), inner in scheme(), sigma in substitution()) {
        // (s[X := inner])σ = s[X := innerσ, Y := Yσ]
        let by = BTreeMap::from([("X", inner.clone())]);
        let composed = compose(&s, &by).apply(&sigma).unwrap();
        let mut tau = sigma.clone();
        tau.insert(MetaVar::new("X"), inner.apply(&sigma).unwrap());
        prop_assert_eq!(composed, s.apply(&tau).unwrap());
    }

    #[test]
    fn matching_is_sound(s in scheme(), t in term()) {
        if let Some(sigma) = match_scheme(&s, &t) {
            prop_assert_eq!(s.apply(&sigma).unwrap(), t);
        }
    }

    #[test]
    fn matching_is_complete(s in scheme(), sigma in substitution()) {
        let t = s.apply(&sigma).unwrap();
        let found = match_scheme(&s, &t);
        prop_assert!(found.is_some());
        prop_assert_eq!(&s.apply(&found.unwrap()).unwrap(), &t);
        if linear(&s) {
            prop_assert_eq!(match_scheme(&s, &t).map(|m| m.restrict(&s.vars())), Some(sigma.restrict(&s.vars())));
        }
    }

    #[test]
    fn enumeration_matches_census(max in 1usize..8, unary in 0usize..3, binary in 0usize..2) {
        let mut decls = vec!["c/0".to_string(), "d/0".to_string()];
        decls.extend((0..unary).map(|i| format!("u{i}/1")));
        decls.extend((0..binary).map(|i| format!("w{i}/2")));
        let sig = Signature::parse(decls.iter().map(String::as_str)).unwrap();
        let terms = enumerate_terms(&sig, max);
        let arities: Vec<usize> = sig.symbols().map(|s| s.arity).collect();
        let expected: usize = census(&arities, max).iter().sum();
        prop_assert_eq!(terms.len(), expected);
        let distinct: BTreeSet<&Term> = terms.iter().collect();
        prop_assert_eq!(distinct.len(), terms.len());
        prop_assert!(terms.windows(2).all(|w| (w[0].size(), &w[0]) < (w[1].size(), &w[1])));
        prop_assert!(terms.iter().all(|t| t.size() <= max && sig.accepts(t)));
    }

    #[test]
    fn expansion_agrees_with_naive_rewriting((lhs, rhs) in rewrite_rule(), bound in 1usize..6) {
        let sig = sig();
        let ars = trs_step_expansion(&sig, &lhs, &rhs, bound).unwrap();
        let mut expected = BTreeSet::new();
        for t in ars.objects() {
            for r in rewrites(t, &lhs, &rhs) {
                if r.size() <= bound {
                    expected.insert((t.clone(), r));
                }
            }
        }
        let rel = induced_relation(&ars);
        prop_assert_eq!(&rel, &expected);
        prop_assert!(ars.step_count() >= rel.len());
    }

    #[test]
    fn reachability_reaches_a_fixpoint((lhs, rhs) in rewrite_rule(), bound in 1usize..5) {
        let ars = trs_step_expansion(&sig(), &lhs, &rhs, bound).unwrap();
        let n = ars.objects().len();
        for a in ars.objects().iter().take(12) {
            let full = reachable(&ars, a, n).unwrap();
            prop_assert_eq!(&full, &reachable(&ars, a, n + 3).unwrap());
            prop_assert!(reachable(&ars, a, 1).unwrap().is_subset(&full));
            prop_assert!(full.contains(a));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_witnesses_are_valid(seed in any::<u64>()) {
        let sampled = sample_system(&mut sample_rng(seed, 0), &SampleConfig::default());
        let s = &sampled.system;
        for goal in &sampled.terms {
            if let Some(d) = derives(s, &BTreeSet::new(), goal, sampled.budget).into_derivation() {
                prop_assert!(check_derivation(s, &d).is_ok());
                prop_assert_eq!(d.conclusion(), goal);
                prop_assert!(d.is_closed());
            }
        }
    }

    #[test]
    fn search_is_deterministic(seed in any::<u64>()) {
        let sampled = sample_system(&mut sample_rng(seed, 1), &SampleConfig::default());
        for goal in &sampled.terms {
            let first = derives(&sampled.system, &BTreeSet::new(), goal, sampled.budget);
            prop_assert_eq!(first, derives(&sampled.system, &BTreeSet::new(), goal, sampled.budget));
        }
    }

    #[test]
    fn derivability_is_monotone_in_assumptions(seed in any::<u64>(), pick in any::<u64>()) {
        let sampled = sample_system(&mut sample_rng(seed, 2), &SampleConfig::default());
        let terms = &sampled.terms;
        let gamma: BTreeSet<Term> = terms.iter().enumerate().filter(|(i, _)| pick >> (i % 64) & 1 == 1).map(|(_, t)| t.clone()).collect();
        let more: BTreeSet<Term> = gamma.iter().cloned().chain(terms.iter().step_by(3).cloned()).collect();
        for goal in terms {
            if derives(&sampled.system, &gamma, goal, sampled.budget).is_proved() {
                let d = derives(&sampled.system, &more, goal, sampled.budget).into_derivation();
                prop_assert!(d.is_some(), "{goal} lost when assumptions grew");
                prop_assert!(d.unwrap().assumptions().is_subset(&more));
            }
        }
    }

    #[test]
    fn grafting_composes_derivations(seed in any::<u64>()) {
        let sampled = sample_system(&mut sample_rng(seed, 3), &SampleConfig::default());
        let s = &sampled.system;
        let b = sampled.budget;
        let none = BTreeSet::new();
        let proofs: BTreeMap<Term, Derivation> = sampled
            .terms
            .iter()
            .filter_map(|t| derives(s, &none, t, b).into_derivation().map(|d| (t.clone(), d)))
            .collect();
        for (a, da) in &proofs {
            let gamma = BTreeSet::from([a.clone()]);
            for goal in &sampled.terms {
                let Some(dg) = derives(s, &gamma, goal, b).into_derivation() else { continue };
                let grafted = dg.graft(&|t: &Term| (t == a).then(|| da.clone()));
                prop_assert!(check_derivation(s, &grafted).is_ok());
                prop_assert_eq!(grafted.conclusion(), goal);
                prop_assert!(grafted.is_closed());
            }
        }
    }

    #[test]
    fn theorem_set_agrees_with_theoremhood(seed in any::<u64>()) {
        let sampled = sample_system(&mut sample_rng(seed, 4), &SampleConfig::default());
        let s = &sampled.system;
        let th = theorem_set(s, sampled.budget);
        prop_assume!(th.saturated);
        for t in &sampled.terms {
            let v = is_theorem(s, t, sampled.budget);
            prop_assert_eq!(v.is_yes(), th.theorems.contains(t));
            prop_assert!(v.is_decided());
        }
    }

    #[test]
    fn elimination_is_sound_and_bounded(seed in any::<u64>()) {
        let cfg = SampleConfig::default();
        let mut rng = sample_rng(seed, 5);
        let sampled = sample_system(&mut rng, &cfg);
        let r = sample_rule(&mut rng, &sampled, &cfg);
        let s = &sampled.system;
        let der = check_derivable(s, &r, sampled.budget);
        prop_assume!(der.verdict.is_yes());
        let named = NamedRule::new(s.fresh_name("R"), r);
        let ext = s.extend_with_rule(named.clone()).unwrap();
        let u = ext.universe(sampled.budget.max_universe_size);
        let d = random_rule_derivation(&ext, &named.name, &u, 2, &mut rng);
        prop_assume!(d.is_some());
        let d = d.unwrap();
        for st in [Order::LeftmostInnermost, Order::LeftmostOutermost, Order::Random(seed)] {
            let trace = eliminate_rule(s, &named, &d, &der.witnesses, st).unwrap();
            prop_assert!(trace.step_count() <= trace.initial_count);
            prop_assert!(trace.measure_strictly_decreases());
            prop_assert!(check_derivation(s, &trace.result).is_ok());
            prop_assert_eq!(trace.result.conclusion(), d.conclusion());
            prop_assert!(trace.result.assumptions().is_subset(&d.assumptions()));
            prop_assert!(!trace.result.uses_rule(&named.name));
        }
    }
}

fn nd_formula() -> impl Strategy<Value = Term> {
    let atom = prop_oneof![Just(Term::constant("p")), Just(Term::constant("q"))];
    atom.prop_recursive(2, 6, 2, |inner| (inner.clone(), inner).prop_map(|(x, y)| Term::app("imp", vec![x, y])))
}

fn marked() -> impl Strategy<Value = MarkedAssumption> {
    (nd_formula(), proptest::sample::select(vec!["u", "v"])).prop_map(|(f, m)| MarkedAssumption::new(f, m))
}

fn nd_instance(id: String) -> impl Strategy<Value = AndsInstance> {
    proptest::collection::vec((nd_formula(), proptest::collection::btree_set(marked(), 0..3)), 0..3).prop_flat_map(
        move |prem| {
            let present: Vec<MarkedAssumption> = prem.iter().flat_map(|(_, g)| g.iter().cloned()).collect();
            let id = id.clone();
            let discharged = if present.is_empty() {
                Just(Context::new()).boxed()
            } else {
                proptest::sample::subsequence(present.clone(), 0..=present.len())
                    .prop_map(|v| v.into_iter().collect::<Context>())
                    .boxed()
            };
            (Just(prem), nd_formula(), discharged).prop_map(move |(prem, concl, dm)| {
                let (forms, ctxs): (Vec<Term>, Vec<Context>) = prem.into_iter().unzip();
                AndsInstance::new(id.as_str(), forms, concl, ctxs, dm).unwrap()
            })
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn encoding_preserves_shape(i in nd_instance("i".into())) {
        let e = encode_instance(&i);
        prop_assert_eq!(&e.id, &i.id);
        prop_assert_eq!(e.arity(), i.prem.len());
        for (p, (a, g)) in e.prem.iter().zip(i.prem.iter().zip(&i.pmassm)) {
            prop_assert_eq!(Sequent::from_term(p), Some(Sequent::new(g.clone(), a.clone())));
        }
        let c = Sequent::from_term(&e.concl).unwrap();
        prop_assert_eq!(&c.succedent, &i.concl);
        prop_assert!(c.antecedent.is_disjoint(&i.dmassm));
        let present: Context = i.pmassm.iter().flatten().cloned().collect();
        let expected: Context = present.difference(&i.dmassm).cloned().collect();
        prop_assert_eq!(c.antecedent, expected);
    }

    #[test]
    fn encoding_is_injective_on_ids(a in nd_instance("x".into()), b in nd_instance("y".into())) {
        let (ea, eb) = (encode_instance(&a), encode_instance(&b));
        prop_assert_ne!(&ea.id, &eb.id);
        if ea.prem == eb.prem && ea.concl == eb.concl {
            prop_assert_eq!(a.conclusion_sequent(), b.conclusion_sequent());
        }
    }

    #[test]
    fn fresh_markers_avoid_user_markers(i in nd_instance("i".into()), fresh in 0usize..4) {
        let sig = Signature::parse(["p/0", "q/0", "imp/2"]).unwrap();
        let rule = AndsRule::explicit(vec![i.clone()]).unwrap();
        let n = Ands::new(sig, vec![NamedAxiom::ground("ax", &Term::constant("p"))], vec![NamedAndsRule::new("r", rule)]);
        let pool = marker_pool(&n, &[], fresh).unwrap();
        let user = i.markers();
        prop_assert_eq!(pool.len(), user.len() + fresh);
        let minted: BTreeSet<&String> = pool.iter().filter(|m| !user.contains(*m)).collect();
        prop_assert_eq!(minted.len(), fresh);

        // A user marker named like a fresh one is a collision.
        if fresh > 0 {
            let clash = AndsInstance::new(
                "c",
                vec![Term::constant("p")],
                Term::constant("p"),
                vec![Context::from([MarkedAssumption::new(Term::constant("q"), "m1")])],
                Context::new(),
            )
            .unwrap();
            let clash = AndsRule::explicit(vec![clash]).unwrap();
            prop_assert!(marker_pool(&n, &[&clash], fresh).is_err());
        }
    }
}
