use std::collections::{BTreeSet, HashMap};

use super::{derives_in, Aphs, Budget, Derivation, FactSet, Instance, SearchOutcome, Universe};
use crate::term::Term;
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Justification {
    Assumption,
    Axiom(String),
    Rule(String, Instance),
}

/// Forward-chaining closure of a set of assumptions inside a universe.
#[derive(Clone, Debug)]
pub struct Closure {
    facts: FactSet,
    why: HashMap<Term, Justification>,
    saturated: bool,
    rounds: usize,
}

impl Closure {
    pub fn contains(&self, t: &Term) -> bool {
        self.facts.contains(t)
    }

    /// `true` when a fixpoint was reached within the node budget, so the
    /// closure is exactly the consequences inside the universe.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn facts(&self) -> BTreeSet<Term> {
        self.facts.iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// A derivation of `t` built from the recorded justifications.
    pub fn witness(&self, t: &Term) -> Option<Derivation> {
        let mut memo = HashMap::new();
        self.build(t, &mut memo)
    }

    fn build(&self, t: &Term, memo: &mut HashMap<Term, Derivation>) -> Option<Derivation> {
        if let Some(d) = memo.get(t) {
            return Some(d.clone());
        }
        let d = match self.why.get(t)? {
            Justification::Assumption => Derivation::assume(t.clone()),
            Justification::Axiom(name) => Derivation::axiom(name.clone(), t.clone()),
            Justification::Rule(name, inst) => {
                let subs = inst.prem.iter().map(|p| self.build(p, memo)).collect::<Option<Vec<_>>>()?;
                Derivation::rule(name.clone(), inst.id.clone(), t.clone(), subs)
            }
        };
        memo.insert(t.clone(), d.clone());
        Some(d)
    }
}

/// Semi-naive forward chaining from `gamma` and the axioms, using only
/// instances whose formulas lie in the universe.
pub fn closure(s: &Aphs, gamma: &BTreeSet<Term>, b: Budget) -> Closure {
    closure_in(s, &s.universe(b.max_universe_size), gamma, b)
}

pub fn closure_in(s: &Aphs, universe: &Universe, gamma: &BTreeSet<Term>, b: Budget) -> Closure {
    let mut c = Closure { facts: FactSet::new(), why: HashMap::new(), saturated: false, rounds: 0 };
    let mut fired = 0usize;
    let mut delta = Vec::new();
    let add = |c: &mut Closure, t: Term, j: Justification, delta: &mut Vec<Term>| {
        if c.facts.insert(t.clone()) {
            c.why.insert(t.clone(), j);
            delta.push(t);
        }
    };
    for g in gamma {
        add(&mut c, g.clone(), Justification::Assumption, &mut delta);
    }
    for ax in s.axioms() {
        for t in ax.instances(universe) {
            fired += 1;
            add(&mut c, t, Justification::Axiom(ax.name.clone()), &mut delta);
        }
    }
    let mut first = true;
    loop {
        c.rounds += 1;
        let mut next = Vec::new();
        for named in s.rules() {
            for inst in named.rule.firing(&c.facts, &delta, first, universe) {
                fired += 1;
                if fired > b.max_nodes_expanded {
                    return c;
                }
                let concl = inst.concl.clone();
                add(&mut c, concl, Justification::Rule(named.name.clone(), inst), &mut next);
            }
        }
        first = false;
        if next.is_empty() {
            c.saturated = fired <= b.max_nodes_expanded;
            return c;
        }
        delta = next;
    }
}

/// The theorems inside the universe and whether they were saturated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremSet {
    pub theorems: BTreeSet<Term>,
    pub saturated: bool,
}

pub fn theorem_set(s: &Aphs, b: Budget) -> TheoremSet {
    theorem_set_in(s, &s.universe(b.max_universe_size), b)
}

pub fn theorem_set_in(s: &Aphs, universe: &Universe, b: Budget) -> TheoremSet {
    let c = closure_in(s, universe, &BTreeSet::new(), b);
    TheoremSet { saturated: c.saturated(), theorems: c.facts() }
}

/// Whether `goal` follows from `gamma`. `No` needs a saturated closure
/// missing the goal, with the goal inside the universe.
pub fn entails(s: &Aphs, gamma: &BTreeSet<Term>, goal: &Term, b: Budget) -> Verdict<Derivation> {
    entails_in(s, &s.universe(b.max_universe_size), gamma, goal, b)
}

pub fn entails_in(
    s: &Aphs,
    universe: &Universe,
    gamma: &BTreeSet<Term>,
    goal: &Term,
    b: Budget,
) -> Verdict<Derivation> {
    if let SearchOutcome::Proved(d) = derives_in(s, universe, gamma, goal, b) {
        return Verdict::Yes(d);
    }
    let c = closure_in(s, universe, gamma, b);
    if let Some(d) = c.witness(goal) {
        return Verdict::Yes(d);
    }
    if c.saturated() && universe.contains(goal) {
        Verdict::No
    } else {
        Verdict::Unknown
    }
}

pub fn is_theorem(s: &Aphs, a: &Term, b: Budget) -> Verdict<Derivation> {
    entails(s, &BTreeSet::new(), a, b)
}

pub fn is_theorem_in(s: &Aphs, universe: &Universe, a: &Term, b: Budget) -> Verdict<Derivation> {
    entails_in(s, universe, &BTreeSet::new(), a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aphs::{check_derivation, NamedAxiom, NamedRule, UnnamedRule};
    use crate::term::Signature;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn chain() -> Aphs {
        let r = UnnamedRule::explicit(vec![
            Instance::new("1", vec![t("a")], t("f(a)")),
            Instance::new("2", vec![t("f(a)")], t("f(f(a))")),
        ])
        .unwrap();
        Aphs::new(
            Signature::parse(["a/0", "b/0", "f/1"]).unwrap(),
            vec![NamedAxiom::ground("ax", &t("a"))],
            vec![NamedRule::new("R", r)],
        )
    }

    #[test]
    fn empty_system_saturates_empty() {
        let s = Aphs::empty(Signature::parse(["a/0"]).unwrap());
        let ts = theorem_set(&s, Budget::with_universe(3));
        assert!(ts.theorems.is_empty());
        assert!(ts.saturated);
    }

    #[test]
    fn chain_saturates_and_refutes() {
        let b = Budget::with_universe(3);
        let ts = theorem_set(&chain(), b);
        assert!(ts.saturated);
        assert_eq!(ts.theorems, [t("a"), t("f(a)"), t("f(f(a))")].into());
        assert_eq!(is_theorem(&chain(), &t("b"), b), Verdict::No);
        let d = is_theorem(&chain(), &t("f(f(a))"), b).into_witness().unwrap();
        assert!(check_derivation(&chain(), &d).is_ok());
    }

    #[test]
    fn goal_outside_universe_is_unknown() {
        let b = Budget::with_universe(3);
        assert_eq!(is_theorem(&chain(), &t("f(f(f(a)))"), b), Verdict::Unknown);
    }

    #[test]
    fn closure_witnesses_check() {
        let b = Budget::with_universe(3);
        let c = closure(&chain(), &[t("b")].into(), b);
        for f in c.facts() {
            let d = c.witness(&f).unwrap();
            assert!(check_derivation(&chain(), &d).is_ok());
            assert_eq!(d.conclusion(), &f);
        }
    }
}
