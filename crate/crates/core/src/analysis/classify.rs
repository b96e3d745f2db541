use std::collections::{BTreeMap, BTreeSet};

use crate::aphs::{
    entails_in, theorem_set_in, Aphs, Budget, Derivation, Instance, InstanceId, NamedRule, UnnamedRule, Universe,
};
use crate::verdict::Verdict;

/// A mimicking derivation for `inst`: assumptions among its premises,
/// conclusion its conclusion.
pub fn find_mimicking_derivation(s: &Aphs, inst: &Instance, b: Budget) -> Verdict<Derivation> {
    find_mimicking_derivation_in(s, &s.universe(b.max_universe_size), inst, b)
}

pub fn find_mimicking_derivation_in(s: &Aphs, universe: &Universe, inst: &Instance, b: Budget) -> Verdict<Derivation> {
    entails_in(s, universe, &inst.premise_set(), &inst.concl, b)
}

/// Outcome of a derivability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivability {
    pub verdict: Verdict,
    /// One mimicking derivation per instance that has one.
    pub witnesses: BTreeMap<InstanceId, Derivation>,
    /// An instance certified to have no mimicking derivation.
    pub counterexample: Option<Instance>,
    /// Instances whose status the budget left open.
    pub undecided: Vec<InstanceId>,
    /// `true` when only the instances inside the universe were examined.
    pub fragment: bool,
    pub instances: usize,
}

/// Whether every instance of `r` inside the universe has a mimicking
/// derivation in `s`.
pub fn check_derivable(s: &Aphs, r: &UnnamedRule, b: Budget) -> Derivability {
    check_derivable_in(s, &s.universe(b.max_universe_size), r, b)
}

pub fn check_derivable_in(s: &Aphs, universe: &Universe, r: &UnnamedRule, b: Budget) -> Derivability {
    let en = r.enumerate(universe);
    let mut out = Derivability {
        verdict: Verdict::Yes(()),
        witnesses: BTreeMap::new(),
        counterexample: None,
        undecided: Vec::new(),
        fragment: !en.complete,
        instances: en.instances.len(),
    };
    for inst in en.instances {
        match find_mimicking_derivation_in(s, universe, &inst, b) {
            Verdict::Yes(d) => {
                out.witnesses.insert(inst.id.clone(), d);
            }
            Verdict::No => {
                out.counterexample = Some(inst);
                out.verdict = Verdict::No;
                return out;
            }
            Verdict::Unknown => out.undecided.push(inst.id.clone()),
        }
    }
    if !out.undecided.is_empty() {
        out.verdict = Verdict::Unknown;
    }
    out
}

/// Outcome of a correctness or admissibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleCheck {
    pub verdict: Verdict,
    /// An instance whose premises are theorems but whose conclusion is not.
    pub counterexample: Option<Instance>,
    pub fragment: bool,
}

/// Whether theoremhood of all premises implies theoremhood of the
/// conclusion, for every instance inside the universe.
pub fn check_correct(s: &Aphs, r: &UnnamedRule, b: Budget) -> RuleCheck {
    check_correct_in(s, &s.universe(b.max_universe_size), r, b)
}

pub fn check_correct_in(s: &Aphs, universe: &Universe, r: &UnnamedRule, b: Budget) -> RuleCheck {
    let ts = theorem_set_in(s, universe, b);
    let en = r.enumerate(universe);
    let mut unknown = false;
    for inst in en.instances {
        let prem_all = inst.prem.iter().all(|p| ts.theorems.contains(p));
        if ts.theorems.contains(&inst.concl) {
            continue;
        }
        if !ts.saturated {
            unknown = true;
            continue;
        }
        if prem_all {
            return RuleCheck { verdict: Verdict::No, counterexample: Some(inst), fragment: !en.complete };
        }
    }
    let verdict = if unknown { Verdict::Unknown } else { Verdict::Yes(()) };
    RuleCheck { verdict, counterexample: None, fragment: !en.complete }
}

/// Whether adding `r` under a fresh name leaves the theorems unchanged.
pub fn check_admissible(s: &Aphs, r: &UnnamedRule, b: Budget) -> RuleCheck {
    check_admissible_in(s, &s.universe(b.max_universe_size), r, b)
}

pub fn check_admissible_in(s: &Aphs, universe: &Universe, r: &UnnamedRule, b: Budget) -> RuleCheck {
    let ext = s
        .extend_with_rule(NamedRule::new(s.fresh_name("R"), r.clone()))
        .expect("fresh name");
    let fragment = !r.enumerate(universe).complete;
    let before = theorem_set_in(s, universe, b);
    let after = theorem_set_in(&ext, universe, b);
    let new: BTreeSet<_> = after.theorems.difference(&before.theorems).cloned().collect();
    let verdict = if before.saturated && !new.is_empty() {
        Verdict::No
    } else if before.saturated && after.saturated {
        Verdict::Yes(())
    } else {
        Verdict::Unknown
    };
    let counterexample = if verdict.is_no() {
        // an instance of r with theorem premises and a new conclusion
        r.enumerate(universe).instances.into_iter().find(|i| {
            new.contains(&i.concl) && i.prem.iter().all(|p| before.theorems.contains(p))
        })
    } else {
        None
    };
    RuleCheck { verdict, counterexample, fragment }
}

/// All three verdicts together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleStatus {
    pub derivable: Derivability,
    pub correct: RuleCheck,
    pub admissible: RuleCheck,
}

impl RuleStatus {
    /// Admissible and correct disagree although both are decided.
    pub fn violates_equivalence(&self) -> bool {
        matches!(
            (self.admissible.verdict.decided(), self.correct.verdict.decided()),
            (Some(a), Some(c)) if a != c
        )
    }

    /// Derivable but not admissible.
    pub fn violates_inclusion(&self) -> bool {
        self.derivable.verdict.is_yes() && self.admissible.verdict.is_no()
    }
}

pub fn classify_rule(s: &Aphs, r: &UnnamedRule, b: Budget) -> RuleStatus {
    classify_rule_in(s, &s.universe(b.max_universe_size), r, b)
}

pub fn classify_rule_in(s: &Aphs, universe: &Universe, r: &UnnamedRule, b: Budget) -> RuleStatus {
    RuleStatus {
        derivable: check_derivable_in(s, universe, r, b),
        correct: check_correct_in(s, universe, r, b),
        admissible: check_admissible_in(s, universe, r, b),
    }
}
