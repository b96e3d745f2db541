use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::aphs::{
    check_derivation, derives, entails, Aphs, Budget, Derivation, InstanceId, NamedRule, Path, SearchOutcome,
};
use crate::term::Term;
use crate::verdict::Verdict;

/// One mimicking derivation per instance of the rule being eliminated.
pub type MimicryTable = BTreeMap<InstanceId, Derivation>;

/// Which occurrence of the rule is rewritten next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// The first occurrence in post-order; its subderivations are free of the rule.
    LeftmostInnermost,
    /// The first occurrence in pre-order.
    LeftmostOutermost,
    /// A uniformly chosen occurrence, from a seeded generator.
    Random(u64),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::LeftmostInnermost => f.write_str("leftmost-innermost"),
            Strategy::LeftmostOutermost => f.write_str("leftmost-outermost"),
            Strategy::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    /// Accepts `leftmost-innermost`, `leftmost-outermost`, `random:SEED`
    /// and `random(SEED)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "leftmost-innermost" => Ok(Strategy::LeftmostInnermost),
            "leftmost-outermost" => Ok(Strategy::LeftmostOutermost),
            other => {
                let seed = other
                    .strip_prefix("random:")
                    .or_else(|| other.strip_prefix("random(").and_then(|r| r.strip_suffix(')')))
                    .ok_or_else(|| format!("unknown strategy `{other}`"))?;
                seed.trim()
                    .parse()
                    .map(Strategy::Random)
                    .map_err(|_| format!("bad random seed `{seed}`"))
            }
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum EliminationError {
    #[error("mimicry table has no entry for instance `{0}`")]
    MissingMimicry(InstanceId),
    #[error("mimicry entry for `{0}` uses the rule being eliminated")]
    MimicryNotRuleFree(InstanceId),
    #[error("mimicry entry for `{id}` is not a mimicking derivation: {reason}")]
    InvalidMimicry { id: InstanceId, reason: String },
    #[error("rule `{rule}` has no instance `{id}`")]
    UnknownInstance { rule: String, id: InstanceId },
    #[error("derivation is not valid in the extended system: {0}")]
    InvalidDerivation(String),
    #[error("cannot extend the system: {0}")]
    Extension(String),
}

/// One rewriting step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationStep {
    pub path: Path,
    pub instance: InstanceId,
    /// Occurrences of the rule after the step.
    pub remaining: usize,
    /// Heights of the remaining occurrences, largest first.
    pub measure: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationTrace {
    pub strategy: Strategy,
    pub initial: Derivation,
    pub initial_count: usize,
    pub initial_measure: Vec<usize>,
    pub steps: Vec<EliminationStep>,
    pub result: Derivation,
}

impl EliminationTrace {
    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// Whether the height multiset of remaining occurrences decreases
    /// strictly (multiset order) at every step.
    pub fn measure_strictly_decreases(&self) -> bool {
        let mut prev = &self.initial_measure;
        for s in &self.steps {
            if !multiset_less(&s.measure, prev) {
                return false;
            }
            prev = &s.measure;
        }
        true
    }

    /// Whether the occurrence count drops by exactly one at every step.
    pub fn count_decreases_by_one(&self) -> bool {
        let mut prev = self.initial_count;
        for s in &self.steps {
            if s.remaining + 1 != prev {
                return false;
            }
            prev = s.remaining;
        }
        true
    }
}

/// Dershowitz-Manna order on multisets of naturals given sorted descending.
fn multiset_less(a: &[usize], b: &[usize]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    // cancel common elements
    let mut i = 0;
    while i < a.len() {
        if let Some(j) = b.iter().position(|&x| x == a[i]) {
            b.remove(j);
            a.remove(i);
        } else {
            i += 1;
        }
    }
    // what is left of `a` must be dominated by something left of `b`
    !b.is_empty() && a.iter().all(|x| b.iter().any(|y| y > x))
}

/// Heights of the occurrences of `rule`, counted as the number of rule
/// nodes on the longest path below and including each occurrence.
fn occurrence_heights(d: &Derivation, rule: &str) -> Vec<usize> {
    fn go(d: &Derivation, rule: &str, out: &mut Vec<usize>) -> usize {
        let below = d.premises().iter().map(|p| go(p, rule, out)).max().unwrap_or(0);
        if matches!(d, Derivation::Rule { rule: r, .. } if r == rule) {
            out.push(below + 1);
            below + 1
        } else {
            below
        }
    }
    let mut out = Vec::new();
    go(d, rule, &mut out);
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Checks a mimicry table: entries must be rule-free mimicking derivations
/// valid in `s` for instances of `r`.
pub fn check_mimicry(s: &Aphs, r: &NamedRule, m: &MimicryTable) -> Result<(), EliminationError> {
    for (id, d) in m {
        if d.uses_rule(&r.name) {
            return Err(EliminationError::MimicryNotRuleFree(id.clone()));
        }
        let inst = r
            .rule
            .instance(id)
            .ok_or_else(|| EliminationError::UnknownInstance { rule: r.name.clone(), id: id.clone() })?;
        let invalid = |reason: String| EliminationError::InvalidMimicry { id: id.clone(), reason };
        if let Err(defects) = check_derivation(s, d) {
            return Err(invalid(defects[0].to_string()));
        }
        if d.conclusion() != &inst.concl {
            return Err(invalid(format!("concludes `{}` instead of `{}`", d.conclusion(), inst.concl)));
        }
        let prem = inst.premise_set();
        if let Some(a) = d.assumptions().into_iter().find(|a| !prem.contains(a)) {
            return Err(invalid(format!("assumption `{a}` is not a premise")));
        }
    }
    Ok(())
}

/// Replaces occurrences of `r` in `d` by their mimicking derivations until
/// none is left.
pub fn eliminate_rule(
    s: &Aphs,
    r: &NamedRule,
    d: &Derivation,
    m: &MimicryTable,
    strategy: Strategy,
) -> Result<EliminationTrace, EliminationError> {
    let ext = if s.rule(&r.name).is_some() {
        s.clone()
    } else {
        s.extend_with_rule(r.clone()).map_err(|e| EliminationError::Extension(e.to_string()))?
    };
    let base = s.without_rule(&r.name);
    if let Err(defects) = check_derivation(&ext, d) {
        return Err(EliminationError::InvalidDerivation(defects[0].to_string()));
    }
    check_mimicry(&base, r, m)?;

    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut current = d.clone();
    let mut steps = Vec::new();
    loop {
        let paths = match strategy {
            Strategy::LeftmostInnermost => current.rule_paths_postorder(&r.name),
            _ => current.rule_paths_preorder(&r.name),
        };
        if paths.is_empty() {
            break;
        }
        let path = match rng.as_mut() {
            Some(rng) => paths[rng.gen_range(0..paths.len())].clone(),
            None => paths[0].clone(),
        };
        let Some(Derivation::Rule { instance, premises, .. }) = current.at(&path) else {
            unreachable!("path points at an occurrence");
        };
        let inst = r
            .rule
            .instance(instance)
            .ok_or_else(|| EliminationError::UnknownInstance { rule: r.name.clone(), id: instance.clone() })?;
        let mimic = m.get(instance).ok_or_else(|| EliminationError::MissingMimicry(instance.clone()))?;
        let replacement = plug(mimic, &inst.prem, premises);
        let id = instance.clone();
        current = current.replace_at(&path, replacement).expect("path exists");
        steps.push(EliminationStep {
            path,
            instance: id,
            remaining: current.rule_count(&r.name),
            measure: occurrence_heights(&current, &r.name),
        });
    }
    Ok(EliminationTrace {
        strategy,
        initial: d.clone(),
        initial_count: d.rule_count(&r.name),
        initial_measure: occurrence_heights(d, &r.name),
        steps,
        result: current,
    })
}

/// Plugs the subderivations of the replaced node into the assumption
/// leaves of the mimic. The k-th leaf assuming `A` takes the k-th premise
/// equal to `A` (the last one once they run out).
fn plug(mimic: &Derivation, prem: &[Term], subs: &[Derivation]) -> Derivation {
    let mut slots: HashMap<&Term, Vec<usize>> = HashMap::new();
    for (i, p) in prem.iter().enumerate() {
        slots.entry(p).or_default().push(i);
    }
    let mut seen: HashMap<Term, usize> = HashMap::new();
    fn go(
        d: &Derivation,
        slots: &HashMap<&Term, Vec<usize>>,
        subs: &[Derivation],
        seen: &mut HashMap<Term, usize>,
    ) -> Derivation {
        match d {
            Derivation::Assume { formula } => match slots.get(formula) {
                Some(idx) => {
                    let k = seen.entry(formula.clone()).or_insert(0);
                    let i = idx[(*k).min(idx.len() - 1)];
                    *k += 1;
                    subs[i].clone()
                }
                None => d.clone(),
            },
            Derivation::Axiom { .. } => d.clone(),
            Derivation::Rule { rule, instance, formula, premises } => Derivation::Rule {
                rule: rule.clone(),
                instance: instance.clone(),
                formula: formula.clone(),
                premises: premises.iter().map(|p| go(p, slots, subs, seen)).collect(),
            },
        }
    }
    go(mimic, &slots, subs, &mut seen)
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("derivation has assumptions")]
    NotClosed,
    #[error("derivation is not valid in the extended system: {0}")]
    InvalidDerivation(String),
    #[error("no derivation of `{0}` found in the base system within the budget")]
    BudgetExceeded(Term),
    #[error("cannot extend the system: {0}")]
    Extension(String),
}

/// A closed derivation in `s` with the conclusion of `d`, a closed
/// derivation in `s` extended by `r`. Found by proving the conclusion again.
pub fn translate_closed_derivation(
    s: &Aphs,
    r: &NamedRule,
    d: &Derivation,
    b: Budget,
) -> Result<Derivation, TranslateError> {
    let ext = if s.rule(&r.name).is_some() {
        s.clone()
    } else {
        s.extend_with_rule(r.clone()).map_err(|e| TranslateError::Extension(e.to_string()))?
    };
    let base = s.without_rule(&r.name);
    if let Err(defects) = check_derivation(&ext, d) {
        return Err(TranslateError::InvalidDerivation(defects[0].to_string()));
    }
    if !d.is_closed() {
        return Err(TranslateError::NotClosed);
    }
    if !d.uses_rule(&r.name) {
        return Ok(d.clone());
    }
    let goal = d.conclusion();
    if let SearchOutcome::Proved(p) = derives(&base, &Default::default(), goal, b) {
        return Ok(p);
    }
    match entails(&base, &Default::default(), goal, b) {
        Verdict::Yes(p) => Ok(p),
        _ => Err(TranslateError::BudgetExceeded(goal.clone())),
    }
}
