//! Abstract rewriting systems whose steps are first-class: two steps with
//! the same endpoints stay distinct even though the reduction relation they
//! induce records the pair only once.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::term::{enumerate_terms, match_scheme, format_position, Scheme, Signature, Term};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArsError {
    #[error("unknown object `{0}`")]
    UnknownObject(Term),
    #[error("step id `{0}` used twice")]
    DuplicateStep(String),
    #[error("object `{0}` declared twice")]
    DuplicateObject(Term),
    #[error("right-hand side uses meta-variable ?{0}, which the left-hand side does not bind")]
    IllFormedRule(String),
}

/// A rewrite step with its own identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArsStep {
    pub id: String,
    pub src: Term,
    pub tgt: Term,
    /// Index of the relation this step belongs to in an indexed family.
    pub label: Option<String>,
}

impl ArsStep {
    pub fn new(id: impl Into<String>, src: Term, tgt: Term) -> Self {
        ArsStep { id: id.into(), src, tgt, label: None }
    }
}

impl fmt::Display for ArsStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.id, self.src, self.tgt)?;
        if let Some(l) = &self.label {
            write!(f, " [{l}]")?;
        }
        Ok(())
    }
}

/// Objects plus steps; steps are kept in id order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ars {
    objects: BTreeSet<Term>,
    steps: BTreeMap<String, ArsStep>,
}

/// The pairs related by at least one step.
pub type ReductionRelation = BTreeSet<(Term, Term)>;

impl Ars {
    pub fn new(objects: impl IntoIterator<Item = Term>, steps: impl IntoIterator<Item = ArsStep>) -> Result<Self, ArsError> {
        let mut objs = BTreeSet::new();
        for o in objects {
            if !objs.insert(o.clone()) {
                return Err(ArsError::DuplicateObject(o));
            }
        }
        let mut map = BTreeMap::new();
        for s in steps {
            for end in [&s.src, &s.tgt] {
                if !objs.contains(end) {
                    return Err(ArsError::UnknownObject(end.clone()));
                }
            }
            if map.contains_key(&s.id) {
                return Err(ArsError::DuplicateStep(s.id));
            }
            map.insert(s.id.clone(), s);
        }
        Ok(Ars { objects: objs, steps: map })
    }

    pub fn objects(&self) -> &BTreeSet<Term> {
        &self.objects
    }

    pub fn steps(&self) -> impl Iterator<Item = &ArsStep> {
        self.steps.values()
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    fn known(&self, a: &Term) -> Result<(), ArsError> {
        if self.objects.contains(a) {
            Ok(())
        } else {
            Err(ArsError::UnknownObject(a.clone()))
        }
    }

    /// Steps leaving `a`, in id order.
    pub fn steps_from<'a>(&'a self, a: &'a Term) -> impl Iterator<Item = &'a ArsStep> + 'a {
        self.steps.values().filter(move |s| &s.src == a)
    }
}

/// Forgets step identity.
pub fn induced_relation(ars: &Ars) -> ReductionRelation {
    ars.steps().map(|s| (s.src.clone(), s.tgt.clone())).collect()
}

/// All steps from `a` to `b`.
pub fn steps_between(ars: &Ars, a: &Term, b: &Term) -> Result<Vec<ArsStep>, ArsError> {
    ars.known(a)?;
    ars.known(b)?;
    Ok(ars.steps().filter(|s| &s.src == a && &s.tgt == b).cloned().collect())
}

/// Objects reachable from `a` in at most `max_steps` steps.
pub fn reachable(ars: &Ars, a: &Term, max_steps: usize) -> Result<BTreeSet<Term>, ArsError> {
    ars.known(a)?;
    let mut succ: BTreeMap<&Term, Vec<&Term>> = BTreeMap::new();
    for s in ars.steps() {
        succ.entry(&s.src).or_default().push(&s.tgt);
    }
    let mut seen = BTreeSet::from([a.clone()]);
    let mut queue = VecDeque::from([(a, 0usize)]);
    while let Some((x, d)) = queue.pop_front() {
        if d == max_steps {
            continue;
        }
        for &y in succ.get(x).into_iter().flatten() {
            if seen.insert(y.clone()) {
                queue.push_back((y, d + 1));
            }
        }
    }
    Ok(seen)
}

/// The ARS of one term rewriting rule on all terms up to `bound` nodes: one
/// step per (term, redex position), with id `term@position`. Steps whose
/// target leaves the bound are omitted.
pub fn trs_step_expansion(sig: &Signature, lhs: &Scheme, rhs: &Scheme, bound: usize) -> Result<Ars, ArsError> {
    let lvars = lhs.vars();
    if let Some(v) = rhs.vars().into_iter().find(|v| !lvars.contains(v)) {
        return Err(ArsError::IllFormedRule(v.name().to_string()));
    }
    let objects = enumerate_terms(sig, bound);
    let mut steps = Vec::new();
    for t in &objects {
        for pos in t.positions() {
            let redex = t.subterm(&pos).expect("position from the term itself");
            let Some(sigma) = match_scheme(lhs, redex) else { continue };
            let contractum = rhs.apply(&sigma).expect("rhs variables are bound by lhs");
            let tgt = t.replace_at(&pos, contractum).expect("position from the term itself");
            if tgt.size() <= bound && sig.accepts(&tgt) {
                steps.push(ArsStep::new(format!("{t}@{}", format_position(&pos)), t.clone(), tgt));
            }
        }
    }
    Ars::new(objects, steps)
}

/// Parses `lhs -> rhs`.
pub fn parse_rewrite_rule(s: &str) -> Result<(Scheme, Scheme), crate::term::ParseError> {
    let (l, r) = s.split_once("->").ok_or_else(|| crate::term::ParseError {
        offset: 0,
        message: "expected `lhs -> rhs`".to_string(),
    })?;
    Ok((l.parse()?, r.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn fx() -> Ars {
        let (l, r) = parse_rewrite_rule("f(?x) -> ?x").unwrap();
        trs_step_expansion(&Signature::parse(["a/0", "f/1"]).unwrap(), &l, &r, 3).unwrap()
    }

    #[test]
    fn two_redexes_one_pair() {
        let ars = fx();
        let between = steps_between(&ars, &t("f(f(a))"), &t("f(a)")).unwrap();
        let ids: Vec<&str> = between.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["f(f(a))@1", "f(f(a))@ε"]);
        assert_eq!(ars.step_count(), 3);
        assert_eq!(induced_relation(&ars).len(), 2);
    }

    #[test]
    fn parallel_steps_collapse() {
        let ars = Ars::new(
            [t("a"), t("b"), t("c")],
            [
                ArsStep::new("s1", t("a"), t("b")),
                ArsStep::new("s2", t("a"), t("b")),
                ArsStep::new("s3", t("b"), t("c")),
            ],
        )
        .unwrap();
        assert_eq!(induced_relation(&ars), [(t("a"), t("b")), (t("b"), t("c"))].into());
    }

    #[test]
    fn reachability() {
        let ars = fx();
        assert_eq!(reachable(&ars, &t("a"), 0).unwrap(), [t("a")].into());
        assert_eq!(reachable(&ars, &t("f(f(a))"), 2).unwrap(), [t("a"), t("f(a)"), t("f(f(a))")].into());
        assert!(matches!(reachable(&ars, &t("b"), 1), Err(ArsError::UnknownObject(_))));
    }

    #[test]
    fn fresh_rhs_variable_is_rejected() {
        let (l, r) = parse_rewrite_rule("f(?x) -> ?y").unwrap();
        let sig = Signature::parse(["a/0", "f/1"]).unwrap();
        assert_eq!(trs_step_expansion(&sig, &l, &r, 3), Err(ArsError::IllFormedRule("y".into())));
    }
}
