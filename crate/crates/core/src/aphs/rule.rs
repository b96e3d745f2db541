//! Unnamed rules: sets of first-class instances with premise and
//! conclusion projections.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::Universe;
use crate::term::{MetaVar, Scheme, Substitution, Term};

/// Identifier of an instance, unique within its rule.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstanceId(Arc<str>);

impl InstanceId {
    pub fn new(id: impl Into<Arc<str>>) -> Self {
        InstanceId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for InstanceId {
    fn from(s: &str) -> Self {
        InstanceId::new(s)
    }
}

/// One inference step: a premise sequence and a conclusion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instance {
    pub id: InstanceId,
    pub prem: Vec<Term>,
    pub concl: Term,
}

impl Instance {
    pub fn new(id: impl Into<InstanceId>, prem: Vec<Term>, concl: Term) -> Self {
        Instance { id: id.into(), prem, concl }
    }

    pub fn arity(&self) -> usize {
        self.prem.len()
    }

    /// The `i`-th premise, counting from 1.
    pub fn premise(&self, i: usize) -> Option<&Term> {
        i.checked_sub(1).and_then(|i| self.prem.get(i))
    }

    /// The premises as a set.
    pub fn premise_set(&self) -> BTreeSet<Term> {
        self.prem.iter().cloned().collect()
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Term> {
        self.prem.iter().chain(std::iter::once(&self.concl))
    }

    pub fn within(&self, universe: &Universe) -> bool {
        self.formulas().all(|f| universe.contains(f))
    }

    /// Same premises and conclusion, regardless of id.
    pub fn same_shape(&self, other: &Instance) -> bool {
        self.prem == other.prem && self.concl == other.concl
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prem: Vec<String> = self.prem.iter().map(|p| p.to_string()).collect();
        write!(f, "{}: ⟨{}⟩ / {}", self.id, prem.join(", "), self.concl)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("instance id `{0}` used twice")]
    DuplicateInstanceId(InstanceId),
}

/// The facts known during forward chaining, indexed by head symbol.
#[derive(Clone, Debug, Default)]
pub struct FactSet {
    set: HashSet<Term>,
    by_head: HashMap<Arc<str>, Vec<Term>>,
    by_first: HashMap<(Arc<str>, Term), Vec<Term>>,
    order: Vec<Term>,
}

impl FactSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `false` if the fact was already present.
    pub fn insert(&mut self, t: Term) -> bool {
        if !self.set.insert(t.clone()) {
            return false;
        }
        self.by_head.entry(t.head().into()).or_default().push(t.clone());
        if let Some(first) = t.args().first() {
            self.by_first.entry((t.head().into(), first.clone())).or_default().push(t.clone());
        }
        self.order.push(t);
        true
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.set.contains(t)
    }

    pub fn with_head(&self, head: &str) -> &[Term] {
        self.by_head.get(head).map_or(&[], Vec::as_slice)
    }

    /// Facts with the given head whose first argument is `first`.
    pub fn with_head_and_first(&self, head: &str, first: &Term) -> &[Term] {
        self.by_first.get(&(Arc::from(head), first.clone())).map_or(&[], Vec::as_slice)
    }

    /// Facts in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.order.iter()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// A rule whose instances are produced on demand.
///
/// Every method must be deterministic, and every returned instance must
/// satisfy `self.instance(&i.id) == Some(i)`.
pub trait InstanceSource: fmt::Debug + Send + Sync {
    /// Short human-readable description.
    fn describe(&self) -> String;

    /// Membership by identity.
    fn instance(&self, id: &InstanceId) -> Option<Instance>;

    /// Instances within the universe whose conclusion is `goal`.
    fn concluding(&self, goal: &Term, universe: &Universe) -> Vec<Instance>;

    /// Instances within the universe whose premises all lie in `known` and
    /// at least one lies in `delta`; 0-premise instances only when
    /// `first_round`.
    fn firing(&self, known: &FactSet, delta: &[Term], first_round: bool, universe: &Universe) -> Vec<Instance>;

    /// All instances within the universe.
    fn enumerate(&self, universe: &Universe) -> Vec<Instance>;
}

/// An explicit finite list of instances.
#[derive(Clone, Debug)]
pub struct ExplicitRule {
    instances: Vec<Instance>,
    by_id: BTreeMap<InstanceId, usize>,
    by_concl: HashMap<Term, Vec<usize>>,
}

impl ExplicitRule {
    pub fn new(instances: Vec<Instance>) -> Result<Self, RuleError> {
        let mut by_id = BTreeMap::new();
        let mut by_concl: HashMap<Term, Vec<usize>> = HashMap::new();
        for (i, inst) in instances.iter().enumerate() {
            if by_id.insert(inst.id.clone(), i).is_some() {
                return Err(RuleError::DuplicateInstanceId(inst.id.clone()));
            }
            by_concl.entry(inst.concl.clone()).or_default().push(i);
        }
        Ok(ExplicitRule { instances, by_id, by_concl })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }
}

/// Premise schemes and a conclusion scheme sharing meta-variables.
/// Instances are identified by the canonical print of their substitution.
#[derive(Clone, Debug)]
pub struct SchemeRule {
    prem: Vec<Scheme>,
    concl: Scheme,
    vars: Vec<MetaVar>,
}

impl SchemeRule {
    pub fn new(prem: Vec<Scheme>, concl: Scheme) -> Self {
        let mut vars: BTreeSet<MetaVar> = concl.vars();
        for p in &prem {
            vars.extend(p.vars());
        }
        SchemeRule { prem, concl, vars: vars.into_iter().collect() }
    }

    pub fn premises(&self) -> &[Scheme] {
        &self.prem
    }

    pub fn conclusion(&self) -> &Scheme {
        &self.concl
    }

    pub fn vars(&self) -> &[MetaVar] {
        &self.vars
    }

    fn schemes(&self) -> Vec<&Scheme> {
        self.prem.iter().chain(std::iter::once(&self.concl)).collect()
    }

    fn build(&self, sigma: &Substitution) -> Option<Instance> {
        let prem = self.prem.iter().map(|p| p.apply(sigma).ok()).collect::<Option<Vec<_>>>()?;
        let concl = self.concl.apply(sigma).ok()?;
        Some(Instance::new(InstanceId::new(sigma.to_string()), prem, concl))
    }

    fn unbound(&self, sigma: &Substitution) -> Vec<MetaVar> {
        self.vars.iter().filter(|v| !sigma.contains(v)).cloned().collect()
    }

    fn complete(&self, base: &Substitution, universe: &Universe, out: &mut BTreeMap<InstanceId, Instance>) {
        let free = self.unbound(base);
        for sigma in universe.extensions(&free, base, &self.schemes()) {
            if let Some(inst) = self.build(&sigma) {
                out.entry(inst.id.clone()).or_insert(inst);
            }
        }
    }

    fn instance(&self, id: &InstanceId) -> Option<Instance> {
        let sigma = Substitution::parse(id.as_str()).ok()?;
        let domain: Vec<&MetaVar> = sigma.iter().map(|(v, _)| v).collect();
        if domain.len() != self.vars.len() || domain.iter().zip(&self.vars).any(|(a, b)| *a != b) {
            return None;
        }
        self.build(&sigma)
    }

    fn concluding(&self, goal: &Term, universe: &Universe) -> Vec<Instance> {
        let Some(base) = crate::term::match_scheme(&self.concl, goal) else {
            return Vec::new();
        };
        let mut out = BTreeMap::new();
        self.complete(&base, universe, &mut out);
        out.into_values().collect()
    }

    fn firing(&self, known: &FactSet, delta: &[Term], first_round: bool, universe: &Universe) -> Vec<Instance> {
        let mut out = BTreeMap::new();
        if self.prem.is_empty() {
            if first_round {
                self.complete(&Substitution::new(), universe, &mut out);
            }
            return out.into_values().collect();
        }
        for (i, p) in self.prem.iter().enumerate() {
            for d in delta {
                let mut sigma = Substitution::new();
                if !p.match_into(d, &mut sigma) {
                    continue;
                }
                let others: Vec<&Scheme> = self
                    .prem
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, q)| q)
                    .collect();
                self.join(&others, sigma, known, universe, &mut out);
            }
        }
        out.into_values().collect()
    }

    fn join(
        &self,
        rest: &[&Scheme],
        sigma: Substitution,
        known: &FactSet,
        universe: &Universe,
        out: &mut BTreeMap<InstanceId, Instance>,
    ) {
        let Some((p, tail)) = rest.split_first() else {
            self.complete(&sigma, universe, out);
            return;
        };
        if let Ok(t) = p.apply(&sigma) {
            if known.contains(&t) {
                self.join(tail, sigma, known, universe, out);
            }
            return;
        }
        let candidates: Box<dyn Iterator<Item = &Term>> = match p {
            Scheme::App(h, args) => match args.first().and_then(|a| a.apply(&sigma).ok()) {
                Some(first) => Box::new(known.with_head_and_first(h, &first).iter()),
                None => Box::new(known.with_head(h).iter()),
            },
            Scheme::Var(_) => Box::new(known.iter()),
        };
        for fact in candidates {
            let mut ext = sigma.clone();
            if p.match_into(fact, &mut ext) {
                self.join(tail, ext, known, universe, out);
            }
        }
    }

    fn enumerate(&self, universe: &Universe) -> Vec<Instance> {
        let mut out = BTreeMap::new();
        self.complete(&Substitution::new(), universe, &mut out);
        out.into_values().collect()
    }
}

impl fmt::Display for SchemeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prem: Vec<String> = self.prem.iter().map(|p| p.to_string()).collect();
        write!(f, "{} / {}", prem.join(", "), self.concl)
    }
}

/// How a rule's instance set is represented.
#[derive(Clone, Debug)]
pub enum RuleBacking {
    Explicit(ExplicitRule),
    Scheme(SchemeRule),
    Predicate(Arc<dyn InstanceSource>),
}

/// All instances of a rule inside a universe.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub instances: Vec<Instance>,
    /// `true` when these are all instances of the rule, not only the
    /// fragment inside the universe.
    pub complete: bool,
}

/// An unnamed rule: a set of instances with premise and conclusion
/// functions. Cloning shares the underlying instance set, so a rule
/// registered under two names is the same rule.
#[derive(Clone, Debug)]
pub struct UnnamedRule(Arc<RuleBacking>);

impl UnnamedRule {
    pub fn explicit(instances: Vec<Instance>) -> Result<Self, RuleError> {
        Ok(UnnamedRule(Arc::new(RuleBacking::Explicit(ExplicitRule::new(instances)?))))
    }

    pub fn scheme(prem: Vec<Scheme>, concl: Scheme) -> Self {
        UnnamedRule(Arc::new(RuleBacking::Scheme(SchemeRule::new(prem, concl))))
    }

    pub fn predicate(source: Arc<dyn InstanceSource>) -> Self {
        UnnamedRule(Arc::new(RuleBacking::Predicate(source)))
    }

    pub fn backing(&self) -> &RuleBacking {
        &self.0
    }

    /// Whether both handles denote the same rule object.
    pub fn same_rule(&self, other: &UnnamedRule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn is_explicit(&self) -> bool {
        matches!(*self.0, RuleBacking::Explicit(_))
    }

    pub fn instance(&self, id: &InstanceId) -> Option<Instance> {
        match &*self.0 {
            RuleBacking::Explicit(r) => r.by_id.get(id).map(|&i| r.instances[i].clone()),
            RuleBacking::Scheme(r) => r.instance(id),
            RuleBacking::Predicate(s) => s.instance(id),
        }
    }

    /// Whether `inst` (id, premises and conclusion) is an instance of this rule.
    pub fn contains(&self, inst: &Instance) -> bool {
        self.instance(&inst.id).is_some_and(|i| i.same_shape(inst))
    }

    pub fn concluding(&self, goal: &Term, universe: &Universe) -> Vec<Instance> {
        match &*self.0 {
            RuleBacking::Explicit(r) => r
                .by_concl
                .get(goal)
                .into_iter()
                .flatten()
                .map(|&i| &r.instances[i])
                .filter(|i| i.within(universe))
                .cloned()
                .collect(),
            RuleBacking::Scheme(r) => r.concluding(goal, universe),
            RuleBacking::Predicate(s) => s.concluding(goal, universe),
        }
    }

    pub fn firing(&self, known: &FactSet, delta: &[Term], first_round: bool, universe: &Universe) -> Vec<Instance> {
        match &*self.0 {
            RuleBacking::Explicit(r) => {
                let delta: HashSet<&Term> = delta.iter().collect();
                r.instances
                    .iter()
                    .filter(|i| i.within(universe))
                    .filter(|i| {
                        if i.prem.is_empty() {
                            first_round
                        } else {
                            i.prem.iter().all(|p| known.contains(p)) && i.prem.iter().any(|p| delta.contains(p))
                        }
                    })
                    .cloned()
                    .collect()
            }
            RuleBacking::Scheme(r) => r.firing(known, delta, first_round, universe),
            RuleBacking::Predicate(s) => s.firing(known, delta, first_round, universe),
        }
    }

    /// The instances inside `universe`, flagged complete only for explicit
    /// rules lying entirely inside it.
    pub fn enumerate(&self, universe: &Universe) -> Enumeration {
        match &*self.0 {
            RuleBacking::Explicit(r) => {
                let instances: Vec<Instance> = r.instances.iter().filter(|i| i.within(universe)).cloned().collect();
                let complete = instances.len() == r.instances.len();
                Enumeration { instances, complete }
            }
            RuleBacking::Scheme(r) => Enumeration { instances: r.enumerate(universe), complete: false },
            RuleBacking::Predicate(s) => Enumeration { instances: s.enumerate(universe), complete: false },
        }
    }

    pub fn describe(&self) -> String {
        match &*self.0 {
            RuleBacking::Explicit(r) => {
                let n = r.instances.len();
                format!("explicit rule with {n} instance{}", if n == 1 { "" } else { "s" })
            }
            RuleBacking::Scheme(r) => format!("scheme {r}"),
            RuleBacking::Predicate(s) => s.describe(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Signature;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn mp() -> UnnamedRule {
        UnnamedRule::scheme(
            vec!["imp(?A,?B)".parse().unwrap(), "?A".parse().unwrap()],
            "?B".parse().unwrap(),
        )
    }

    fn universe(n: usize) -> Universe {
        Universe::new(Signature::parse(["a/0", "b/0", "imp/2"]).unwrap(), n)
    }

    #[test]
    fn explicit_rejects_duplicate_ids() {
        let i = Instance::new("x", vec![t("a")], t("b"));
        assert!(matches!(
            UnnamedRule::explicit(vec![i.clone(), i]),
            Err(RuleError::DuplicateInstanceId(_))
        ));
    }

    #[test]
    fn arity_and_premise_projection() {
        let i = Instance::new("x", vec![t("a"), t("imp(a,b)")], t("b"));
        assert_eq!(i.arity(), 2);
        assert_eq!(i.premise(1), Some(&t("a")));
        assert_eq!(i.premise(2), Some(&t("imp(a,b)")));
        assert_eq!(i.premise(0), None);
        assert_eq!(i.premise(3), None);
    }

    #[test]
    fn scheme_instance_by_id() {
        let r = mp();
        let inst = r.instance(&InstanceId::new("{A=a;B=b}")).unwrap();
        assert_eq!(inst.prem, vec![t("imp(a,b)"), t("a")]);
        assert_eq!(inst.concl, t("b"));
        assert!(r.instance(&InstanceId::new("{A=a}")).is_none());
        assert!(r.contains(&inst));
    }

    #[test]
    fn scheme_concluding_enumerates_cut_formulas() {
        let r = mp();
        let u = universe(3);
        // imp(A,b) must fit in three nodes, so A is a or b
        let got: Vec<String> = r.concluding(&t("b"), &u).iter().map(|i| i.id.to_string()).collect();
        assert_eq!(got, ["{A=a;B=b}", "{A=b;B=b}"]);
    }

    #[test]
    fn scheme_firing_joins_premises() {
        let r = mp();
        let u = universe(5);
        let mut known = FactSet::new();
        known.insert(t("a"));
        known.insert(t("imp(a,b)"));
        let fired = r.firing(&known, &[t("imp(a,b)")], false, &u);
        assert_eq!(fired.len(), 1);
        assert_eq!(fired[0].concl, t("b"));
        let fired = r.firing(&known, &[t("a")], false, &u);
        assert_eq!(fired.len(), 1);
    }
}
