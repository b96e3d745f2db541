//! Infinite natural-deduction rule families, produced directly as
//! instances over encoded sequents.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::sequent::{context_from_term, context_term, Context, MarkedAssumption, Sequent, MARK, SEQ};
use crate::aphs::{FactSet, Instance, InstanceId, InstanceSource, Universe};
use crate::term::{MetaVar, Signature, Substitution, Term};

/// The built-in families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyKind {
    /// From Γ ⇒ B infer Γ∖{A^m} ⇒ imp(A,B); with no marker the
    /// discharge is vacuous and Γ is kept.
    ImpIntro,
    /// From Γ1 ⇒ imp(A,B) and Γ2 ⇒ A infer Γ1∪Γ2 ⇒ B.
    ImpElim,
    /// From Γ ⇒ A infer Γ∪{B^m} ⇒ A.
    Weakening,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::ImpIntro => "imp-intro",
            FamilyKind::ImpElim => "imp-elim",
            FamilyKind::Weakening => "weakening",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [FamilyKind::ImpIntro, FamilyKind::ImpElim, FamilyKind::Weakening]
            .into_iter()
            .find(|k| k.name() == s)
    }

    pub fn uses_implication(self) -> bool {
        !matches!(self, FamilyKind::Weakening)
    }
}

/// A family instantiated over an object signature and marker pool.
#[derive(Debug)]
pub struct Family {
    kind: FamilyKind,
    imp: String,
    objects: Signature,
    markers: Arc<Vec<String>>,
    /// Unbounded object universe, enumerated lazily by size.
    object_terms: Universe,
}

fn var(name: &str) -> MetaVar {
    MetaVar::new(name)
}

fn seq(ctx: &Context, a: &Term) -> Term {
    Sequent::new(ctx.clone(), a.clone()).to_term()
}

impl Family {
    pub fn new(kind: FamilyKind, imp: &str, objects: Signature, markers: Arc<Vec<String>>) -> Self {
        let object_terms = Universe::new(objects.clone(), usize::MAX);
        Family { kind, imp: imp.to_string(), objects, markers, object_terms }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    fn imp(&self, a: &Term, b: &Term) -> Term {
        Term::app(self.imp.as_str(), vec![a.clone(), b.clone()])
    }

    fn split_imp<'t>(&self, t: &'t Term) -> Option<(&'t Term, &'t Term)> {
        match t.args() {
            [a, b] if t.head() == self.imp => Some((a, b)),
            _ => None,
        }
    }

    fn object_ok(&self, t: &Term) -> bool {
        self.objects.accepts(t)
    }

    fn ctx_ok(&self, ctx: &Context) -> bool {
        ctx.iter().all(|m| self.object_ok(&m.formula) && self.markers.contains(&m.marker))
    }

    /// Object terms of at most `max` nodes.
    fn objects_up_to(&self, max: usize) -> Vec<Term> {
        let (terms, len) = self.object_terms.terms_up_to(max);
        terms[..len].to_vec()
    }

    fn intro(&self, a: &Term, b: &Term, g: &Context, m: Option<&str>) -> Option<Instance> {
        let mut sigma = Substitution::new();
        sigma.insert(var("A"), a.clone());
        sigma.insert(var("B"), b.clone());
        sigma.insert(var("G"), context_term(g));
        let mut concl_ctx = g.clone();
        if let Some(m) = m {
            let ma = MarkedAssumption::new(a.clone(), m);
            if !concl_ctx.remove(&ma) {
                return None;
            }
            sigma.insert(var("M"), Term::constant(m));
        }
        Some(Instance::new(InstanceId::new(sigma.to_string()), vec![seq(g, b)], seq(&concl_ctx, &self.imp(a, b))))
    }

    fn elim(&self, a: &Term, b: &Term, l: &Context, r: &Context) -> Instance {
        let mut sigma = Substitution::new();
        sigma.insert(var("A"), a.clone());
        sigma.insert(var("B"), b.clone());
        sigma.insert(var("L"), context_term(l));
        sigma.insert(var("R"), context_term(r));
        let concl: Context = l.union(r).cloned().collect();
        Instance::new(InstanceId::new(sigma.to_string()), vec![seq(l, &self.imp(a, b)), seq(r, a)], seq(&concl, b))
    }

    fn weaken(&self, a: &Term, g: &Context, w: &MarkedAssumption) -> Option<Instance> {
        if g.contains(w) {
            return None;
        }
        let mut sigma = Substitution::new();
        sigma.insert(var("A"), a.clone());
        sigma.insert(var("G"), context_term(g));
        sigma.insert(var("W"), w.to_term());
        let mut concl = g.clone();
        concl.insert(w.clone());
        Some(Instance::new(InstanceId::new(sigma.to_string()), vec![seq(g, a)], seq(&concl, a)))
    }

    fn push(out: &mut BTreeMap<InstanceId, Instance>, inst: Option<Instance>, u: &Universe) {
        if let Some(i) = inst {
            if i.within(u) {
                out.entry(i.id.clone()).or_insert(i);
            }
        }
    }

    fn concluding_sequent(&self, goal: &Sequent, u: &Universe, out: &mut BTreeMap<InstanceId, Instance>) {
        let max = u.max_size();
        match self.kind {
            FamilyKind::ImpIntro => {
                let Some((a, b)) = self.split_imp(&goal.succedent) else { return };
                Self::push(out, self.intro(a, b, &goal.antecedent, None), u);
                for m in self.markers.iter() {
                    let ma = MarkedAssumption::new(a.clone(), m.as_str());
                    if goal.antecedent.contains(&ma) {
                        continue;
                    }
                    let mut g = goal.antecedent.clone();
                    g.insert(ma);
                    Self::push(out, self.intro(a, b, &g, Some(m)), u);
                }
            }
            FamilyKind::ImpElim => {
                let b = &goal.succedent;
                let ctx: Vec<&MarkedAssumption> = goal.antecedent.iter().collect();
                let splits = 3usize.pow(ctx.len() as u32);
                // the first premise alone is 3 + |A| + |B| nodes
                let room = max.saturating_sub(3 + b.size());
                for a in &self.objects_up_to(room) {
                    for code in 0..splits {
                        let (mut l, mut r) = (Context::new(), Context::new());
                        let mut c = code;
                        for m in &ctx {
                            match c % 3 {
                                0 => l.insert((*m).clone()),
                                1 => r.insert((*m).clone()),
                                _ => l.insert((*m).clone()) | r.insert((*m).clone()),
                            };
                            c /= 3;
                        }
                        Self::push(out, Some(self.elim(a, b, &l, &r)), u);
                    }
                }
            }
            FamilyKind::Weakening => {
                for w in &goal.antecedent {
                    let mut g = goal.antecedent.clone();
                    g.remove(w);
                    Self::push(out, self.weaken(&goal.succedent, &g, w), u);
                }
            }
        }
    }
}

impl InstanceSource for Family {
    fn describe(&self) -> String {
        if self.kind.uses_implication() {
            format!("{} family over {}", self.kind.name(), self.imp)
        } else {
            format!("{} family", self.kind.name())
        }
    }

    fn instance(&self, id: &InstanceId) -> Option<Instance> {
        let sigma = Substitution::parse(id.as_str()).ok()?;
        let get = |v: &str| sigma.get(&var(v));
        let ctx = |v: &str| get(v).and_then(context_from_term).filter(|c| self.ctx_ok(c));
        let keys: Vec<&str> = sigma.iter().map(|(v, _)| v.name()).collect();
        let inst = match self.kind {
            FamilyKind::ImpIntro => {
                let (a, b, g) = (get("A")?, get("B")?, ctx("G")?);
                let m = match get("M") {
                    Some(m) if m.args().is_empty() && self.markers.iter().any(|x| x == m.head()) => Some(m.head()),
                    Some(_) => return None,
                    None => None,
                };
                let expected: &[&str] = if m.is_some() { &["A", "B", "G", "M"] } else { &["A", "B", "G"] };
                if keys != expected || !self.object_ok(a) || !self.object_ok(b) {
                    return None;
                }
                self.intro(a, b, &g, m)?
            }
            FamilyKind::ImpElim => {
                let (a, b, l, r) = (get("A")?, get("B")?, ctx("L")?, ctx("R")?);
                if keys != ["A", "B", "L", "R"] || !self.object_ok(a) || !self.object_ok(b) {
                    return None;
                }
                self.elim(a, b, &l, &r)
            }
            FamilyKind::Weakening => {
                let (a, g) = (get("A")?, ctx("G")?);
                let w = match (get("W")?.head(), get("W")?.args()) {
                    (MARK, [b, m]) if m.args().is_empty() => MarkedAssumption::new(b.clone(), m.head()),
                    _ => return None,
                };
                if !self.ctx_ok(&Context::from([w.clone()])) {
                    return None;
                }
                if keys != ["A", "G", "W"] || !self.object_ok(a) {
                    return None;
                }
                self.weaken(a, &g, &w)?
            }
        };
        (inst.id == *id).then_some(inst)
    }

    fn concluding(&self, goal: &Term, universe: &Universe) -> Vec<Instance> {
        let Some(g) = Sequent::from_term(goal) else { return Vec::new() };
        let mut out = BTreeMap::new();
        self.concluding_sequent(&g, universe, &mut out);
        out.into_values().collect()
    }

    fn firing(&self, known: &FactSet, delta: &[Term], _first_round: bool, universe: &Universe) -> Vec<Instance> {
        let max = universe.max_size();
        let mut out = BTreeMap::new();
        let delta: Vec<Sequent> = delta.iter().filter_map(Sequent::from_term).collect();
        match self.kind {
            FamilyKind::ImpIntro => {
                for d in &delta {
                    // Γ ⇒ imp(A,B) adds 1 + |A| nodes to Γ ⇒ B
                    let room = max.saturating_sub(d.encoded_size() + 1);
                    for a in &self.objects_up_to(room) {
                        Self::push(&mut out, self.intro(a, &d.succedent, &d.antecedent, None), universe);
                    }
                    for ma in &d.antecedent {
                        Self::push(&mut out, self.intro(&ma.formula, &d.succedent, &d.antecedent, Some(&ma.marker)), universe);
                    }
                }
            }
            FamilyKind::ImpElim => {
                let facts: Vec<Sequent> = known.with_head(SEQ).iter().filter_map(Sequent::from_term).collect();
                let mut by_succ: HashMap<&Term, Vec<&Context>> = HashMap::new();
                let mut by_antecedent_of_imp: HashMap<&Term, Vec<(&Context, &Term)>> = HashMap::new();
                for f in &facts {
                    by_succ.entry(&f.succedent).or_default().push(&f.antecedent);
                    if let Some((a, b)) = self.split_imp(&f.succedent) {
                        by_antecedent_of_imp.entry(a).or_default().push((&f.antecedent, b));
                    }
                }
                for d in &delta {
                    if let Some((a, b)) = self.split_imp(&d.succedent) {
                        for r in by_succ.get(a).into_iter().flatten() {
                            Self::push(&mut out, Some(self.elim(a, b, &d.antecedent, r)), universe);
                        }
                    }
                    for (l, b) in by_antecedent_of_imp.get(&d.succedent).into_iter().flatten() {
                        Self::push(&mut out, Some(self.elim(&d.succedent, b, l, &d.antecedent)), universe);
                    }
                }
            }
            FamilyKind::Weakening => {
                for d in &delta {
                    let room = max.saturating_sub(d.encoded_size() + 3);
                    for b in &self.objects_up_to(room) {
                        for m in self.markers.iter() {
                            let w = MarkedAssumption::new(b.clone(), m.as_str());
                            Self::push(&mut out, self.weaken(&d.succedent, &d.antecedent, &w), universe);
                        }
                    }
                }
            }
        }
        out.into_values().collect()
    }

    fn enumerate(&self, universe: &Universe) -> Vec<Instance> {
        let mut out = BTreeMap::new();
        for t in universe.terms().iter() {
            if let Some(g) = Sequent::from_term(t) {
                self.concluding_sequent(&g, universe, &mut out);
            }
        }
        out.into_values().collect()
    }
}
