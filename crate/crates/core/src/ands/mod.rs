//! Abstract natural-deduction systems: rule instances carry the marked
//! assumptions present over each premise and the ones they discharge.
//!
//! Such a system is analysed through its encoding as a pure Hilbert system
//! over sequents `Γ ⇒ A`, where Γ is a finite set of marked assumptions.
//! An instance with premises A1..An over present sets Γ1..Γn, discharged
//! set D and conclusion C becomes `Γ1 ⇒ A1, .., Γn ⇒ An / (∪Γi)∖D ⇒ C`.

mod families;
mod sequent;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use families::{Family, FamilyKind};
pub use sequent::{
    context_from_term, context_term, display_formula, Context, MarkedAssumption, Sequent, SequentSpace, CONS, MARK,
    NIL, RESERVED, SEQ,
};

use crate::analysis::{classify_rule_in, RuleStatus};
use crate::aphs::{
    Aphs, Budget, Instance, InstanceId, NamedAxiom, NamedRule, UnnamedRule, Universe, ValidationReport, Violation,
};
use crate::term::{MetaVar, Signature, Substitution, Symbol, Term, TermError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AndsError {
    #[error("instance `{id}`: {prem} premises but {pmassm} present-assumption sets")]
    ArityMismatch { id: InstanceId, prem: usize, pmassm: usize },
    #[error("instance `{id}` discharges `{assumption}`, which is not present over any premise")]
    DischargeNotPresent { id: InstanceId, assumption: MarkedAssumption },
    #[error("duplicate instance id `{0}`")]
    DuplicateInstanceId(InstanceId),
    #[error("symbol `{0}` is reserved for the sequent encoding")]
    ReservedSymbol(String),
    #[error("marker `{0}` collides with a symbol or a fresh marker")]
    MarkerCollision(String),
    #[error("rule `{rule}` needs a binary symbol `{imp}` in the signature")]
    MissingImplication { rule: String, imp: String },
    #[error("invalid system:\n{0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// A natural-deduction rule instance.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AndsInstance {
    pub id: InstanceId,
    pub prem: Vec<Term>,
    pub concl: Term,
    /// Marked assumptions present over each premise.
    pub pmassm: Vec<Context>,
    /// Marked assumptions the instance discharges.
    pub dmassm: Context,
}

impl AndsInstance {
    /// Checks that there is one present set per premise and that every
    /// discharged assumption is present over some premise.
    pub fn new(
        id: impl Into<InstanceId>,
        prem: Vec<Term>,
        concl: Term,
        pmassm: Vec<Context>,
        dmassm: Context,
    ) -> Result<Self, AndsError> {
        let id = id.into();
        if prem.len() != pmassm.len() {
            return Err(AndsError::ArityMismatch { id, prem: prem.len(), pmassm: pmassm.len() });
        }
        let present: Context = pmassm.iter().flatten().cloned().collect();
        if let Some(m) = dmassm.iter().find(|m| !present.contains(m)) {
            return Err(AndsError::DischargeNotPresent { id, assumption: m.clone() });
        }
        Ok(AndsInstance { id, prem, concl, pmassm, dmassm })
    }

    pub fn premise_sequents(&self) -> Vec<Sequent> {
        self.prem.iter().zip(&self.pmassm).map(|(a, g)| Sequent::new(g.clone(), a.clone())).collect()
    }

    /// `(∪ pmassm) ∖ dmassm ⇒ concl`.
    pub fn conclusion_sequent(&self) -> Sequent {
        let ctx = self.pmassm.iter().flatten().filter(|m| !self.dmassm.contains(m)).cloned().collect();
        Sequent::new(ctx, self.concl.clone())
    }

    pub fn markers(&self) -> BTreeSet<String> {
        self.pmassm.iter().flatten().chain(&self.dmassm).map(|m| m.marker.clone()).collect()
    }

    fn formulas(&self) -> impl Iterator<Item = &Term> {
        self.prem
            .iter()
            .chain(std::iter::once(&self.concl))
            .chain(self.pmassm.iter().flatten().map(|m| &m.formula))
    }
}

impl fmt::Display for AndsInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prem: Vec<String> = self.premise_sequents().iter().map(|s| s.to_string()).collect();
        write!(f, "{}: {} / {}", self.id, prem.join("; "), self.conclusion_sequent())
    }
}

/// The sequent-style instance of the encoded system.
pub fn encode_instance(i: &AndsInstance) -> Instance {
    Instance::new(
        i.id.clone(),
        i.premise_sequents().iter().map(Sequent::to_term).collect(),
        i.conclusion_sequent().to_term(),
    )
}

/// A natural-deduction rule: an explicit instance list or a built-in family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AndsRule {
    Explicit(Vec<AndsInstance>),
    Family { kind: FamilyKind, imp: String },
}

impl AndsRule {
    pub fn explicit(instances: Vec<AndsInstance>) -> Result<Self, AndsError> {
        let mut seen = BTreeSet::new();
        if let Some(i) = instances.iter().find(|i| !seen.insert(i.id.clone())) {
            return Err(AndsError::DuplicateInstanceId(i.id.clone()));
        }
        Ok(AndsRule::Explicit(instances))
    }

    pub fn family(kind: FamilyKind, imp: impl Into<String>) -> Self {
        AndsRule::Family { kind, imp: imp.into() }
    }

    pub fn markers(&self) -> BTreeSet<String> {
        match self {
            AndsRule::Explicit(is) => is.iter().flat_map(AndsInstance::markers).collect(),
            AndsRule::Family { .. } => BTreeSet::new(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AndsRule::Explicit(is) => format!("{} explicit instance{}", is.len(), if is.len() == 1 { "" } else { "s" }),
            AndsRule::Family { kind, imp } if kind.uses_implication() => format!("{} over {imp}", kind.name()),
            AndsRule::Family { kind, .. } => kind.name().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedAndsRule {
    pub name: String,
    pub rule: AndsRule,
}

impl NamedAndsRule {
    pub fn new(name: impl Into<String>, rule: AndsRule) -> Self {
        NamedAndsRule { name: name.into(), rule }
    }
}

/// An abstract natural-deduction system over object formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ands {
    pub signature: Signature,
    pub axioms: Vec<NamedAxiom>,
    pub rules: Vec<NamedAndsRule>,
}

impl Ands {
    pub fn new(signature: Signature, axioms: Vec<NamedAxiom>, rules: Vec<NamedAndsRule>) -> Self {
        Ands { signature, axioms, rules }
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.axioms.iter().map(|a| a.name.clone()).chain(self.rules.iter().map(|r| r.name.clone())).collect()
    }

    /// Markers occurring in the system's explicit instances.
    pub fn markers(&self) -> BTreeSet<String> {
        self.rules.iter().flat_map(|r| r.rule.markers()).collect()
    }

    pub fn has_family(&self, kind: FamilyKind) -> bool {
        self.rules.iter().any(|r| matches!(r.rule, AndsRule::Family { kind: k, .. } if k == kind))
    }
}

/// Naming constraints, object well-formedness and reserved symbols.
pub fn validate_ands(n: &Ands) -> ValidationReport {
    let mut violations = Vec::new();
    let axiom_names: BTreeSet<&str> = n.axioms.iter().map(|a| a.name.as_str()).collect();
    let mut seen = BTreeSet::new();
    for r in &n.rules {
        if axiom_names.contains(r.name.as_str()) {
            violations.push(Violation::AxiomRuleNameClash { name: r.name.clone() });
        }
        if !seen.insert(r.name.as_str()) {
            violations.push(Violation::DuplicateRuleName { name: r.name.clone() });
        }
    }
    for a in &n.axioms {
        if let Err(e) = a.formula.check(&n.signature) {
            violations.push(Violation::MalformedAxiom { name: a.name.clone(), reason: e.to_string() });
        }
    }
    for r in &n.rules {
        let reason = match &r.rule {
            AndsRule::Explicit(is) => is.iter().find_map(|i| {
                i.formulas()
                    .find_map(|f| n.signature.check(f).err())
                    .map(|e| format!("instance `{}`: {e}", i.id))
            }),
            AndsRule::Family { kind, imp } if kind.uses_implication() && n.signature.arity(imp) != Some(2) => {
                Some(format!("the {} family needs a binary symbol `{imp}`", kind.name()))
            }
            AndsRule::Family { .. } => None,
        };
        if let Some(reason) = reason {
            violations.push(Violation::MalformedRule { name: r.name.clone(), reason });
        }
    }
    violations.sort();
    violations.dedup();
    ValidationReport { violations }
}

/// User markers of `n` and `extra` rules followed by `fresh` new markers
/// `m1..`. Markers must not clash with object or reserved symbols, and
/// user markers must not clash with the fresh ones.
pub fn marker_pool(n: &Ands, extra: &[&AndsRule], fresh: usize) -> Result<Vec<String>, AndsError> {
    let mut user = n.markers();
    for r in extra {
        user.extend(r.markers());
    }
    let fresh: Vec<String> = (1..=fresh).map(|i| format!("m{i}")).collect();
    for m in user.iter().chain(&fresh) {
        if n.signature.contains_symbol(m) || RESERVED.contains(&m.as_str()) {
            return Err(AndsError::MarkerCollision(m.clone()));
        }
    }
    if let Some(m) = fresh.iter().find(|m| user.contains(*m)) {
        return Err(AndsError::MarkerCollision(m.clone()));
    }
    Ok(user.into_iter().chain(fresh).collect())
}

/// The encoding of an ANDS at a fixed size bound.
#[derive(Clone, Debug)]
pub struct Encoding {
    pub system: Aphs,
    pub markers: Arc<Vec<String>>,
    /// Name of the axiom family `{A^m} ⇒ A`.
    pub hyp_name: String,
    pub objects: Signature,
    pub max_size: usize,
}

impl Encoding {
    pub fn universe(&self) -> Universe {
        self.system.universe(self.max_size)
    }

    pub fn space(&self) -> SequentSpace {
        SequentSpace { objects: self.objects.clone(), markers: Arc::clone(&self.markers) }
    }

    pub fn encode_rule(&self, n: &Ands, r: &AndsRule) -> Result<UnnamedRule, AndsError> {
        encode_rule(n, r, &self.markers)
    }
}

fn check_reserved(sig: &Signature) -> Result<(), AndsError> {
    match RESERVED.iter().find(|s| sig.contains_symbol(s)) {
        Some(s) => Err(AndsError::ReservedSymbol(s.to_string())),
        None => Ok(()),
    }
}

pub fn encode_rule(n: &Ands, r: &AndsRule, markers: &Arc<Vec<String>>) -> Result<UnnamedRule, AndsError> {
    Ok(match r {
        AndsRule::Explicit(is) => {
            UnnamedRule::explicit(is.iter().map(encode_instance).collect()).map_err(|e| match e {
                crate::aphs::RuleError::DuplicateInstanceId(id) => AndsError::DuplicateInstanceId(id),
            })?
        }
        AndsRule::Family { kind, imp } => {
            if kind.uses_implication() && n.signature.arity(imp) != Some(2) {
                return Err(AndsError::MissingImplication { rule: kind.name().to_string(), imp: imp.clone() });
            }
            UnnamedRule::predicate(Arc::new(Family::new(*kind, imp, n.signature.clone(), Arc::clone(markers))))
        }
    })
}

/// The sequent system of `n` over `markers`, with axioms materialized up to
/// `max_size` nodes: `∅ ⇒ A` for each axiom and `{A^m} ⇒ A` for each
/// object formula and marker.
pub fn encode_system(n: &Ands, markers: Vec<String>, max_size: usize) -> Result<Encoding, AndsError> {
    let report = validate_ands(n);
    if !report.is_valid() {
        return Err(AndsError::Invalid(report));
    }
    check_reserved(&n.signature)?;
    let markers = Arc::new(markers);
    let mut sig = n.signature.clone();
    for s in [Symbol::new(SEQ, 2), Symbol::new(NIL, 0), Symbol::new(CONS, 2), Symbol::new(MARK, 2)] {
        sig = sig.with_symbol(s)?;
    }
    for m in markers.iter() {
        sig = sig.with_symbol(Symbol::new(m.as_str(), 0)).map_err(|_| AndsError::MarkerCollision(m.clone()))?;
    }
    let space = Arc::new(SequentSpace { objects: n.signature.clone(), markers: Arc::clone(&markers) });

    let objects = Universe::new(n.signature.clone(), max_size.saturating_sub(2));
    let mut axioms = Vec::new();
    for a in &n.axioms {
        let vars: Vec<MetaVar> = a.formula.vars().into_iter().collect();
        for sigma in objects.extensions(&vars, &Substitution::new(), &[&a.formula]) {
            let f = a.formula.apply(&sigma)?;
            axioms.push(NamedAxiom::ground(a.name.clone(), &Sequent::new(Context::new(), f).to_term()));
        }
    }
    let names = n.names();
    let hyp_name = std::iter::once("hyp".to_string())
        .chain((1..).map(|i| format!("hyp{i}")))
        .find(|c| !names.contains(c))
        .expect("unbounded search");
    for a in objects.terms().iter() {
        for m in markers.iter() {
            let s = Sequent::new(Context::from([MarkedAssumption::new(a.clone(), m.as_str())]), a.clone());
            if s.encoded_size() <= max_size {
                axioms.push(NamedAxiom::ground(hyp_name.clone(), &s.to_term()));
            }
        }
    }
    let rules = n
        .rules
        .iter()
        .map(|r| Ok(NamedRule::new(r.name.clone(), encode_rule(n, &r.rule, &markers)?)))
        .collect::<Result<Vec<_>, AndsError>>()?;
    Ok(Encoding {
        system: Aphs::with_space(sig, space, axioms, rules),
        markers,
        hyp_name,
        objects: n.signature.clone(),
        max_size,
    })
}

/// The encoding with every rule replaced by its explicit instances inside
/// the universe, e.g. for writing to a file.
pub fn materialize(e: &Encoding) -> Aphs {
    let u = e.universe();
    let rules = e
        .system
        .rules()
        .iter()
        .map(|r| {
            let insts = r.rule.enumerate(&u).instances;
            NamedRule::new(r.name.clone(), UnnamedRule::explicit(insts).expect("ids are unique per rule"))
        })
        .collect();
    Aphs::with_space(e.system.signature().clone(), Arc::clone(e.system.space()), e.system.axioms().to_vec(), rules)
}

/// Options for analysing a rule against an ANDS.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NdOptions {
    pub fresh_markers: usize,
    /// Re-run the analysis with a weakening family added and report
    /// verdicts that change.
    pub check_weakening: bool,
}

impl Default for NdOptions {
    fn default() -> Self {
        NdOptions { fresh_markers: 1, check_weakening: true }
    }
}

/// Verdicts for a rule over the encoded system.
#[derive(Clone, Debug)]
pub struct NdAnalysis {
    pub encoding: Encoding,
    pub rule: UnnamedRule,
    pub status: RuleStatus,
    /// The same analysis with weakening added, if requested and the system
    /// lacks it.
    pub with_weakening: Option<RuleStatus>,
}

impl NdAnalysis {
    /// Some decided verdict flips once weakening is available.
    pub fn weakening_sensitive(&self) -> bool {
        let Some(w) = &self.with_weakening else { return false };
        let differs = |x: &crate::Verdict, y: &crate::Verdict| matches!((x.decided(), y.decided()), (Some(p), Some(q)) if p != q);
        differs(&self.status.derivable.verdict, &w.derivable.verdict)
            || differs(&self.status.admissible.verdict, &w.admissible.verdict)
            || differs(&self.status.correct.verdict, &w.correct.verdict)
    }
}

/// Derivability, correctness and admissibility of `r` in `n`, decided on
/// the encoded sequent system within `b`.
pub fn classify_nd_rule(n: &Ands, r: &AndsRule, b: Budget, opts: NdOptions) -> Result<NdAnalysis, AndsError> {
    let markers = marker_pool(n, &[r], opts.fresh_markers)?;
    let encoding = encode_system(n, markers, b.max_universe_size)?;
    let rule = encoding.encode_rule(n, r)?;
    let u = encoding.universe();
    let status = classify_rule_in(&encoding.system, &u, &rule, b);
    let with_weakening = if opts.check_weakening && !n.has_family(FamilyKind::Weakening) {
        let w = encode_rule(n, &AndsRule::family(FamilyKind::Weakening, ""), &encoding.markers)?;
        let name = encoding.system.fresh_name("weakening");
        let ext = encoding.system.extend_with_rule(NamedRule::new(name, w)).expect("fresh name");
        Some(classify_rule_in(&ext, &u, &rule, b))
    } else {
        None
    };
    Ok(NdAnalysis { encoding, rule, status, with_weakening })
}

pub fn check_nd_derivable(n: &Ands, r: &AndsRule, b: Budget) -> Result<crate::analysis::Derivability, AndsError> {
    let opts = NdOptions { check_weakening: false, ..NdOptions::default() };
    let markers = marker_pool(n, &[r], opts.fresh_markers)?;
    let e = encode_system(n, markers, b.max_universe_size)?;
    let rule = e.encode_rule(n, r)?;
    Ok(crate::analysis::check_derivable_in(&e.system, &e.universe(), &rule, b))
}

pub fn check_nd_admissible(n: &Ands, r: &AndsRule, b: Budget) -> Result<crate::analysis::RuleCheck, AndsError> {
    let markers = marker_pool(n, &[r], 1)?;
    let e = encode_system(n, markers, b.max_universe_size)?;
    let rule = e.encode_rule(n, r)?;
    Ok(crate::analysis::check_admissible_in(&e.system, &e.universe(), &rule, b))
}
