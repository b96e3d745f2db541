use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{FormulaSpace, RuleBacking, TermSpace, UnnamedRule, Universe};
use crate::term::{match_scheme, MetaVar, Scheme, Signature, Substitution, Term, TermError};

/// A named axiom. A formula with meta-variables stands for the family of
/// named axioms obtained by instantiating it, all sharing the name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamedAxiom {
    pub name: String,
    pub formula: Scheme,
}

impl NamedAxiom {
    pub fn new(name: impl Into<String>, formula: Scheme) -> Self {
        NamedAxiom { name: name.into(), formula }
    }

    pub fn ground(name: impl Into<String>, formula: &Term) -> Self {
        Self::new(name, Scheme::from_term(formula))
    }

    pub fn matches(&self, t: &Term) -> bool {
        match_scheme(&self.formula, t).is_some()
    }

    /// The axiom formulas inside `universe`.
    pub fn instances(&self, universe: &Universe) -> Vec<Term> {
        if let Some(t) = self.formula.to_term() {
            return if universe.contains(&t) { vec![t] } else { Vec::new() };
        }
        let vars: Vec<MetaVar> = self.formula.vars().into_iter().collect();
        universe
            .extensions(&vars, &Substitution::new(), &[&self.formula])
            .iter()
            .filter_map(|s| self.formula.apply(s).ok())
            .collect()
    }
}

impl fmt::Display for NamedAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name, self.formula)
    }
}

/// A rule carrying a name.
#[derive(Clone, Debug)]
pub struct NamedRule {
    pub name: String,
    pub rule: UnnamedRule,
}

impl NamedRule {
    pub fn new(name: impl Into<String>, rule: UnnamedRule) -> Self {
        NamedRule { name: name.into(), rule }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("name `{0}` is already used in the system")]
    NameClash(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// One breach of the naming or well-formedness constraints.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// Constraint (i): axiom names and rule names are disjoint.
    AxiomRuleNameClash { name: String },
    /// Constraint (ii): different named rules carry different names.
    DuplicateRuleName { name: String },
    MalformedAxiom { name: String, reason: String },
    MalformedRule { name: String, reason: String },
}

impl Violation {
    /// The naming clause a violation breaks, if any.
    pub fn clause(&self) -> Option<&'static str> {
        match self {
            Violation::AxiomRuleNameClash { .. } => Some("(i)"),
            Violation::DuplicateRuleName { .. } => Some("(ii)"),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AxiomRuleNameClash { name } => {
                write!(f, "(i) `{name}` names both an axiom and a rule; axiom names must differ from rule names")
            }
            Violation::DuplicateRuleName { name } => {
                write!(f, "(ii) two different rules are both named `{name}`; named rules must carry different names")
            }
            Violation::MalformedAxiom { name, reason } => write!(f, "axiom `{name}`: {reason}"),
            Violation::MalformedRule { name, reason } => write!(f, "rule `{name}`: {reason}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// An abstract pure Hilbert system: formulas, named axioms and named rules.
/// Names are the union of axiom and rule names.
#[derive(Clone, Debug)]
pub struct Aphs {
    signature: Signature,
    space: Arc<dyn FormulaSpace>,
    axioms: Vec<NamedAxiom>,
    rules: Vec<NamedRule>,
}

impl Aphs {
    /// Builds a system over all terms of `signature`. Constraints are not
    /// enforced here; see [`validate_system`].
    pub fn new(signature: Signature, axioms: Vec<NamedAxiom>, rules: Vec<NamedRule>) -> Self {
        let space = Arc::new(TermSpace(signature.clone()));
        Self::with_space(signature, space, axioms, rules)
    }

    /// Builds a system whose formulas are the members of `space`, a subset
    /// of the terms over `signature`.
    pub fn with_space(
        signature: Signature,
        space: Arc<dyn FormulaSpace>,
        mut axioms: Vec<NamedAxiom>,
        mut rules: Vec<NamedRule>,
    ) -> Self {
        axioms.sort();
        axioms.dedup();
        rules.sort_by(|a, b| a.name.cmp(&b.name));
        Aphs { signature, space, axioms, rules }
    }

    pub fn empty(signature: Signature) -> Self {
        Self::new(signature, Vec::new(), Vec::new())
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn space(&self) -> &Arc<dyn FormulaSpace> {
        &self.space
    }

    pub fn axioms(&self) -> &[NamedAxiom] {
        &self.axioms
    }

    /// Rules in name order.
    pub fn rules(&self) -> &[NamedRule] {
        &self.rules
    }

    pub fn names(&self) -> BTreeSet<String> {
        self.axioms
            .iter()
            .map(|a| a.name.clone())
            .chain(self.rules.iter().map(|r| r.name.clone()))
            .collect()
    }

    pub fn rule(&self, name: &str) -> Option<&NamedRule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn axioms_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a NamedAxiom> + 'a {
        self.axioms.iter().filter(move |a| a.name == name)
    }

    pub fn is_formula(&self, t: &Term) -> bool {
        self.space.contains(t)
    }

    pub fn universe(&self, max_size: usize) -> Universe {
        Universe::over(Arc::clone(&self.space), max_size)
    }

    /// A name not yet used in the system, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let names = self.names();
        if !names.contains(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}{i}"))
            .find(|n| !names.contains(n))
            .expect("unbounded search")
    }

    /// The system plus `r`; fails if the name is taken.
    pub fn extend_with_rule(&self, r: NamedRule) -> Result<Aphs, SystemError> {
        if self.names().contains(&r.name) {
            return Err(SystemError::NameClash(r.name));
        }
        let mut rules = self.rules.clone();
        rules.push(r);
        Ok(Self::with_space(self.signature.clone(), Arc::clone(&self.space), self.axioms.clone(), rules))
    }

    /// The system plus an axiom; the name may be shared with other axioms
    /// but not with a rule.
    pub fn with_axiom(&self, ax: NamedAxiom) -> Result<Aphs, SystemError> {
        if self.rule(&ax.name).is_some() {
            return Err(SystemError::NameClash(ax.name));
        }
        let mut axioms = self.axioms.clone();
        axioms.push(ax);
        Ok(Self::with_space(self.signature.clone(), Arc::clone(&self.space), axioms, self.rules.clone()))
    }

    pub fn without_rule(&self, name: &str) -> Aphs {
        let rules = self.rules.iter().filter(|r| r.name != name).cloned().collect();
        Self::with_space(self.signature.clone(), Arc::clone(&self.space), self.axioms.clone(), rules)
    }

    /// The same system over a larger signature (new formulas).
    pub fn with_signature(&self, signature: Signature) -> Result<Aphs, SystemError> {
        let signature = self.signature.union(&signature)?;
        Ok(Aphs::new(signature, self.axioms.clone(), self.rules.clone()))
    }
}

/// Checks the naming constraints and that axioms and explicit instances
/// lie in the formula set.
pub fn validate_system(s: &Aphs) -> ValidationReport {
    let mut violations = Vec::new();
    let axiom_names: BTreeSet<&str> = s.axioms.iter().map(|a| a.name.as_str()).collect();
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    for r in &s.rules {
        if axiom_names.contains(r.name.as_str()) {
            violations.push(Violation::AxiomRuleNameClash { name: r.name.clone() });
        }
        if !seen.insert(r.name.as_str()) {
            violations.push(Violation::DuplicateRuleName { name: r.name.clone() });
        }
    }
    for a in &s.axioms {
        match a.formula.check(&s.signature) {
            Err(e) => violations.push(Violation::MalformedAxiom { name: a.name.clone(), reason: e.to_string() }),
            Ok(()) => {
                if let Some(t) = a.formula.to_term() {
                    if !s.space.contains(&t) {
                        violations.push(Violation::MalformedAxiom {
                            name: a.name.clone(),
                            reason: format!("`{t}` is not a formula of the system"),
                        });
                    }
                }
            }
        }
    }
    for r in &s.rules {
        if let Some(reason) = rule_defect(s, &r.rule) {
            violations.push(Violation::MalformedRule { name: r.name.clone(), reason });
        }
    }
    violations.sort();
    violations.dedup();
    ValidationReport { violations }
}

fn rule_defect(s: &Aphs, rule: &UnnamedRule) -> Option<String> {
    match rule.backing() {
        RuleBacking::Explicit(r) => r.instances().iter().find_map(|i| {
            i.formulas()
                .find(|f| !s.space.contains(f))
                .map(|f| format!("instance `{}` uses `{f}`, which is not a formula of the system", i.id))
        }),
        RuleBacking::Scheme(r) => {
            let schemes = r.premises().iter().chain(std::iter::once(r.conclusion()));
            // conclusion-only meta-variables are fine: enumeration is always
            // bounded by a universe
            schemes.into_iter().find_map(|sc| sc.check(&s.signature).err().map(|e| e.to_string()))
        }
        RuleBacking::Predicate(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aphs::Instance;

    fn sig() -> Signature {
        Signature::parse(["a/0", "b/0", "imp/2"]).unwrap()
    }

    fn mp() -> UnnamedRule {
        UnnamedRule::scheme(
            vec!["imp(?A,?B)".parse().unwrap(), "?A".parse().unwrap()],
            "?B".parse().unwrap(),
        )
    }

    #[test]
    fn axiom_rule_clash_is_clause_one() {
        let s = Aphs::new(
            sig(),
            vec![NamedAxiom::new("K", "imp(?A,imp(?B,?A))".parse().unwrap())],
            vec![NamedRule::new("K", mp())],
        );
        let report = validate_system(&s);
        assert_eq!(report.violations, vec![Violation::AxiomRuleNameClash { name: "K".into() }]);
        assert_eq!(report.violations[0].clause(), Some("(i)"));
    }

    #[test]
    fn one_rule_under_two_names_is_valid() {
        let r = mp();
        let s = Aphs::new(sig(), vec![], vec![NamedRule::new("MP1", r.clone()), NamedRule::new("MP2", r)]);
        assert!(validate_system(&s).is_valid());
    }

    #[test]
    fn duplicate_rule_names_are_clause_two() {
        let s = Aphs::new(sig(), vec![], vec![NamedRule::new("MP", mp()), NamedRule::new("MP", mp())]);
        let report = validate_system(&s);
        assert_eq!(report.violations[0].clause(), Some("(ii)"));
    }

    #[test]
    fn extension_rejects_taken_names() {
        let s = Aphs::new(sig(), vec![NamedAxiom::ground("ax", &"a".parse().unwrap())], vec![]);
        assert!(matches!(
            s.extend_with_rule(NamedRule::new("ax", mp())),
            Err(SystemError::NameClash(_))
        ));
        let t = s.extend_with_rule(NamedRule::new("MP", mp())).unwrap();
        assert!(validate_system(&t).is_valid());
        assert!(s.rules().is_empty());
    }

    #[test]
    fn explicit_instance_outside_signature_is_malformed() {
        let bad = UnnamedRule::explicit(vec![Instance::new("x", vec![], "c".parse().unwrap())]).unwrap();
        let s = Aphs::new(sig(), vec![], vec![NamedRule::new("R", bad)]);
        assert!(matches!(validate_system(&s).violations[0], Violation::MalformedRule { .. }));
    }
}
