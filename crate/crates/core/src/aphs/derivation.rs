use std::collections::BTreeSet;
use std::fmt;

use super::{Aphs, InstanceId};
use crate::term::Term;

/// A prooftree. Leaves are axiom references or assumptions; inner nodes
/// apply an instance of a named rule to one subderivation per premise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Derivation {
    Axiom { name: String, formula: Term },
    Assume { formula: Term },
    Rule { rule: String, instance: InstanceId, formula: Term, premises: Vec<Derivation> },
}

/// Child indices from the root, counting from 1.
pub type Path = Vec<usize>;

impl Derivation {
    pub fn axiom(name: impl Into<String>, formula: Term) -> Self {
        Derivation::Axiom { name: name.into(), formula }
    }

    pub fn assume(formula: Term) -> Self {
        Derivation::Assume { formula }
    }

    pub fn rule(rule: impl Into<String>, instance: impl Into<InstanceId>, formula: Term, premises: Vec<Derivation>) -> Self {
        Derivation::Rule { rule: rule.into(), instance: instance.into(), formula, premises }
    }

    /// The root formula.
    pub fn conclusion(&self) -> &Term {
        match self {
            Derivation::Axiom { formula, .. } | Derivation::Assume { formula } | Derivation::Rule { formula, .. } => {
                formula
            }
        }
    }

    /// The set of formulas at assumption leaves.
    pub fn assumptions(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.visit(&mut |d| {
            if let Derivation::Assume { formula } = d {
                out.insert(formula.clone());
            }
        });
        out
    }

    pub fn is_closed(&self) -> bool {
        self.assumptions().is_empty()
    }

    pub fn premises(&self) -> &[Derivation] {
        match self {
            Derivation::Rule { premises, .. } => premises,
            _ => &[],
        }
    }

    /// Leaves have height 0.
    pub fn height(&self) -> usize {
        match self {
            Derivation::Rule { premises, .. } => 1 + premises.iter().map(Derivation::height).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises().iter().map(Derivation::node_count).sum::<usize>()
    }

    /// Number of nodes applying the rule named `name`.
    pub fn rule_count(&self, name: &str) -> usize {
        let mut n = 0;
        self.visit(&mut |d| {
            if matches!(d, Derivation::Rule { rule, .. } if rule == name) {
                n += 1;
            }
        });
        n
    }

    pub fn uses_rule(&self, name: &str) -> bool {
        self.rule_count(name) > 0
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Derivation)) {
        f(self);
        for p in self.premises() {
            p.visit(f);
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Derivation> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises().get(i.checked_sub(1)?)?.at(rest),
        }
    }

    /// Replaces the subderivation at `path`.
    pub fn replace_at(&self, path: &[usize], new: Derivation) -> Option<Derivation> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(new);
        };
        let Derivation::Rule { rule, instance, formula, premises } = self else {
            return None;
        };
        let idx = i.checked_sub(1)?;
        let child = premises.get(idx)?.replace_at(rest, new)?;
        let mut premises = premises.clone();
        premises[idx] = child;
        Some(Derivation::Rule { rule: rule.clone(), instance: instance.clone(), formula: formula.clone(), premises })
    }

    /// Paths of nodes applying `name`, in pre-order.
    pub fn rule_paths_preorder(&self, name: &str) -> Vec<Path> {
        let mut out = Vec::new();
        self.collect_paths(name, &mut Vec::new(), &mut out, true);
        out
    }

    /// Paths of nodes applying `name`, in post-order.
    pub fn rule_paths_postorder(&self, name: &str) -> Vec<Path> {
        let mut out = Vec::new();
        self.collect_paths(name, &mut Vec::new(), &mut out, false);
        out
    }

    fn collect_paths(&self, name: &str, prefix: &mut Path, out: &mut Vec<Path>, pre: bool) {
        let hit = matches!(self, Derivation::Rule { rule, .. } if rule == name);
        if pre && hit {
            out.push(prefix.clone());
        }
        for (i, p) in self.premises().iter().enumerate() {
            prefix.push(i + 1);
            p.collect_paths(name, prefix, out, pre);
            prefix.pop();
        }
        if !pre && hit {
            out.push(prefix.clone());
        }
    }

    /// Replaces every assumption leaf whose formula has a derivation in
    /// `by` by that derivation.
    pub fn graft(&self, by: &dyn Fn(&Term) -> Option<Derivation>) -> Derivation {
        match self {
            Derivation::Assume { formula } => by(formula).unwrap_or_else(|| self.clone()),
            Derivation::Axiom { .. } => self.clone(),
            Derivation::Rule { rule, instance, formula, premises } => Derivation::Rule {
                rule: rule.clone(),
                instance: instance.clone(),
                formula: formula.clone(),
                premises: premises.iter().map(|p| p.graft(by)).collect(),
            },
        }
    }

    /// Indented tree print, conclusion first, one node per line.
    pub fn pretty(&self) -> String {
        self.pretty_with(&|t| t.to_string())
    }

    /// As [`Derivation::pretty`], rendering formulas with `show`.
    pub fn pretty_with(&self, show: &dyn Fn(&Term) -> String) -> String {
        let mut out = String::new();
        self.pretty_into(0, show, &mut out);
        out
    }

    fn pretty_into(&self, indent: usize, show: &dyn Fn(&Term) -> String, out: &mut String) {
        use std::fmt::Write;
        let pad = "  ".repeat(indent);
        match self {
            Derivation::Axiom { name, formula } => {
                let _ = writeln!(out, "{pad}{}    [axiom {name}]", show(formula));
            }
            Derivation::Assume { formula } => {
                let _ = writeln!(out, "{pad}{}    [assumption]", show(formula));
            }
            Derivation::Rule { rule, instance, formula, premises } => {
                let _ = writeln!(out, "{pad}{}    [{rule} {instance}]", show(formula));
                for p in premises {
                    p.pretty_into(indent + 1, show, out);
                }
            }
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// A failed derivation invariant, located by path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Defect {
    pub path: Path,
    pub message: String,
}

pub fn format_path(path: &[usize]) -> String {
    let parts: Vec<String> = path.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at path {}", self.message, format_path(&self.path))
    }
}

pub fn assumptions(d: &Derivation) -> BTreeSet<Term> {
    d.assumptions()
}

pub fn conclusion(d: &Derivation) -> Term {
    d.conclusion().clone()
}

/// Checks every node of `d` against `s`; `Ok` iff the tree is a derivation.
pub fn check_derivation(s: &Aphs, d: &Derivation) -> Result<(), Vec<Defect>> {
    let mut defects = Vec::new();
    check_node(s, d, &mut Vec::new(), &mut defects);
    if defects.is_empty() {
        Ok(())
    } else {
        Err(defects)
    }
}

fn check_node(s: &Aphs, d: &Derivation, path: &mut Path, out: &mut Vec<Defect>) {
    let mut defect = |message: String| out.push(Defect { path: path.clone(), message });
    if !s.is_formula(d.conclusion()) {
        defect(format!("`{}` is not a formula of the system", d.conclusion()));
    }
    match d {
        Derivation::Assume { .. } => {}
        Derivation::Axiom { name, formula } => {
            let mut named = s.axioms_named(name).peekable();
            if named.peek().is_none() {
                defect(format!("no axiom named `{name}`"));
            } else if !named.any(|a| a.matches(formula)) {
                defect(format!("`{formula}` is not axiom `{name}`"));
            }
        }
        Derivation::Rule { rule, instance, formula, premises } => {
            match s.rule(rule) {
                None => defect(format!("no rule named `{rule}`")),
                Some(named) => match named.rule.instance(instance) {
                    None => defect(format!("rule `{rule}` has no instance `{instance}`")),
                    Some(inst) => {
                        if inst.arity() != premises.len() {
                            defect(format!(
                                "arity mismatch: instance `{instance}` has {} premises, node has {} subderivations",
                                inst.arity(),
                                premises.len()
                            ));
                        } else {
                            for (i, (want, sub)) in inst.prem.iter().zip(premises).enumerate() {
                                if sub.conclusion() != want {
                                    defect(format!(
                                        "premise {} should be `{want}` but subderivation concludes `{}`",
                                        i + 1,
                                        sub.conclusion()
                                    ));
                                }
                            }
                        }
                        if &inst.concl != formula {
                            defect(format!("node formula `{formula}` differs from instance conclusion `{}`", inst.concl));
                        }
                    }
                },
            }
            for (i, p) in premises.iter().enumerate() {
                path.push(i + 1);
                check_node(s, p, path, out);
                path.pop();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aphs::{NamedAxiom, NamedRule, UnnamedRule};
    use crate::term::Signature;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn sys() -> Aphs {
        Aphs::new(
            Signature::parse(["a/0", "b/0", "imp/2"]).unwrap(),
            vec![NamedAxiom::new("K", "imp(?A,imp(?B,?A))".parse().unwrap())],
            vec![NamedRule::new(
                "MP",
                UnnamedRule::scheme(
                    vec!["imp(?A,?B)".parse().unwrap(), "?A".parse().unwrap()],
                    "?B".parse().unwrap(),
                ),
            )],
        )
    }

    #[test]
    fn assumption_leaf() {
        let d = Derivation::assume(t("a"));
        assert!(check_derivation(&sys(), &d).is_ok());
        assert_eq!(assumptions(&d), [t("a")].into());
        assert_eq!(conclusion(&d), t("a"));
    }

    #[test]
    fn modus_ponens_node() {
        let d = Derivation::rule(
            "MP",
            "{A=a;B=imp(b,a)}",
            t("imp(b,a)"),
            vec![Derivation::axiom("K", t("imp(a,imp(b,a))")), Derivation::assume(t("a"))],
        );
        assert!(check_derivation(&sys(), &d).is_ok());
        assert_eq!(d.height(), 1);
        assert_eq!(d.rule_count("MP"), 1);
    }

    #[test]
    fn repeated_assumptions_collapse() {
        let d = Derivation::rule(
            "MP",
            "{A=a;B=a}",
            t("a"),
            vec![Derivation::assume(t("imp(a,a)")), Derivation::assume(t("a"))],
        );
        let d2 = Derivation::rule(
            "MP",
            "{A=a;B=a}",
            t("a"),
            vec![Derivation::assume(t("imp(a,a)")), d.clone()],
        );
        assert_eq!(d2.assumptions().len(), 2);
    }

    #[test]
    fn arity_defect_is_located_at_root() {
        let d = Derivation::rule("MP", "{A=a;B=a}", t("a"), vec![Derivation::assume(t("imp(a,a)"))]);
        let defects = check_derivation(&sys(), &d).unwrap_err();
        assert_eq!(defects.len(), 1);
        assert!(defects[0].to_string().starts_with("arity mismatch"));
        assert!(defects[0].to_string().ends_with("at path []"));
    }

    #[test]
    fn nested_defect_path() {
        let inner = Derivation::axiom("K", t("imp(a,a)"));
        let d = Derivation::rule("MP", "{A=imp(a,a);B=a}", t("a"), vec![Derivation::assume(t("imp(imp(a,a),a)")), inner]);
        let defects = check_derivation(&sys(), &d).unwrap_err();
        assert_eq!(defects[0].path, vec![2]);
    }
}
