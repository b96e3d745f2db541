//! Schemes (terms with meta-variables), substitutions and one-way matching.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{parse_term, ParseError, Signature, Term, TermError};

/// A meta-variable ranging over terms. Written `?name`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MetaVar(Arc<str>);

impl MetaVar {
    pub fn new(name: impl Into<Arc<str>>) -> Self {
        MetaVar(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for MetaVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// A term-shaped tree whose leaves may be meta-variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scheme {
    Var(MetaVar),
    App(Arc<str>, Vec<Scheme>),
}

impl Scheme {
    pub fn var(name: &str) -> Scheme {
        Scheme::Var(MetaVar::new(name))
    }

    pub fn from_term(t: &Term) -> Scheme {
        Scheme::App(t.head().into(), t.args().iter().map(Scheme::from_term).collect())
    }

    /// The term this scheme denotes, if it has no meta-variables.
    pub fn to_term(&self) -> Option<Term> {
        match self {
            Scheme::Var(_) => None,
            Scheme::App(h, args) => {
                let args = args.iter().map(Scheme::to_term).collect::<Option<Vec<_>>>()?;
                Some(Term::app(h.clone(), args))
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Scheme::Var(_) => false,
            Scheme::App(_, args) => args.iter().all(Scheme::is_ground),
        }
    }

    pub fn vars(&self) -> BTreeSet<MetaVar> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<MetaVar>) {
        match self {
            Scheme::Var(v) => {
                out.insert(v.clone());
            }
            Scheme::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Number of occurrences of `v`.
    pub fn occurrences(&self, v: &MetaVar) -> usize {
        match self {
            Scheme::Var(w) => usize::from(w == v),
            Scheme::App(_, args) => args.iter().map(|a| a.occurrences(v)).sum(),
        }
    }

    /// Size of any instance under `σ`, counting each unbound variable as 1.
    pub fn size_lower_bound(&self, sigma: &Substitution) -> usize {
        match self {
            Scheme::Var(v) => sigma.get(v).map_or(1, Term::size),
            Scheme::App(_, args) => 1 + args.iter().map(|a| a.size_lower_bound(sigma)).sum::<usize>(),
        }
    }

    /// Arity-checks the scheme and ensures no meta-variable reuses a symbol name.
    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Scheme::Var(v) if sig.contains_symbol(v.name()) => {
                Err(TermError::MetaVarShadowsSymbol(v.name().to_string()))
            }
            Scheme::Var(_) => Ok(()),
            Scheme::App(h, args) => match sig.arity(h) {
                None => Err(TermError::UnknownSymbol(h.to_string())),
                Some(a) if a != args.len() => Err(TermError::ArityMismatch {
                    name: h.to_string(),
                    expected: a,
                    found: args.len(),
                }),
                Some(_) => args.iter().try_for_each(|c| c.check(sig)),
            },
        }
    }

    pub fn apply(&self, sigma: &Substitution) -> Result<Term, TermError> {
        match self {
            Scheme::Var(v) => sigma
                .get(v)
                .cloned()
                .ok_or_else(|| TermError::UnboundMetaVar(v.name().to_string())),
            Scheme::App(h, args) => {
                let args = args.iter().map(|a| a.apply(sigma)).collect::<Result<Vec<_>, _>>()?;
                Ok(Term::app(h.clone(), args))
            }
        }
    }

    /// Extends `sigma` so that this scheme matches `t`. On failure `sigma`
    /// may hold partial bindings; callers clone before trying.
    pub fn match_into(&self, t: &Term, sigma: &mut Substitution) -> bool {
        match self {
            Scheme::Var(v) => match sigma.get(v) {
                Some(bound) => bound == t,
                None => {
                    sigma.insert(v.clone(), t.clone());
                    true
                }
            },
            Scheme::App(h, args) => {
                **h == *t.head()
                    && args.len() == t.args().len()
                    && args.iter().zip(t.args()).all(|(s, u)| s.match_into(u, sigma))
            }
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Var(v) => write!(f, "{v}"),
            Scheme::App(h, args) => {
                f.write_str(h)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_scheme(s)
    }
}

/// A finite map from meta-variables to terms.
///
/// The canonical print `{A=a;B=f(a)}` (variables in name order) doubles as
/// the instance identifier of scheme-backed rules.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution(BTreeMap<MetaVar, Term>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &MetaVar) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn insert(&mut self, v: MetaVar, t: Term) -> Option<Term> {
        self.0.insert(v, t)
    }

    pub fn remove(&mut self, v: &MetaVar) -> Option<Term> {
        self.0.remove(v)
    }

    pub fn contains(&self, v: &MetaVar) -> bool {
        self.0.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MetaVar, &Term)> {
        self.0.iter()
    }

    /// Keeps only the bindings for `vars`.
    pub fn restrict(&self, vars: &BTreeSet<MetaVar>) -> Substitution {
        Substitution(
            self.0
                .iter()
                .filter(|(v, _)| vars.contains(*v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        )
    }

    /// Parses the canonical print produced by `Display`.
    pub fn parse(s: &str) -> Result<Substitution, ParseError> {
        let bad = |msg: &str| ParseError { offset: 0, message: msg.to_string() };
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| bad("substitution must be enclosed in braces"))?;
        let mut out = Substitution::new();
        for part in inner.split(';').filter(|p| !p.trim().is_empty()) {
            let (v, t) = part.split_once('=').ok_or_else(|| bad("expected `var=term`"))?;
            let v = v.trim().trim_start_matches('?');
            if v.is_empty() {
                return Err(bad("empty meta-variable name"));
            }
            out.insert(MetaVar::new(v), parse_term(t)?);
        }
        Ok(out)
    }
}

impl FromIterator<(MetaVar, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (MetaVar, Term)>>(iter: I) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{}={t}", v.name())?;
        }
        f.write_str("}")
    }
}

/// Replaces every meta-variable of `s` by its image under `sigma`.
pub fn apply_substitution(s: &Scheme, sigma: &Substitution) -> Result<Term, TermError> {
    s.apply(sigma)
}

/// The unique substitution (on the variables of `s`) instantiating `s` to `t`.
/// Repeated meta-variables must match equal subterms.
pub fn match_scheme(s: &Scheme, t: &Term) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    s.match_into(t, &mut sigma).then_some(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scheme {
        x.parse().unwrap()
    }
    fn t(x: &str) -> Term {
        x.parse().unwrap()
    }
    fn sub(pairs: &[(&str, &str)]) -> Substitution {
        pairs.iter().map(|(v, x)| (MetaVar::new(*v), t(x))).collect()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(apply_substitution(&s("?X"), &sub(&[("X", "a")])).unwrap(), t("a"));
        assert_eq!(
            apply_substitution(&s("→(?X, ?X)"), &sub(&[("X", "f(a)")])).unwrap(),
            t("→(f(a),f(a))")
        );
        assert_eq!(
            apply_substitution(&s("→(?X, ?Y)"), &sub(&[("X", "a")])),
            Err(TermError::UnboundMetaVar("Y".into()))
        );
    }

    #[test]
    fn match_examples() {
        assert_eq!(match_scheme(&s("?X"), &t("f(a)")), Some(sub(&[("X", "f(a)")])));
        assert_eq!(match_scheme(&s("→(?X, ?X)"), &t("→(a,b)")), None);
        assert_eq!(match_scheme(&s("→(?X, ?X)"), &t("→(b,b)")), Some(sub(&[("X", "b")])));
        assert_eq!(match_scheme(&s("f(?X)"), &t("g(a)")), None);
    }

    #[test]
    fn canonical_print_round_trips() {
        let x = sub(&[("B", "imp(a,b)"), ("A", "a")]);
        assert_eq!(x.to_string(), "{A=a;B=imp(a,b)}");
        assert_eq!(Substitution::parse(&x.to_string()).unwrap(), x);
        assert_eq!(Substitution::parse("{}").unwrap(), Substitution::new());
    }

    #[test]
    fn metavar_may_not_shadow_symbol() {
        let sig = Signature::parse(["a/0", "f/1"]).unwrap();
        assert!(s("f(?x)").check(&sig).is_ok());
        assert_eq!(
            s("f(?a)").check(&sig),
            Err(TermError::MetaVarShadowsSymbol("a".into()))
        );
    }
}
