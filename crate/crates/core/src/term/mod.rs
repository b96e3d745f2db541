//! First-order ground terms over a finite signature.
//!
//! Terms are the concrete formula language of every proof system in this
//! crate. They are immutable and cheap to clone (reference counted), and
//! ordered size-first, then by head symbol name, then by arguments.

mod enumerate;
mod parse;
mod scheme;

pub use enumerate::enumerate_terms;
pub use parse::{is_ident_char, parse_scheme, parse_term, ParseError};
pub use scheme::{apply_substitution, match_scheme, MetaVar, Scheme, Substitution};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Errors raised while building signatures or checking terms against them.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("signature has no constant, so its formula set would be empty")]
    NoConstant,
    #[error("symbol name must be a nonempty identifier, got `{0}`")]
    BadSymbolName(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{name}` has arity {expected} but is applied to {found} arguments")]
    ArityMismatch { name: String, expected: usize, found: usize },
    #[error("meta-variable ?{0} is not bound by the substitution")]
    UnboundMetaVar(String),
    #[error("meta-variable ?{0} shadows a symbol of the signature")]
    MetaVarShadowsSymbol(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A function symbol with a fixed arity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl std::str::FromStr for Symbol {
    type Err = TermError;

    /// Parses `name/arity`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, arity) = s
            .rsplit_once('/')
            .ok_or_else(|| TermError::BadSymbolName(s.to_string()))?;
        let name = name.trim();
        let arity: usize = arity
            .trim()
            .parse()
            .map_err(|_| TermError::BadSymbolName(s.to_string()))?;
        if name.is_empty() || !name.chars().all(is_ident_char) {
            return Err(TermError::BadSymbolName(name.to_string()));
        }
        Ok(Symbol::new(name, arity))
    }
}

/// A finite set of symbols with unique names, containing at least one constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    symbols: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Result<Self, TermError> {
        let mut map = BTreeMap::new();
        for sym in symbols {
            if sym.name.is_empty() || !sym.name.chars().all(is_ident_char) {
                return Err(TermError::BadSymbolName(sym.name));
            }
            if map.insert(sym.name.clone(), sym.arity).is_some() {
                return Err(TermError::DuplicateSymbol(sym.name));
            }
        }
        if !map.values().any(|&a| a == 0) {
            return Err(TermError::NoConstant);
        }
        Ok(Signature { symbols: map })
    }

    /// Parses a list of `name/arity` declarations.
    pub fn parse<'a>(decls: impl IntoIterator<Item = &'a str>) -> Result<Self, TermError> {
        let syms = decls
            .into_iter()
            .map(|d| d.parse::<Symbol>())
            .collect::<Result<Vec<_>, _>>()?;
        Signature::new(syms)
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn contains_symbol(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    /// Symbols in name order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().map(|(n, &a)| Symbol::new(n.clone(), a))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Returns a copy with `sym` added. Re-adding an identical symbol is a no-op.
    pub fn with_symbol(&self, sym: Symbol) -> Result<Self, TermError> {
        match self.symbols.get(&sym.name) {
            Some(&a) if a == sym.arity => Ok(self.clone()),
            Some(_) => Err(TermError::DuplicateSymbol(sym.name)),
            None => {
                let mut out = self.clone();
                out.symbols.insert(sym.name, sym.arity);
                Ok(out)
            }
        }
    }

    /// Union of two signatures; a name used with two arities is an error.
    pub fn union(&self, other: &Signature) -> Result<Self, TermError> {
        other
            .symbols()
            .try_fold(self.clone(), |acc, sym| acc.with_symbol(sym))
    }

    /// Checks that `t` only uses declared symbols at their declared arity.
    pub fn check(&self, t: &Term) -> Result<(), TermError> {
        match self.arity(t.head()) {
            None => Err(TermError::UnknownSymbol(t.head().to_string())),
            Some(a) if a != t.args().len() => Err(TermError::ArityMismatch {
                name: t.head().to_string(),
                expected: a,
                found: t.args().len(),
            }),
            Some(_) => t.args().iter().try_for_each(|c| self.check(c)),
        }
    }

    pub fn accepts(&self, t: &Term) -> bool {
        self.check(t).is_ok()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct TermNode {
    head: Arc<str>,
    args: Vec<Term>,
    size: usize,
}

/// A ground first-order term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term(Arc<TermNode>);

/// A position in a term: the sequence of 1-based argument indices from the root.
pub type Position = Vec<usize>;

impl Term {
    pub fn app(head: impl Into<Arc<str>>, args: Vec<Term>) -> Term {
        let size = 1 + args.iter().map(Term::size).sum::<usize>();
        Term(Arc::new(TermNode { head: head.into(), args, size }))
    }

    pub fn constant(name: impl Into<Arc<str>>) -> Term {
        Term::app(name, Vec::new())
    }

    pub fn head(&self) -> &str {
        &self.0.head
    }

    pub fn args(&self) -> &[Term] {
        &self.0.args
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn subterm(&self, pos: &[usize]) -> Option<&Term> {
        match pos.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.args().get(i.checked_sub(1)?)?.subterm(rest),
        }
    }

    /// Replaces the subterm at `pos`; `None` if the position does not exist.
    pub fn replace_at(&self, pos: &[usize], new: Term) -> Option<Term> {
        match pos.split_first() {
            None => Some(new),
            Some((&i, rest)) => {
                let idx = i.checked_sub(1)?;
                let child = self.args().get(idx)?.replace_at(rest, new)?;
                let mut args = self.args().to_vec();
                args[idx] = child;
                Some(Term::app(self.0.head.clone(), args))
            }
        }
    }

    /// All positions in pre-order (root first, then arguments left to right).
    pub fn positions(&self) -> Vec<Position> {
        fn go(t: &Term, prefix: &mut Position, out: &mut Vec<Position>) {
            out.push(prefix.clone());
            for (i, c) in t.args().iter().enumerate() {
                prefix.push(i + 1);
                go(c, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Number of nodes of `t`.
pub fn term_size(t: &Term) -> usize {
    t.size()
}

/// Renders a position as `ε` for the root, else dot-separated indices.
pub fn format_position(pos: &[usize]) -> String {
    if pos.is_empty() {
        "ε".to_string()
    } else {
        pos.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.size()
            .cmp(&other.size())
            .then_with(|| self.head().cmp(other.head()))
            .then_with(|| self.args().cmp(other.args()))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.head())?;
        if !self.args().is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args().iter().enumerate() {
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

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Term {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}
