use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::aphs::FormulaSpace;
use crate::term::{enumerate_terms, is_ident_char, parse_term, ParseError, Signature, Term};

/// Symbols the sequent encoding reserves.
pub const SEQ: &str = "seq";
pub const NIL: &str = "nil";
pub const CONS: &str = "cons";
pub const MARK: &str = "mark";
pub const RESERVED: [&str; 4] = [SEQ, NIL, CONS, MARK];

/// A formula decorated with a marker. Ordered by formula, then marker.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedAssumption {
    pub formula: Term,
    pub marker: String,
}

impl MarkedAssumption {
    pub fn new(formula: Term, marker: impl Into<String>) -> Self {
        MarkedAssumption { formula, marker: marker.into() }
    }

    pub fn to_term(&self) -> Term {
        Term::app(MARK, vec![self.formula.clone(), Term::constant(self.marker.as_str())])
    }

    /// Nodes the assumption adds to an encoded sequent.
    pub fn encoded_size(&self) -> usize {
        self.formula.size() + 3
    }
}

impl fmt::Display for MarkedAssumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.formula, self.marker)
    }
}

pub type Context = BTreeSet<MarkedAssumption>;

/// `antecedent => succedent`, with a set of marked assumptions on the left.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub antecedent: Context,
    pub succedent: Term,
}

pub fn context_term(ctx: &Context) -> Term {
    ctx.iter()
        .rev()
        .fold(Term::constant(NIL), |tail, m| Term::app(CONS, vec![m.to_term(), tail]))
}

/// Reads a canonical context list (strictly increasing, no duplicates).
pub fn context_from_term(t: &Term) -> Option<Context> {
    let mut out = Vec::new();
    let mut cur = t;
    loop {
        match (cur.head(), cur.args()) {
            (NIL, []) => break,
            (CONS, [m, rest]) => {
                let (MARK, [formula, marker]) = (m.head(), m.args()) else { return None };
                if !marker.args().is_empty() {
                    return None;
                }
                out.push(MarkedAssumption::new(formula.clone(), marker.head()));
                cur = rest;
            }
            _ => return None,
        }
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    Some(out.into_iter().collect())
}

impl Sequent {
    pub fn new(antecedent: Context, succedent: Term) -> Self {
        Sequent { antecedent, succedent }
    }

    pub fn to_term(&self) -> Term {
        Term::app(SEQ, vec![context_term(&self.antecedent), self.succedent.clone()])
    }

    pub fn from_term(t: &Term) -> Option<Sequent> {
        let (SEQ, [ctx, succ]) = (t.head(), t.args()) else { return None };
        Some(Sequent::new(context_from_term(ctx)?, succ.clone()))
    }

    /// Node count of the encoding: 2 + Σ(|B|+3) + |A|.
    pub fn encoded_size(&self) -> usize {
        2 + self.antecedent.iter().map(MarkedAssumption::encoded_size).sum::<usize>() + self.succedent.size()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.antecedent.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}} => {}", parts.join(", "), self.succedent)
    }
}

impl FromStr for Sequent {
    type Err = ParseError;

    /// Parses `{A^m, B^n} => C`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| ParseError { offset: 0, message: m.to_string() };
        let (lhs, rhs) = s.split_once("=>").ok_or_else(|| bad("expected `{...} => formula`"))?;
        let inner = lhs
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| bad("antecedent must be enclosed in braces"))?;
        let mut antecedent = Context::new();
        for part in split_top_level(inner) {
            let (f, m) = part.rsplit_once('^').ok_or_else(|| bad("marked assumption must be `formula^marker`"))?;
            let m = m.trim();
            if m.is_empty() || !m.chars().all(is_ident_char) {
                return Err(bad("bad marker name"));
            }
            antecedent.insert(MarkedAssumption::new(parse_term(f)?, m));
        }
        Ok(Sequent::new(antecedent, parse_term(rhs)?))
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().filter(|p| !p.trim().is_empty()).collect()
}

/// Renders sequent-encoded terms readably and leaves other terms alone.
pub fn display_formula(t: &Term) -> String {
    Sequent::from_term(t).map_or_else(|| t.to_string(), |s| s.to_string())
}

/// The formulas of an encoded system: well-formed sequents over object
/// terms and a finite marker pool.
#[derive(Clone, Debug)]
pub struct SequentSpace {
    pub objects: Signature,
    pub markers: Arc<Vec<String>>,
}

impl SequentSpace {
    pub fn is_marker(&self, m: &str) -> bool {
        self.markers.iter().any(|x| x == m)
    }

    pub fn accepts(&self, s: &Sequent) -> bool {
        self.objects.accepts(&s.succedent)
            && s.antecedent.iter().all(|m| self.objects.accepts(&m.formula) && self.is_marker(&m.marker))
    }
}

impl FormulaSpace for SequentSpace {
    fn contains(&self, t: &Term) -> bool {
        Sequent::from_term(t).is_some_and(|s| self.accepts(&s))
    }

    fn enumerate(&self, max_size: usize) -> Vec<Term> {
        if max_size < 3 {
            return Vec::new();
        }
        let objects = enumerate_terms(&self.objects, max_size - 2);
        let marked: Vec<MarkedAssumption> = objects
            .iter()
            .flat_map(|o| self.markers.iter().map(move |m| MarkedAssumption::new(o.clone(), m.as_str())))
            .filter(|m| 3 + m.encoded_size() <= max_size)
            .collect();
        let mut contexts = Vec::new();
        subsets(&marked, 0, max_size - 3, &mut Context::new(), &mut contexts);
        let mut out = Vec::new();
        for ctx in &contexts {
            let used: usize = ctx.iter().map(MarkedAssumption::encoded_size).sum();
            for a in objects.iter().take_while(|a| 2 + used + a.size() <= max_size) {
                out.push(Sequent::new(ctx.clone(), a.clone()).to_term());
            }
        }
        out.sort();
        out
    }

    fn describe(&self) -> String {
        format!("sequents over {} with markers {{{}}}", self.objects, self.markers.join(", "))
    }
}

/// Every subset of `items[from..]` extending `cur` whose encoded size stays
/// within `budget`.
fn subsets(items: &[MarkedAssumption], from: usize, budget: usize, cur: &mut Context, out: &mut Vec<Context>) {
    out.push(cur.clone());
    for i in from..items.len() {
        let cost = items[i].encoded_size();
        if cost <= budget {
            cur.insert(items[i].clone());
            subsets(items, i + 1, budget - cost, cur, out);
            cur.remove(&items[i]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn round_trip_and_size() {
        let s: Sequent = "{b^v, a^u} => imp(a,b)".parse().unwrap();
        assert_eq!(s.to_string(), "{a^u, b^v} => imp(a,b)");
        let enc = s.to_term();
        assert_eq!(enc.to_string(), "seq(cons(mark(a,u),cons(mark(b,v),nil)),imp(a,b))");
        assert_eq!(enc.size(), s.encoded_size());
        assert_eq!(Sequent::from_term(&enc), Some(s));
    }

    #[test]
    fn non_canonical_contexts_are_rejected() {
        assert!(Sequent::from_term(&t("seq(cons(mark(b,v),cons(mark(a,u),nil)),a)")).is_none());
        assert!(Sequent::from_term(&t("seq(cons(mark(a,u),cons(mark(a,u),nil)),a)")).is_none());
        assert!(Sequent::from_term(&t("seq(nil,a)")).is_some());
    }

    #[test]
    fn space_enumeration_matches_membership() {
        let space = SequentSpace {
            objects: Signature::parse(["a/0", "f/1"]).unwrap(),
            markers: Arc::new(vec!["u".into(), "v".into()]),
        };
        let all = space.enumerate(8);
        assert!(all.iter().all(|s| space.contains(s) && s.size() <= 8));
        // nil contexts: a, f(a) .. f^5(a); one assumption: 2 formulas x 2 markers
        // with room for the succedent
        let empty = all.iter().filter(|s| Sequent::from_term(s).unwrap().antecedent.is_empty()).count();
        assert_eq!(empty, 6);
        assert!(!space.contains(&t("seq(cons(mark(a,w),nil),a)")));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
    }
}
