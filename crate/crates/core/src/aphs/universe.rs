use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::term::{enumerate_terms, MetaVar, Scheme, Signature, Substitution, Term};

/// Resource bounds that make the semi-decision procedures total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Budget {
    /// Maximum height of a derivation explored by backward search.
    pub max_depth: usize,
    /// Maximum size (node count) of any formula taking part in a derivation.
    pub max_universe_size: usize,
    /// Maximum number of goal expansions or rule firings per query.
    pub max_nodes_expanded: usize,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("budget field `{0}` must be strictly positive")]
pub struct BudgetError(pub &'static str);

impl Budget {
    pub fn new(max_depth: usize, max_universe_size: usize, max_nodes_expanded: usize) -> Result<Self, BudgetError> {
        if max_depth == 0 {
            return Err(BudgetError("max_depth"));
        }
        if max_universe_size == 0 {
            return Err(BudgetError("max_universe_size"));
        }
        if max_nodes_expanded == 0 {
            return Err(BudgetError("max_nodes_expanded"));
        }
        Ok(Budget { max_depth, max_universe_size, max_nodes_expanded })
    }

    /// Depth and node limits generous enough for desk-scale systems.
    pub fn with_universe(max_universe_size: usize) -> Self {
        Budget { max_depth: 8, max_universe_size, max_nodes_expanded: 2_000_000 }
    }

    pub fn depth(self, max_depth: usize) -> Self {
        Budget { max_depth, ..self }
    }

    pub fn nodes(self, max_nodes_expanded: usize) -> Self {
        Budget { max_nodes_expanded, ..self }
    }
}

/// The formula set of a system, independent of any size bound.
pub trait FormulaSpace: fmt::Debug + Send + Sync {
    fn contains(&self, t: &Term) -> bool;

    /// Every formula with at most `max_size` nodes, in term order.
    fn enumerate(&self, max_size: usize) -> Vec<Term>;

    fn describe(&self) -> String;
}

/// All terms over a signature.
#[derive(Clone, Debug)]
pub struct TermSpace(pub Signature);

impl FormulaSpace for TermSpace {
    fn contains(&self, t: &Term) -> bool {
        self.0.accepts(t)
    }

    fn enumerate(&self, max_size: usize) -> Vec<Term> {
        enumerate_terms(&self.0, max_size)
    }

    fn describe(&self) -> String {
        format!("terms over {}", self.0)
    }
}

/// The finite slice of the formula set a bounded query works in: all
/// formulas with at most `max_size` nodes. Clones share the enumeration cache.
#[derive(Clone)]
pub struct Universe {
    space: Arc<dyn FormulaSpace>,
    max_size: usize,
    cache: Arc<Mutex<(usize, Arc<Vec<Term>>)>>,
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Universe")
            .field("space", &self.space.describe())
            .field("max_size", &self.max_size)
            .finish()
    }
}

impl Universe {
    pub fn new(signature: Signature, max_size: usize) -> Self {
        Self::over(Arc::new(TermSpace(signature)), max_size)
    }

    pub fn over(space: Arc<dyn FormulaSpace>, max_size: usize) -> Self {
        Universe { space, max_size, cache: Arc::new(Mutex::new((0, Arc::new(Vec::new())))) }
    }

    pub fn space(&self) -> &Arc<dyn FormulaSpace> {
        &self.space
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn contains(&self, t: &Term) -> bool {
        t.size() <= self.max_size && self.space.contains(t)
    }

    /// All formulas of the universe in term order.
    pub fn terms(&self) -> Arc<Vec<Term>> {
        let (all, len) = self.terms_up_to(self.max_size);
        debug_assert_eq!(all.len(), len);
        all
    }

    /// The formulas of size at most `n`, as a shared vector and the length
    /// of the relevant prefix.
    pub fn terms_up_to(&self, n: usize) -> (Arc<Vec<Term>>, usize) {
        let n = n.min(self.max_size);
        let mut cache = self.cache.lock().expect("universe cache poisoned");
        if cache.0 < n {
            *cache = (n, Arc::new(self.space.enumerate(n)));
        }
        let terms = Arc::clone(&cache.1);
        let len = terms.partition_point(|t| t.size() <= n);
        (terms, len)
    }

    pub fn len(&self) -> usize {
        self.terms().len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms().is_empty()
    }

    /// Every extension of `base` to `vars` such that each scheme in
    /// `schemes` instantiates to a formula of the universe, in enumeration
    /// order of the variables' values.
    pub fn extensions(&self, vars: &[MetaVar], base: &Substitution, schemes: &[&Scheme]) -> Vec<Substitution> {
        let mut out = Vec::new();
        let mut sigma = base.clone();
        self.extend(vars, &mut sigma, schemes, &mut out);
        out
    }

    fn extend(&self, vars: &[MetaVar], sigma: &mut Substitution, schemes: &[&Scheme], out: &mut Vec<Substitution>) {
        let Some((v, rest)) = vars.split_first() else {
            let fits = schemes
                .iter()
                .all(|s| s.apply(sigma).map(|t| self.contains(&t)).unwrap_or(false));
            if fits {
                out.push(sigma.clone());
            }
            return;
        };
        // largest value size keeping every scheme within the bound
        let mut cap = self.max_size;
        for s in schemes {
            let occ = s.occurrences(v);
            if occ > 0 {
                let lb = s.size_lower_bound(sigma);
                if lb > self.max_size {
                    return;
                }
                cap = cap.min((self.max_size - lb) / occ + 1);
            }
        }
        let (terms, len) = self.terms_up_to(cap);
        for cand in &terms[..len] {
            sigma.insert(v.clone(), cand.clone());
            self.extend(rest, sigma, schemes, out);
        }
        sigma.remove(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_must_be_positive() {
        assert!(Budget::new(0, 1, 1).is_err());
        assert!(Budget::new(1, 0, 1).is_err());
        assert!(Budget::new(1, 1, 0).is_err());
        assert!(Budget::new(1, 1, 1).is_ok());
    }

    #[test]
    fn extensions_respect_size_bound() {
        let sig = Signature::parse(["a/0", "imp/2"]).unwrap();
        let u = Universe::new(sig, 5);
        let k: Scheme = "imp(?A,imp(?B,?A))".parse().unwrap();
        let vars: Vec<MetaVar> = k.vars().into_iter().collect();
        let exts = u.extensions(&vars, &Substitution::new(), &[&k]);
        // only A = B = a fits in five nodes
        assert_eq!(exts.len(), 1);
        assert_eq!(exts[0].to_string(), "{A=a;B=a}");
    }

    #[test]
    fn prefix_queries_share_cache() {
        let sig = Signature::parse(["a/0", "f/1"]).unwrap();
        let u = Universe::new(sig, 4);
        let (_, n2) = u.terms_up_to(2);
        assert_eq!(n2, 2);
        assert_eq!(u.terms().len(), 4);
        let (_, n3) = u.clone().terms_up_to(3);
        assert_eq!(n3, 3);
    }
}
