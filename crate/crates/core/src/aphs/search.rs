use std::collections::{BTreeSet, HashMap};

use super::{Aphs, Budget, Derivation, Universe};
use crate::term::Term;

/// Result of a bounded backward search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Proved(Derivation),
    /// No derivation of height at most `max_depth` inside the universe;
    /// `exhausted` when the node budget cut the search short.
    NotProvedWithinBudget { exhausted: bool },
}

impl SearchOutcome {
    pub fn derivation(&self) -> Option<&Derivation> {
        match self {
            SearchOutcome::Proved(d) => Some(d),
            _ => None,
        }
    }

    pub fn into_derivation(self) -> Option<Derivation> {
        match self {
            SearchOutcome::Proved(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved(_))
    }
}

/// Searches for a derivation of `goal` from assumptions in `gamma`.
pub fn derives(s: &Aphs, gamma: &BTreeSet<Term>, goal: &Term, b: Budget) -> SearchOutcome {
    derives_in(s, &s.universe(b.max_universe_size), gamma, goal, b)
}

/// As [`derives`], reusing a universe.
///
/// Iterative deepening over the height. At each goal the order is:
/// assumption, axioms, then rules by name with instances in the order
/// their source yields them. Failures are memoized per goal by height.
pub fn derives_in(s: &Aphs, universe: &Universe, gamma: &BTreeSet<Term>, goal: &Term, b: Budget) -> SearchOutcome {
    let mut search = Search {
        sys: s,
        universe,
        gamma,
        nodes: 0,
        limit: b.max_nodes_expanded,
        exhausted: false,
        failed: HashMap::new(),
        proved: HashMap::new(),
    };
    for depth in 0..=b.max_depth {
        if let Some(d) = search.prove(goal, depth) {
            return SearchOutcome::Proved(d);
        }
        if search.exhausted {
            break;
        }
    }
    SearchOutcome::NotProvedWithinBudget { exhausted: search.exhausted }
}

struct Search<'a> {
    sys: &'a Aphs,
    universe: &'a Universe,
    gamma: &'a BTreeSet<Term>,
    nodes: usize,
    limit: usize,
    exhausted: bool,
    /// goal -> largest height bound known to fail
    failed: HashMap<Term, usize>,
    /// goal -> derivation and its height
    proved: HashMap<Term, (Derivation, usize)>,
}

impl Search<'_> {
    fn prove(&mut self, goal: &Term, depth: usize) -> Option<Derivation> {
        if self.gamma.contains(goal) {
            return Some(Derivation::assume(goal.clone()));
        }
        if let Some((d, h)) = self.proved.get(goal) {
            if *h <= depth {
                return Some(d.clone());
            }
        }
        if self.failed.get(goal).is_some_and(|&f| f >= depth) {
            return None;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            self.exhausted = true;
            return None;
        }
        let found = self.expand(goal, depth);
        match &found {
            Some((d, h)) => {
                self.proved.insert(goal.clone(), (d.clone(), *h));
            }
            None if !self.exhausted => {
                self.failed.insert(goal.clone(), depth);
            }
            None => {}
        }
        found.map(|(d, _)| d)
    }

    fn expand(&mut self, goal: &Term, depth: usize) -> Option<(Derivation, usize)> {
        if !self.universe.contains(goal) {
            return None;
        }
        if let Some(ax) = self.sys.axioms().iter().find(|a| a.matches(goal)) {
            return Some((Derivation::axiom(ax.name.clone(), goal.clone()), 0));
        }
        if depth == 0 {
            return None;
        }
        let sys = self.sys;
        for named in sys.rules() {
            'instances: for inst in named.rule.concluding(goal, self.universe) {
                let mut subs = Vec::with_capacity(inst.arity());
                let mut height = 0;
                for p in &inst.prem {
                    match self.prove(p, depth - 1) {
                        Some(d) => {
                            height = height.max(d.height());
                            subs.push(d);
                        }
                        None if self.exhausted => return None,
                        None => continue 'instances,
                    }
                }
                let d = Derivation::rule(named.name.clone(), inst.id.clone(), goal.clone(), subs);
                return Some((d, height + 1));
            }
        }
        None
    }
}
