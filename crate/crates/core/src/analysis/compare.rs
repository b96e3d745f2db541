use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{check_admissible_in, check_derivable_in};
use crate::aphs::{closure_in, theorem_set_in, Aphs, Budget, UnnamedRule, Universe};
use crate::term::Term;
use crate::verdict::Verdict;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CompareError {
    #[error("systems have different signatures: {0} and {1}")]
    SignatureMismatch(String, String),
}

/// How two systems over the same formulas relate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub same_theorems: Verdict,
    pub same_consequence: Verdict,
    pub mutually_admissible: Verdict,
    pub mutually_derivable: Verdict,
    /// An assumption set and formula on which the consequence relations differ.
    pub consequence_witness: Option<(BTreeSet<Term>, Term)>,
    /// Whether every assumption subset of the universe was tried.
    pub consequence_exhaustive: bool,
    /// Decided pairs of notions that should agree but do not.
    pub discrepancies: Vec<String>,
}

/// Subset universes up to this many formulas are compared exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 12;
const SAMPLED_SUBSETS: usize = 512;

/// Axioms and rules of `s`, axioms read as 0-premise rules.
fn rules_of(s: &Aphs) -> Vec<UnnamedRule> {
    s.axioms()
        .iter()
        .map(|a| UnnamedRule::scheme(Vec::new(), a.formula.clone()))
        .chain(s.rules().iter().map(|r| r.rule.clone()))
        .collect()
}

fn all_admissible(from: &Aphs, into: &Aphs, u: &Universe, b: Budget) -> Verdict {
    Verdict::all(rules_of(from).iter().map(|r| check_admissible_in(into, u, r, b).verdict))
}

fn all_derivable(from: &Aphs, into: &Aphs, u: &Universe, b: Budget) -> Verdict {
    Verdict::all(rules_of(from).iter().map(|r| check_derivable_in(into, u, r, b).verdict))
}

pub fn compare_systems(s1: &Aphs, s2: &Aphs, b: Budget) -> Result<Comparison, CompareError> {
    if s1.signature() != s2.signature() {
        return Err(CompareError::SignatureMismatch(s1.signature().to_string(), s2.signature().to_string()));
    }
    let u = s1.universe(b.max_universe_size);

    let t1 = theorem_set_in(s1, &u, b);
    let t2 = theorem_set_in(s2, &u, b);
    let same_theorems = if (t1.saturated && !t2.theorems.is_subset(&t1.theorems))
        || (t2.saturated && !t1.theorems.is_subset(&t2.theorems))
    {
        Verdict::No
    } else if t1.saturated && t2.saturated {
        Verdict::Yes(())
    } else {
        Verdict::Unknown
    };

    let mutually_admissible = Verdict::all([all_admissible(s1, s2, &u, b), all_admissible(s2, s1, &u, b)]);
    let mutually_derivable = Verdict::all([all_derivable(s1, s2, &u, b), all_derivable(s2, s1, &u, b)]);

    let (same_consequence, consequence_witness, consequence_exhaustive) = compare_consequence(s1, s2, &u, b);

    let mut discrepancies = Vec::new();
    let mut agree = |name: &str, x: &Verdict, y: &Verdict| {
        if let (Some(p), Some(q)) = (x.decided(), y.decided()) {
            if p != q {
                discrepancies.push(format!("{name}: {x} vs {y}"));
            }
        }
    };
    agree("same theorems / mutual admissibility", &same_theorems, &mutually_admissible);
    agree("same consequence / mutual derivability", &same_consequence, &mutually_derivable);

    Ok(Comparison {
        same_theorems,
        same_consequence,
        mutually_admissible,
        mutually_derivable,
        consequence_witness,
        consequence_exhaustive,
        discrepancies,
    })
}

/// Compares the closures of assumption sets: every subset of a small
/// universe, otherwise the premise sets of both systems' rule instances
/// plus seeded random subsets. A difference is certified only when the
/// smaller closure saturated.
fn compare_consequence(
    s1: &Aphs,
    s2: &Aphs,
    u: &Universe,
    b: Budget,
) -> (Verdict, Option<(BTreeSet<Term>, Term)>, bool) {
    let terms = u.terms();
    let exhaustive = terms.len() <= EXHAUSTIVE_LIMIT;
    let mut candidates: Vec<BTreeSet<Term>> = Vec::new();
    if exhaustive {
        for mask in 0u32..(1u32 << terms.len()) {
            candidates.push(
                terms.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, t)| t.clone()).collect(),
            );
        }
    } else {
        let mut seen = BTreeSet::new();
        for s in [s1, s2] {
            for r in s.rules() {
                for inst in r.rule.enumerate(u).instances {
                    let g = inst.premise_set();
                    if seen.insert(g.clone()) {
                        candidates.push(g);
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..SAMPLED_SUBSETS {
            let k = rng.gen_range(0..=3.min(terms.len()));
            let g: BTreeSet<Term> = (0..k).map(|_| terms[rng.gen_range(0..terms.len())].clone()).collect();
            if seen.insert(g.clone()) {
                candidates.push(g);
            }
        }
    }
    let mut all_saturated = true;
    for g in candidates {
        let c1 = closure_in(s1, u, &g, b);
        let c2 = closure_in(s2, u, &g, b);
        all_saturated &= c1.saturated() && c2.saturated();
        let f1 = c1.facts();
        let f2 = c2.facts();
        if c1.saturated() {
            if let Some(x) = f2.difference(&f1).next() {
                return (Verdict::No, Some((g, x.clone())), exhaustive);
            }
        }
        if c2.saturated() {
            if let Some(x) = f1.difference(&f2).next() {
                return (Verdict::No, Some((g, x.clone())), exhaustive);
            }
        }
    }
    let verdict = if exhaustive && all_saturated { Verdict::Yes(()) } else { Verdict::Unknown };
    (verdict, None, exhaustive)
}
