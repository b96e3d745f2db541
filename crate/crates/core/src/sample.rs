//! Seeded random finite systems and rules small enough for exact oracles.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::aphs::{Aphs, Budget, Instance, NamedAxiom, NamedRule, UnnamedRule};
use crate::term::{enumerate_terms, Signature, Symbol, Term};

/// Shape limits for sampled systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    /// At most this many symbols, each of arity 0 or 1.
    pub max_symbols: usize,
    /// The size bound is the largest one keeping the universe this small.
    pub max_universe_terms: usize,
    pub max_axioms: usize,
    pub max_rules: usize,
    pub max_instances: usize,
    pub max_premises: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            max_symbols: 3,
            max_universe_terms: 8,
            max_axioms: 3,
            max_rules: 3,
            max_instances: 4,
            max_premises: 2,
        }
    }
}

impl SampleConfig {
    pub fn with_universe_terms(self, n: usize) -> Self {
        SampleConfig { max_universe_terms: n, ..self }
    }
}

/// A sampled system with the budget its universe calls for.
#[derive(Clone, Debug)]
pub struct SampledSystem {
    pub system: Aphs,
    pub budget: Budget,
    pub terms: Vec<Term>,
}

const CONSTANTS: [&str; 3] = ["a", "b", "c"];
const UNARY: [&str; 2] = ["f", "g"];

pub fn sample_signature(rng: &mut impl Rng, cfg: &SampleConfig) -> Signature {
    let n = rng.gen_range(1..=cfg.max_symbols.max(1));
    let mut syms = vec![Symbol::new("a", 0)];
    let (mut consts, mut unary) = (1, 0);
    while syms.len() < n {
        if unary < UNARY.len() && rng.gen_bool(0.5) {
            syms.push(Symbol::new(UNARY[unary], 1));
            unary += 1;
        } else if consts < CONSTANTS.len() {
            syms.push(Symbol::new(CONSTANTS[consts], 0));
            consts += 1;
        } else {
            break;
        }
    }
    Signature::new(syms).expect("distinct names and a constant")
}

/// The largest size bound whose universe has at most `max_terms` terms
/// (at least 1, at most `max_terms`).
pub fn size_bound(sig: &Signature, max_terms: usize) -> usize {
    let mut bound = 1;
    for n in 2..=max_terms.max(1) {
        if enumerate_terms(sig, n).len() <= max_terms {
            bound = n;
        } else {
            break;
        }
    }
    bound
}

pub fn sample_instance(rng: &mut impl Rng, id: &str, terms: &[Term], max_premises: usize, allow_axiomlike: bool) -> Instance {
    let lo = usize::from(!allow_axiomlike);
    // one premise is the most common shape
    let arity = match rng.gen_range(0..6) {
        0 => lo,
        1 | 2 | 3 => 1.max(lo),
        _ => max_premises.max(lo),
    }
    .min(max_premises.max(lo));
    let prem = (0..arity).map(|_| terms.choose(rng).expect("nonempty").clone()).collect();
    Instance::new(id, prem, terms.choose(rng).expect("nonempty").clone())
}

pub fn sample_explicit_rule(rng: &mut impl Rng, terms: &[Term], cfg: &SampleConfig, allow_axiomlike: bool) -> UnnamedRule {
    let k = rng.gen_range(1..=cfg.max_instances.max(1));
    let instances = (1..=k)
        .map(|i| sample_instance(rng, &i.to_string(), terms, cfg.max_premises, allow_axiomlike))
        .collect();
    UnnamedRule::explicit(instances).expect("distinct ids")
}

pub fn sample_system(rng: &mut impl Rng, cfg: &SampleConfig) -> SampledSystem {
    let sig = sample_signature(rng, cfg);
    let bound = size_bound(&sig, cfg.max_universe_terms);
    let terms = enumerate_terms(&sig, bound);
    let n_ax = rng.gen_range(0..=cfg.max_axioms);
    let axioms = (1..=n_ax)
        .map(|i| NamedAxiom::ground(format!("ax{i}"), terms.choose(rng).expect("nonempty")))
        .collect();
    let n_rules = rng.gen_range(0..=cfg.max_rules);
    let rules = (1..=n_rules)
        .map(|i| NamedRule::new(format!("r{i}"), sample_explicit_rule(rng, &terms, cfg, true)))
        .collect();
    let system = Aphs::new(sig, axioms, rules);
    let budget = Budget::new(terms.len() + 1, bound, 200_000).expect("positive");
    SampledSystem { system, budget, terms }
}

/// A rule to classify against a sampled system; mostly premise-bearing.
pub fn sample_rule(rng: &mut impl Rng, sampled: &SampledSystem, cfg: &SampleConfig) -> UnnamedRule {
    let axiomlike = rng.gen_bool(0.1);
    sample_explicit_rule(rng, &sampled.terms, cfg, axiomlike)
}
