use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_admissible_in, check_derivable_in, classify_rule_in, RuleStatus};
use crate::aphs::{check_derivation, Aphs, Budget, NamedAxiom, NamedRule, UnnamedRule};
use crate::sample::{sample_explicit_rule, SampleConfig};
use crate::term::{Signature, Symbol, Term};

/// Outcome of one audited law on one rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawCheck {
    Holds,
    Violated,
    /// Some verdict involved was left open by the budget.
    Undecided,
    /// The premise of the law does not apply.
    NotApplicable,
}

/// What the search for a refuting extension found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "outcome")]
pub enum RefutingExtension {
    /// An extension where the rule is not admissible.
    Found { description: String },
    /// No refuting extension found; never read as admissible everywhere.
    Unknown,
    NotApplicable,
}

#[derive(Clone, Debug)]
pub struct PropositionAudit {
    pub status: RuleStatus,
    /// Admissible iff correct.
    pub admissible_iff_correct: LawCheck,
    /// Derivable implies admissible.
    pub derivable_implies_admissible: LawCheck,
    /// A derivable rule stays derivable, with the same witnesses, in
    /// sampled extensions.
    pub derivable_persists: LawCheck,
    pub extensions_checked: usize,
    /// For a non-derivable rule, an extension where it is not admissible.
    pub refuting_extension: RefutingExtension,
}

impl PropositionAudit {
    pub fn violations(&self) -> usize {
        [self.admissible_iff_correct, self.derivable_implies_admissible, self.derivable_persists]
            .iter()
            .filter(|c| **c == LawCheck::Violated)
            .count()
    }

    /// Admissible but certified not derivable.
    pub fn admissible_not_derivable(&self) -> bool {
        self.status.admissible.verdict.is_yes() && self.status.derivable.verdict.is_no()
    }
}

const FRESH_CONSTANTS: [&str; 3] = ["d", "e", "k"];

/// A random extension of `s`: a new constant, a new axiom and/or a new rule.
pub fn random_extension(s: &Aphs, b: Budget, rng: &mut impl Rng) -> (Aphs, String) {
    let mut ext = s.clone();
    let mut parts = Vec::new();
    let kinds = rng.gen_range(1..=7u8);
    if kinds & 1 != 0 {
        if let Some(name) = FRESH_CONSTANTS.iter().find(|n| !ext.signature().contains_symbol(n)) {
            let sig = Signature::new([Symbol::new(*name, 0)]).expect("one constant");
            ext = ext.with_signature(sig).expect("fresh symbol");
            parts.push(format!("formula {name}"));
        }
    }
    let terms = ext.universe(b.max_universe_size).terms();
    if kinds & 2 != 0 {
        let t = terms.choose(rng).expect("nonempty").clone();
        let name = ext.fresh_name("ext_ax");
        ext = ext.with_axiom(NamedAxiom::ground(name.clone(), &t)).expect("fresh name");
        parts.push(format!("axiom {name}: {t}"));
    }
    if kinds & 4 != 0 {
        let cfg = SampleConfig::default();
        let r = sample_explicit_rule(rng, &terms, &cfg, true);
        let name = ext.fresh_name("ext_r");
        parts.push(format!("rule {name} ({} instances)", r.enumerate(&ext.universe(b.max_universe_size)).instances.len()));
        ext = ext.extend_with_rule(NamedRule::new(name, r)).expect("fresh name");
    }
    (ext, parts.join(", "))
}

/// The extension adding the premises of `prem` as axioms.
pub fn premises_as_axioms(s: &Aphs, prem: &[Term]) -> Aphs {
    let mut ext = s.clone();
    for p in prem {
        let name = ext.fresh_name("hyp");
        ext = ext.with_axiom(NamedAxiom::ground(name, p)).expect("fresh name");
    }
    ext
}

/// Checks the four laws relating derivability, correctness and
/// admissibility of `r` in `s`, sampling `extension_samples` extensions.
pub fn proposition_audit(s: &Aphs, r: &UnnamedRule, b: Budget, extension_samples: usize, seed: u64) -> PropositionAudit {
    let u = s.universe(b.max_universe_size);
    let status = classify_rule_in(s, &u, r, b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let admissible_iff_correct = match (status.admissible.verdict.decided(), status.correct.verdict.decided()) {
        (Some(a), Some(c)) if a == c => LawCheck::Holds,
        (Some(_), Some(_)) => LawCheck::Violated,
        _ => LawCheck::Undecided,
    };
    let derivable_implies_admissible = if !status.derivable.verdict.is_yes() {
        LawCheck::NotApplicable
    } else {
        match status.admissible.verdict.decided() {
            Some(true) => LawCheck::Holds,
            Some(false) => LawCheck::Violated,
            None => LawCheck::Undecided,
        }
    };

    let mut derivable_persists = LawCheck::NotApplicable;
    let mut extensions_checked = 0;
    if status.derivable.verdict.is_yes() {
        derivable_persists = LawCheck::Holds;
        for _ in 0..extension_samples {
            let (ext, _) = random_extension(s, b, &mut rng);
            extensions_checked += 1;
            let witnesses_hold = status.derivable.witnesses.iter().all(|(id, d)| {
                let inst = r.instance(id).expect("witness for an instance");
                check_derivation(&ext, d).is_ok()
                    && d.conclusion() == &inst.concl
                    && d.assumptions().is_subset(&inst.premise_set())
            });
            let again = check_derivable_in(&ext, &ext.universe(b.max_universe_size), r, b).verdict;
            if !witnesses_hold || again.is_no() {
                derivable_persists = LawCheck::Violated;
                break;
            }
            if again.is_unknown() {
                derivable_persists = LawCheck::Undecided;
            }
        }
    }

    let refuting_extension = if !status.derivable.verdict.is_no() {
        RefutingExtension::NotApplicable
    } else {
        find_refuting_extension(s, r, b, &status, extension_samples, &mut rng)
    };

    PropositionAudit {
        status,
        admissible_iff_correct,
        derivable_implies_admissible,
        derivable_persists,
        extensions_checked,
        refuting_extension,
    }
}

fn find_refuting_extension(
    s: &Aphs,
    r: &UnnamedRule,
    b: Budget,
    status: &RuleStatus,
    samples: usize,
    rng: &mut impl Rng,
) -> RefutingExtension {
    let refutes = |ext: &Aphs| check_admissible_in(ext, &ext.universe(b.max_universe_size), r, b).verdict.is_no();
    if let Some(ce) = &status.derivable.counterexample {
        // the premises of an underivable instance, taken as axioms, make
        // its conclusion reachable only through the rule
        let ext = premises_as_axioms(s, &ce.prem);
        if refutes(&ext) {
            let prem: Vec<String> = ce.prem.iter().map(|p| p.to_string()).collect();
            return RefutingExtension::Found { description: format!("axioms {{{}}}", prem.join(", ")) };
        }
    }
    for _ in 0..samples {
        let (ext, description) = random_extension(s, b, rng);
        if refutes(&ext) {
            return RefutingExtension::Found { description };
        }
    }
    RefutingExtension::Unknown
}
