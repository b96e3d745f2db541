//! Randomized audit of the laws relating derivability, correctness and
//! admissibility, system comparison and rule elimination over sampled
//! finite systems.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    compare_systems, eliminate_rule, proposition_audit, LawCheck, MimicryTable, RefutingExtension, Strategy,
};
use crate::aphs::{check_derivation, Aphs, Derivation, NamedRule, UnnamedRule, Universe};
use crate::sample::{sample_rule, sample_system, SampleConfig};
use crate::term::Term;

/// Extensions sampled per rule for the persistence and refutation checks.
pub const EXTENSION_SAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawTally {
    pub holds: usize,
    pub violated: usize,
    pub undecided: usize,
    pub not_applicable: usize,
}

impl LawTally {
    fn add(&mut self, c: LawCheck) {
        match c {
            LawCheck::Holds => self.holds += 1,
            LawCheck::Violated => self.violated += 1,
            LawCheck::Undecided => self.undecided += 1,
            LawCheck::NotApplicable => self.not_applicable += 1,
        }
    }

    pub fn decided(&self) -> usize {
        self.holds + self.violated
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonRecord {
    pub same_theorems: &'static str,
    pub same_consequence: &'static str,
    pub mutually_admissible: &'static str,
    pub mutually_derivable: &'static str,
    pub discrepancies: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationRun {
    pub strategy: String,
    pub steps: usize,
    /// Result valid in the base system, same conclusion, no new assumptions.
    pub sound: bool,
    /// Occurrence-height multiset decreased at every step.
    pub measure_decreases: bool,
    /// Occurrence count dropped by exactly one at every step.
    pub count_decreases_by_one: bool,
    pub steps_equal_initial_count: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationRecord {
    pub initial_count: usize,
    pub runs: Vec<EliminationRun>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub index: usize,
    pub signature: String,
    pub universe_terms: usize,
    pub axioms: usize,
    pub rules: usize,
    pub rule_instances: usize,
    pub derivable: &'static str,
    pub correct: &'static str,
    pub admissible: &'static str,
    pub admissible_iff_correct: LawCheck,
    pub derivable_implies_admissible: LawCheck,
    pub derivable_persists: LawCheck,
    pub refuting_extension: RefutingExtension,
    pub comparison: ComparisonRecord,
    pub elimination: Option<EliminationRecord>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RefutationTally {
    /// Admissible, certified not derivable.
    pub candidates: usize,
    pub refuted: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComparisonTally {
    pub pairs: usize,
    pub theorems_decided: usize,
    pub consequence_decided: usize,
    pub discrepancies: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EliminationTally {
    pub cases: usize,
    pub runs: usize,
    pub unsound: usize,
    pub measure_failures: usize,
    pub step_count_mismatches: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub seed: u64,
    pub samples: usize,
    pub max_universe_terms: usize,
    pub admissible_iff_correct: LawTally,
    pub derivable_implies_admissible: LawTally,
    pub derivable_persists: LawTally,
    pub refutation: RefutationTally,
    pub comparison: ComparisonTally,
    pub elimination: EliminationTally,
    /// Violated laws, comparison discrepancies and unsound eliminations.
    pub violations: usize,
    pub items: Vec<SampleRecord>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// A short human-readable summary.
    pub fn summary(&self) -> String {
        let t = |x: &LawTally| format!("{} hold, {} violated, {} undecided", x.holds, x.violated, x.undecided);
        [
            format!("seed {} samples {} universe <= {} terms", self.seed, self.samples, self.max_universe_terms),
            format!("admissible iff correct: {}", t(&self.admissible_iff_correct)),
            format!("derivable implies admissible: {}", t(&self.derivable_implies_admissible)),
            format!("derivable persists in extensions: {}", t(&self.derivable_persists)),
            format!(
                "admissible but not derivable: {}, refuted by an extension: {}, unknown: {}",
                self.refutation.candidates, self.refutation.refuted, self.refutation.unknown
            ),
            format!(
                "system pairs: {}, theorems decided: {}, consequence decided: {}, discrepancies: {}",
                self.comparison.pairs,
                self.comparison.theorems_decided,
                self.comparison.consequence_decided,
                self.comparison.discrepancies
            ),
            format!(
                "eliminations: {} cases, {} runs, {} unsound, {} measure failures, {} step-count mismatches",
                self.elimination.cases,
                self.elimination.runs,
                self.elimination.unsound,
                self.elimination.measure_failures,
                self.elimination.step_count_mismatches
            ),
            format!("violations: {}", self.violations),
        ]
        .join("\n")
    }
}

/// The generator for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// A random derivation in `ext` rooted at an instance of `rule_name`,
/// nesting further instances of it above premises where possible.
pub fn random_rule_derivation(
    ext: &Aphs,
    rule_name: &str,
    universe: &Universe,
    depth: usize,
    rng: &mut impl Rng,
) -> Option<Derivation> {
    let rule = &ext.rule(rule_name)?.rule;
    let all = rule.enumerate(universe).instances;
    let root = all.choose(rng)?.clone();
    fn grow(
        goal: &Term,
        rule_name: &str,
        rule: &UnnamedRule,
        universe: &Universe,
        depth: usize,
        rng: &mut impl Rng,
    ) -> Derivation {
        let options = rule.concluding(goal, universe);
        if depth > 0 && !options.is_empty() && rng.gen_bool(0.7) {
            let inst = options.choose(rng).expect("nonempty").clone();
            let subs = inst.prem.iter().map(|p| grow(p, rule_name, rule, universe, depth - 1, rng)).collect();
            Derivation::rule(rule_name, inst.id, goal.clone(), subs)
        } else {
            Derivation::assume(goal.clone())
        }
    }
    let subs = root.prem.iter().map(|p| grow(p, rule_name, rule, universe, depth, rng)).collect();
    Some(Derivation::rule(rule_name, root.id, root.concl, subs))
}

fn run_eliminations(base: &Aphs, r: &NamedRule, d: &Derivation, m: &MimicryTable, seed: u64) -> EliminationRecord {
    let strategies = [Strategy::LeftmostInnermost, Strategy::LeftmostOutermost, Strategy::Random(seed)];
    let runs = strategies
        .iter()
        .map(|&st| match eliminate_rule(base, r, d, m, st) {
            Ok(trace) => {
                let sound = check_derivation(base, &trace.result).is_ok()
                    && trace.result.conclusion() == d.conclusion()
                    && trace.result.assumptions().is_subset(&d.assumptions())
                    && !trace.result.uses_rule(&r.name);
                EliminationRun {
                    strategy: st.to_string(),
                    steps: trace.step_count(),
                    sound,
                    measure_decreases: trace.measure_strictly_decreases(),
                    count_decreases_by_one: trace.count_decreases_by_one(),
                    steps_equal_initial_count: trace.step_count() == trace.initial_count,
                }
            }
            Err(_) => EliminationRun {
                strategy: st.to_string(),
                steps: 0,
                sound: false,
                measure_decreases: false,
                count_decreases_by_one: false,
                steps_equal_initial_count: false,
            },
        })
        .collect();
    EliminationRecord { initial_count: d.rule_count(&r.name), runs }
}

/// Audits one sample.
pub fn audit_sample(seed: u64, index: usize, cfg: &SampleConfig) -> SampleRecord {
    let mut rng = sample_rng(seed, index);
    let sampled = sample_system(&mut rng, cfg);
    let r = sample_rule(&mut rng, &sampled, cfg);
    let s = &sampled.system;
    let b = sampled.budget;
    let audit = proposition_audit(s, &r, b, EXTENSION_SAMPLES, rng.gen());
    let u = s.universe(b.max_universe_size);

    let named = NamedRule::new(s.fresh_name("R"), r.clone());
    let ext = s.extend_with_rule(named.clone()).expect("fresh name");
    let cmp = compare_systems(s, &ext, b).expect("same signature");
    let comparison = ComparisonRecord {
        same_theorems: cmp.same_theorems.as_str(),
        same_consequence: cmp.same_consequence.as_str(),
        mutually_admissible: cmp.mutually_admissible.as_str(),
        mutually_derivable: cmp.mutually_derivable.as_str(),
        discrepancies: cmp.discrepancies,
    };

    let elimination = if audit.status.derivable.verdict.is_yes() {
        let ext_u = ext.universe(b.max_universe_size);
        random_rule_derivation(&ext, &named.name, &ext_u, 2, &mut rng)
            .map(|d| run_eliminations(s, &named, &d, &audit.status.derivable.witnesses, rng.gen()))
    } else {
        None
    };

    SampleRecord {
        index,
        signature: s.signature().to_string(),
        universe_terms: u.len(),
        axioms: s.axioms().len(),
        rules: s.rules().len(),
        rule_instances: audit.status.derivable.instances,
        derivable: audit.status.derivable.verdict.as_str(),
        correct: audit.status.correct.verdict.as_str(),
        admissible: audit.status.admissible.verdict.as_str(),
        admissible_iff_correct: audit.admissible_iff_correct,
        derivable_implies_admissible: audit.derivable_implies_admissible,
        derivable_persists: audit.derivable_persists,
        refuting_extension: audit.refuting_extension.clone(),
        comparison,
        elimination,
    }
}

/// Audits `samples` seeded samples in parallel; records come back in
/// sample order, so the report depends only on the arguments.
pub fn run_audit(seed: u64, samples: usize, max_universe_terms: usize) -> AuditReport {
    let cfg = SampleConfig::default().with_universe_terms(max_universe_terms);
    let items: Vec<SampleRecord> = (0..samples).into_par_iter().map(|i| audit_sample(seed, i, &cfg)).collect();

    let mut report = AuditReport {
        seed,
        samples,
        max_universe_terms,
        admissible_iff_correct: LawTally::default(),
        derivable_implies_admissible: LawTally::default(),
        derivable_persists: LawTally::default(),
        refutation: RefutationTally::default(),
        comparison: ComparisonTally::default(),
        elimination: EliminationTally::default(),
        violations: 0,
        items: Vec::new(),
    };
    for it in &items {
        report.admissible_iff_correct.add(it.admissible_iff_correct);
        report.derivable_implies_admissible.add(it.derivable_implies_admissible);
        report.derivable_persists.add(it.derivable_persists);
        if it.admissible == "yes" && it.derivable == "no" {
            report.refutation.candidates += 1;
            match it.refuting_extension {
                RefutingExtension::Found { .. } => report.refutation.refuted += 1,
                _ => report.refutation.unknown += 1,
            }
        }
        let c = &it.comparison;
        report.comparison.pairs += 1;
        if c.same_theorems != "unknown" && c.mutually_admissible != "unknown" {
            report.comparison.theorems_decided += 1;
        }
        if c.same_consequence != "unknown" && c.mutually_derivable != "unknown" {
            report.comparison.consequence_decided += 1;
        }
        report.comparison.discrepancies += c.discrepancies.len();
        if let Some(e) = &it.elimination {
            report.elimination.cases += 1;
            for run in &e.runs {
                report.elimination.runs += 1;
                report.elimination.unsound += usize::from(!run.sound);
                report.elimination.measure_failures += usize::from(!run.measure_decreases);
                report.elimination.step_count_mismatches += usize::from(!run.steps_equal_initial_count);
            }
        }
    }
    report.violations = report.admissible_iff_correct.violated
        + report.derivable_implies_admissible.violated
        + report.derivable_persists.violated
        + report.comparison.discrepancies
        + report.elimination.unsound
        + report.elimination.measure_failures;
    report.items = items;
    report
}
