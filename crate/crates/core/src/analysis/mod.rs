//! Derivability, correctness and admissibility of rules, the laws relating
//! them, comparison of systems and elimination of derivable rules.

mod adapters;
mod classify;
mod compare;
mod eliminate;
mod proposition;

pub use adapters::{extensionalize, intensional_duplicates, rule_from_partial_function, rule_from_relation, Inference};
pub use classify::{
    check_admissible, check_admissible_in, check_correct, check_correct_in, check_derivable, check_derivable_in,
    classify_rule, classify_rule_in, find_mimicking_derivation, find_mimicking_derivation_in, Derivability, RuleCheck,
    RuleStatus,
};
pub use compare::{compare_systems, CompareError, Comparison, EXHAUSTIVE_LIMIT};
pub use eliminate::{
    check_mimicry, eliminate_rule, translate_closed_derivation, EliminationError, EliminationStep, EliminationTrace,
    MimicryTable, Strategy, TranslateError,
};
pub use proposition::{
    premises_as_axioms, proposition_audit, random_extension, LawCheck, PropositionAudit, RefutingExtension,
};
