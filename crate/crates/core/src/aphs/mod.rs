//! Abstract pure Hilbert systems: rules with first-class instances, named
//! systems, prooftrees, consequence and bounded proof search.
//!
//! Every decision is relative to a [`Universe`]: the formulas up to a size
//! bound and the rule instances whose formulas all lie inside it.

mod closure;
mod derivation;
mod rule;
mod search;
mod system;
mod universe;

pub use closure::{
    closure, closure_in, entails, entails_in, is_theorem, is_theorem_in, theorem_set, theorem_set_in, Closure,
    TheoremSet,
};
pub use derivation::{assumptions, check_derivation, conclusion, format_path, Defect, Derivation, Path};
pub use rule::{
    Enumeration, ExplicitRule, FactSet, Instance, InstanceId, InstanceSource, RuleBacking, RuleError, SchemeRule,
    UnnamedRule,
};
pub use search::{derives, derives_in, SearchOutcome};
pub use system::{validate_system, Aphs, NamedAxiom, NamedRule, SystemError, ValidationReport, Violation};
pub use universe::{Budget, BudgetError, FormulaSpace, TermSpace, Universe};
