//! Abstract rewriting systems, abstract pure Hilbert systems and abstract
//! natural-deduction systems with first-class rule instances, together with
//! bounded decision procedures for rule derivability, correctness and
//! admissibility.

pub mod analysis;
pub mod ands;
pub mod aphs;
pub mod ars;
pub mod audit;
pub mod corpus;
pub mod format;
pub mod term;
pub mod sample;
pub mod verdict;

pub use aphs::{
    check_derivation, derives, is_theorem, theorem_set, validate_system, Aphs, Budget, Derivation, Instance,
    InstanceId, NamedAxiom, NamedRule, UnnamedRule, Universe,
};
pub use term::{Scheme, Signature, Substitution, Term};
pub use verdict::Verdict;
