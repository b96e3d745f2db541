//! Rules built from extensional descriptions, which cannot tell instances
//! with equal premises and conclusion apart.

use std::collections::{BTreeMap, BTreeSet};

use crate::aphs::{Instance, InstanceId, UnnamedRule, Universe};
use crate::term::Term;

/// A premise sequence and a conclusion.
pub type Inference = (Vec<Term>, Term);

/// One instance per entry. A partial function yields at most one
/// conclusion per premise sequence, so a rule inferring two conclusions
/// from the same premises needs two descriptions.
pub fn rule_from_partial_function(desc: &BTreeMap<Vec<Term>, Term>) -> UnnamedRule {
    let instances = desc
        .iter()
        .enumerate()
        .map(|(i, (p, c))| Instance::new(format!("{}", i + 1).as_str(), p.clone(), c.clone()))
        .collect();
    UnnamedRule::explicit(instances).expect("indices are distinct")
}

/// One instance per pair. A set holds each pair once, so two instances
/// with equal premises and conclusion cannot both be represented.
pub fn rule_from_relation(rel: &BTreeSet<Inference>) -> UnnamedRule {
    let instances = rel
        .iter()
        .enumerate()
        .map(|(i, (p, c))| Instance::new(format!("{}", i + 1).as_str(), p.clone(), c.clone()))
        .collect();
    UnnamedRule::explicit(instances).expect("indices are distinct")
}

/// The premise/conclusion pairs of the instances inside the universe.
pub fn extensionalize(r: &UnnamedRule, universe: &Universe) -> BTreeSet<Inference> {
    r.enumerate(universe)
        .instances
        .into_iter()
        .map(|i| (i.prem, i.concl))
        .collect()
}

/// Pairs of distinct instances sharing premises and conclusion, each pair
/// ordered and the list sorted.
pub fn intensional_duplicates(r: &UnnamedRule, universe: &Universe) -> Vec<(InstanceId, InstanceId)> {
    let mut groups: BTreeMap<Inference, Vec<InstanceId>> = BTreeMap::new();
    for i in r.enumerate(universe).instances {
        groups.entry((i.prem, i.concl)).or_default().push(i.id);
    }
    let mut out = Vec::new();
    for mut ids in groups.into_values() {
        ids.sort();
        for (k, a) in ids.iter().enumerate() {
            for b in &ids[k + 1..] {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out.sort();
    out
}
