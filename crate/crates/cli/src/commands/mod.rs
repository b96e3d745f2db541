mod analysis;
mod ars;
mod nd;
mod proof;

use std::collections::BTreeSet;
use std::path::Path;

use proofkit_core::ands::{display_formula, encode_system, marker_pool, Ands, Encoding, Sequent};
use proofkit_core::format::{load_system, LoadedSystem};
use proofkit_core::{Aphs, Budget, Term, Universe};

use crate::report::{invalid, usage, Failure, Outcome};
use crate::{ArsCommand, Bounds, Command, NdCommand};

pub fn run(cmd: Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Check { system, derivation } => proof::check(&system, &derivation),
        Command::Prove { system, goal, assume, bounds, markers } => proof::prove(&system, &goal, &assume, bounds, markers),
        Command::Theorems { system, bounds, markers } => proof::theorems(&system, bounds, markers),
        Command::Classify { system, rule, bounds, markers } => analysis::classify(&system, &rule, bounds, markers),
        Command::Eliminate { system, rule, derivation, mimicry, strategy } => {
            analysis::eliminate(&system, &rule, &derivation, &mimicry, &strategy)
        }
        Command::Compare { first, second, bounds } => analysis::compare(&first, &second, bounds),
        Command::Audit { seed, samples, universe } => analysis::audit(seed, samples, universe),
        Command::Ars { command } => match command {
            ArsCommand::Relation { file } => ars::relation(&file),
            ArsCommand::Steps { file, from, to } => ars::steps(&file, &from, &to),
            ArsCommand::Reach { file, from, max_steps } => ars::reach(&file, &from, max_steps),
            ArsCommand::Expand { rule, sig, bound } => ars::expand(&rule, &sig, bound),
        },
        Command::Nd { command } => match command {
            NdCommand::Encode { system, output, universe, markers } => nd::encode(&system, output.as_deref(), universe, markers),
            NdCommand::Classify { system, rule, bounds, markers, no_weakening } => {
                nd::classify(&system, &rule, bounds, markers, !no_weakening)
            }
        },
    }
}

pub fn budget(b: Bounds) -> Result<Budget, Failure> {
    Budget::new(b.max_depth, b.universe, b.nodes).map_err(usage)
}

pub fn parse_term(s: &str) -> Result<Term, Failure> {
    s.parse().map_err(|e| usage(format!("cannot parse `{s}`: {e}")))
}

/// A system ready for search: Hilbert systems as they are, natural
/// deduction systems through their sequent encoding.
pub struct View {
    pub system: Aphs,
    pub universe: Universe,
    pub encoding: Option<Encoding>,
}

impl View {
    pub fn show(&self) -> fn(&Term) -> String {
        if self.encoding.is_some() {
            display_formula
        } else {
            |t: &Term| t.to_string()
        }
    }

    /// Reads a formula; in an encoded system `{A^m, ...} => B` or a bare
    /// formula, which stands for `{} => B`.
    pub fn formula(&self, s: &str) -> Result<Term, Failure> {
        let t = match &self.encoding {
            Some(_) => nd_formula(s)?,
            None => parse_term(s)?,
        };
        if !self.system.is_formula(&t) {
            return Err(invalid(format!("`{s}` is not a formula of the system")));
        }
        Ok(t)
    }
}

pub fn nd_formula(s: &str) -> Result<Term, Failure> {
    if s.contains("=>") {
        let seq: Sequent = s.parse().map_err(|e| usage(format!("cannot parse `{s}`: {e}")))?;
        Ok(seq.to_term())
    } else {
        Ok(Sequent::new(Default::default(), parse_term(s)?).to_term())
    }
}

/// Markers used in encoded formulas.
pub fn markers_in<'a>(terms: impl IntoIterator<Item = &'a Term>) -> BTreeSet<String> {
    terms
        .into_iter()
        .filter_map(Sequent::from_term)
        .flat_map(|s| s.antecedent.into_iter().map(|m| m.marker))
        .collect()
}

pub fn load(path: &Path) -> Result<LoadedSystem, Failure> {
    Ok(load_system(path)?)
}

pub fn load_aphs_only(path: &Path, command: &str) -> Result<Aphs, Failure> {
    match load(path)? {
        LoadedSystem::Aphs(s) => Ok(s),
        LoadedSystem::Ands(_) => {
            Err(usage(format!("{}: `{command}` needs a Hilbert system, this is a natural-deduction system", path.display())))
        }
    }
}

/// The encoding of `n` over its own markers, `fresh` new ones and `extra`.
pub fn encode(n: &Ands, fresh: usize, extra: &BTreeSet<String>, max_size: usize) -> Result<Encoding, Failure> {
    let mut markers = marker_pool(n, &[], fresh).map_err(invalid)?;
    for m in extra {
        if !markers.contains(m) {
            markers.push(m.clone());
        }
    }
    encode_system(n, markers, max_size).map_err(invalid)
}

pub fn view(sys: LoadedSystem, max_size: usize, fresh: usize, extra: &BTreeSet<String>) -> Result<View, Failure> {
    match sys {
        LoadedSystem::Aphs(s) => {
            let universe = s.universe(max_size);
            Ok(View { system: s, universe, encoding: None })
        }
        LoadedSystem::Ands(n) => {
            let e = encode(&n, fresh, extra, max_size)?;
            Ok(View { system: e.system.clone(), universe: e.universe(), encoding: Some(e) })
        }
    }
}
