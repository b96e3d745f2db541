//! Command results and how they map to output and exit codes.

use std::fmt::Write;

use proofkit_core::format::{derivation_to_doc, LoadError};
use proofkit_core::{Derivation, Verdict};
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_UNKNOWN: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

/// What a command prints and how it exits.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Outcome {
    pub fn new(text: String, json: Value, code: u8) -> Self {
        Outcome { text, json, code }
    }
}

/// A command that could not run: bad usage or invalid input.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Invalid(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Invalid(_) => EXIT_REFUTED,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invalid(m) => m,
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io { .. } => Failure::Usage(e.to_string()),
            LoadError::Invalid { .. } => Failure::Invalid(e.to_string()),
        }
    }
}

pub fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

pub fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

pub fn verdict_code<W>(v: &Verdict<W>) -> u8 {
    match v {
        Verdict::Yes(_) => EXIT_OK,
        Verdict::No => EXIT_REFUTED,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

/// Worst of several codes, ordered ok < unknown < refuted.
pub fn combine(codes: impl IntoIterator<Item = u8>) -> u8 {
    codes.into_iter().max_by_key(|c| match *c {
        EXIT_OK => 0,
        EXIT_UNKNOWN => 1,
        _ => 2,
    })
    .unwrap_or(EXIT_OK)
}

pub fn derivation_json(d: &Derivation) -> Value {
    serde_json::to_value(derivation_to_doc(d)).expect("derivation documents serialize")
}

pub fn tree(d: &Derivation, show: &dyn Fn(&proofkit_core::Term) -> String) -> String {
    indented_tree(d, show, 2)
}

pub fn indented_tree(d: &Derivation, show: &dyn Fn(&proofkit_core::Term) -> String, indent: usize) -> String {
    let pad = " ".repeat(indent);
    let mut out = String::new();
    for line in d.pretty_with(show).lines() {
        let _ = writeln!(out, "{pad}{line}");
    }
    out
}

pub fn string_list<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    json!(items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>())
}
