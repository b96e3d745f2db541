//! JSON file formats for systems, rules, derivations, mimicry tables,
//! abstract rewriting systems and signatures.
//!
//! Loading reports every problem it finds as a [`Diagnostic`] with a field
//! path (`rules[1].instances[0].concl`) or a line and column.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::MimicryTable;
use crate::ands::{validate_ands, Ands, AndsInstance, AndsRule, Context, FamilyKind, MarkedAssumption, NamedAndsRule};
use crate::aphs::{validate_system, Aphs, Derivation, Instance, NamedAxiom, NamedRule, RuleBacking, UnnamedRule, Violation};
use crate::ars::{Ars, ArsStep};
use crate::term::{parse_scheme, parse_term, Scheme, Signature, Term};

/// One problem in an input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl Diagnostic {
    fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { location: location.into(), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.location.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.location, self.message)
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{source_name}: {error}")]
    Io { source_name: String, error: std::io::Error },
    #[error("{}", render(source_name, diagnostics))]
    Invalid { source_name: String, diagnostics: Vec<Diagnostic> },
}

impl LoadError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            LoadError::Io { .. } => &[],
            LoadError::Invalid { diagnostics, .. } => diagnostics,
        }
    }
}

fn render(source_name: &str, diagnostics: &[Diagnostic]) -> String {
    diagnostics.iter().map(|d| format!("{source_name}: {d}")).collect::<Vec<_>>().join("\n")
}

fn invalid(source_name: &str, diagnostics: Vec<Diagnostic>) -> LoadError {
    LoadError::Invalid { source_name: source_name.to_string(), diagnostics }
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|error| LoadError::Io { source_name: path.display().to_string(), error })
}

fn decode<T: DeserializeOwned>(source_name: &str, text: &str) -> Result<T, LoadError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let location = if path.is_empty() || path == "." {
            format!("line {} column {}", inner.line(), inner.column())
        } else {
            format!("{path} (line {} column {})", inner.line(), inner.column())
        };
        invalid(source_name, vec![Diagnostic::new(location, strip_position(&inner.to_string()))])
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

// ---------------------------------------------------------------------------
// documents

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// `"aphs"` or `"ands"`; inferred when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    pub signature: Vec<String>,
    #[serde(default)]
    pub axioms: Vec<AxiomDoc>,
    #[serde(default)]
    pub rules: Vec<RuleDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomDoc {
    pub name: String,
    pub formula: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// `"explicit"`, `"scheme"` or `"family"`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<Vec<InstanceDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prem: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concl: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imp: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub id: String,
    pub prem: Vec<String>,
    pub concl: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmassm: Option<Vec<Vec<MarkedDoc>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dmassm: Option<Vec<MarkedDoc>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkedDoc {
    pub formula: String,
    pub marker: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DerivationDoc {
    Axiom { name: String, formula: String },
    Assume { formula: String },
    Rule {
        rule: String,
        instance: String,
        formula: String,
        #[serde(default)]
        premises: Vec<DerivationDoc>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArsDoc {
    pub objects: Vec<String>,
    #[serde(default)]
    pub steps: Vec<StepDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignatureDoc {
    Object { signature: Vec<String> },
    List(Vec<String>),
}

// ---------------------------------------------------------------------------
// conversion helpers

struct Ctx<'a> {
    diags: Vec<Diagnostic>,
    sig: Option<&'a Signature>,
}

impl<'a> Ctx<'a> {
    fn new(sig: Option<&'a Signature>) -> Self {
        Ctx { diags: Vec::new(), sig }
    }

    fn err(&mut self, at: impl Into<String>, msg: impl Into<String>) {
        self.diags.push(Diagnostic::new(at, msg));
    }

    fn term(&mut self, at: &str, s: &str) -> Option<Term> {
        match parse_term(s) {
            Err(e) => self.err(at, format!("`{s}`: {e}")),
            Ok(t) => match self.sig.map(|sig| sig.check(&t)) {
                Some(Err(e)) => self.err(at, format!("`{s}`: {e}")),
                _ => return Some(t),
            },
        }
        None
    }

    fn scheme(&mut self, at: &str, s: &str) -> Option<Scheme> {
        match parse_scheme(s) {
            Err(e) => self.err(at, format!("`{s}`: {e}")),
            Ok(sc) => match self.sig.map(|sig| sc.check(sig)) {
                Some(Err(e)) => self.err(at, format!("`{s}`: {e}")),
                _ => return Some(sc),
            },
        }
        None
    }

    fn terms(&mut self, at: &str, xs: &[String]) -> Option<Vec<Term>> {
        let out: Vec<Option<Term>> = xs.iter().enumerate().map(|(i, x)| self.term(&format!("{at}[{i}]"), x)).collect();
        out.into_iter().collect()
    }

    fn finish<T>(self, source_name: &str, value: Option<T>) -> Result<T, LoadError> {
        match value {
            Some(v) if self.diags.is_empty() => Ok(v),
            _ => Err(invalid(source_name, self.diags)),
        }
    }
}

fn parse_signature_list(decls: &[String], at: &str) -> Result<Signature, Diagnostic> {
    Signature::parse(decls.iter().map(String::as_str)).map_err(|e| Diagnostic::new(at, e.to_string()))
}

// ---------------------------------------------------------------------------
// systems

/// A loaded proof system of either kind.
#[derive(Clone, Debug)]
pub enum LoadedSystem {
    Aphs(Aphs),
    Ands(Ands),
}

fn is_ands_doc(doc: &SystemDoc) -> bool {
    match doc.system.as_deref() {
        Some(k) => k == "ands",
        None => doc.rules.iter().any(|r| {
            r.kind == "family"
                || r.instances.iter().flatten().any(|i| i.pmassm.is_some() || i.dmassm.is_some())
        }),
    }
}

fn rule_location(doc: &SystemDoc, name: &str, last: bool) -> String {
    let mut idx = doc.rules.iter().enumerate().filter(|(_, r)| r.name.as_deref() == Some(name)).map(|(i, _)| i);
    let i = if last { idx.last() } else { idx.next() };
    i.map_or_else(|| "rules".to_string(), |i| format!("rules[{i}]"))
}

fn violation_diagnostic(doc: &SystemDoc, v: &Violation) -> Diagnostic {
    let location = match v {
        Violation::AxiomRuleNameClash { name } => rule_location(doc, name, false),
        Violation::DuplicateRuleName { name } => rule_location(doc, name, true),
        Violation::MalformedRule { name, .. } => rule_location(doc, name, false),
        Violation::MalformedAxiom { name, .. } => doc
            .axioms
            .iter()
            .position(|a| &a.name == name)
            .map_or_else(|| "axioms".to_string(), |i| format!("axioms[{i}]")),
    };
    Diagnostic::new(location, v.to_string())
}

fn convert_axioms(ctx: &mut Ctx, doc: &SystemDoc) -> Vec<NamedAxiom> {
    doc.axioms
        .iter()
        .enumerate()
        .filter_map(|(i, a)| ctx.scheme(&format!("axioms[{i}].formula"), &a.formula).map(|f| NamedAxiom::new(a.name.clone(), f)))
        .collect()
}

fn convert_aphs_rule(ctx: &mut Ctx, at: &str, r: &RuleDoc) -> Option<UnnamedRule> {
    match r.kind.as_str() {
        "explicit" => {
            let Some(insts) = &r.instances else {
                ctx.err(at, "explicit rule needs `instances`");
                return None;
            };
            let mut out = Vec::new();
            let mut seen = BTreeSet::new();
            for (j, inst) in insts.iter().enumerate() {
                let iat = format!("{at}.instances[{j}]");
                if inst.pmassm.is_some() || inst.dmassm.is_some() {
                    ctx.err(&iat, "marked assumptions are only allowed in natural-deduction systems");
                }
                if !seen.insert(inst.id.clone()) {
                    ctx.err(format!("{iat}.id"), format!("duplicate instance id `{}`", inst.id));
                }
                let prem = ctx.terms(&format!("{iat}.prem"), &inst.prem);
                let concl = ctx.term(&format!("{iat}.concl"), &inst.concl);
                if let (Some(prem), Some(concl)) = (prem, concl) {
                    out.push(Instance::new(inst.id.as_str(), prem, concl));
                }
            }
            if out.len() != insts.len() {
                return None;
            }
            UnnamedRule::explicit(out).ok()
        }
        "scheme" => {
            let (Some(prem), Some(concl)) = (&r.prem, &r.concl) else {
                ctx.err(at, "scheme rule needs `prem` and `concl`");
                return None;
            };
            let ps: Vec<Option<Scheme>> =
                prem.iter().enumerate().map(|(j, p)| ctx.scheme(&format!("{at}.prem[{j}]"), p)).collect();
            let c = ctx.scheme(&format!("{at}.concl"), concl);
            Some(UnnamedRule::scheme(ps.into_iter().collect::<Option<Vec<_>>>()?, c?))
        }
        "family" => {
            ctx.err(format!("{at}.kind"), "rule families are only available in natural-deduction systems");
            None
        }
        other => {
            ctx.err(format!("{at}.kind"), format!("unknown rule kind `{other}` (expected explicit or scheme)"));
            None
        }
    }
}

fn convert_marked(ctx: &mut Ctx, at: &str, ms: &[MarkedDoc]) -> Option<Context> {
    let mut out = Context::new();
    let mut ok = true;
    for (k, m) in ms.iter().enumerate() {
        let mat = format!("{at}[{k}]");
        if m.marker.is_empty() {
            ctx.err(format!("{mat}.marker"), "marker must be nonempty");
            ok = false;
        }
        match ctx.term(&format!("{mat}.formula"), &m.formula) {
            Some(f) => {
                out.insert(MarkedAssumption::new(f, m.marker.as_str()));
            }
            None => ok = false,
        }
    }
    ok.then_some(out)
}

fn convert_ands_rule(ctx: &mut Ctx, at: &str, r: &RuleDoc) -> Option<AndsRule> {
    match r.kind.as_str() {
        "explicit" => {
            let Some(insts) = &r.instances else {
                ctx.err(at, "explicit rule needs `instances`");
                return None;
            };
            let mut out = Vec::new();
            for (j, inst) in insts.iter().enumerate() {
                let iat = format!("{at}.instances[{j}]");
                let prem = ctx.terms(&format!("{iat}.prem"), &inst.prem);
                let concl = ctx.term(&format!("{iat}.concl"), &inst.concl);
                let pmassm: Option<Vec<Context>> = match &inst.pmassm {
                    None => Some(vec![Context::new(); inst.prem.len()]),
                    Some(p) => {
                        let v: Vec<Option<Context>> = p
                            .iter()
                            .enumerate()
                            .map(|(k, ms)| convert_marked(ctx, &format!("{iat}.pmassm[{k}]"), ms))
                            .collect();
                        v.into_iter().collect()
                    }
                };
                let dmassm = convert_marked(ctx, &format!("{iat}.dmassm"), inst.dmassm.as_deref().unwrap_or(&[]));
                let (Some(prem), Some(concl), Some(pmassm), Some(dmassm)) = (prem, concl, pmassm, dmassm) else {
                    continue;
                };
                match AndsInstance::new(inst.id.as_str(), prem, concl, pmassm, dmassm) {
                    Ok(i) => out.push(i),
                    Err(e) => ctx.err(&iat, e.to_string()),
                }
            }
            if out.len() != insts.len() {
                return None;
            }
            match AndsRule::explicit(out) {
                Ok(r) => Some(r),
                Err(e) => {
                    ctx.err(at, e.to_string());
                    None
                }
            }
        }
        "family" => {
            let Some(name) = &r.family else {
                ctx.err(at, "family rule needs `family`");
                return None;
            };
            let Some(kind) = FamilyKind::from_name(name) else {
                ctx.err(format!("{at}.family"), format!("unknown family `{name}` (expected imp-intro, imp-elim or weakening)"));
                return None;
            };
            Some(AndsRule::family(kind, r.imp.clone().unwrap_or_else(|| "imp".to_string())))
        }
        other => {
            ctx.err(format!("{at}.kind"), format!("unknown rule kind `{other}` (expected explicit or family)"));
            None
        }
    }
}

fn rule_name(ctx: &mut Ctx, at: &str, r: &RuleDoc) -> Option<String> {
    match &r.name {
        Some(n) if !n.is_empty() => Some(n.clone()),
        _ => {
            ctx.err(format!("{at}.name"), "named rule needs a nonempty `name`");
            None
        }
    }
}

fn aphs_from_doc(source_name: &str, doc: &SystemDoc) -> Result<Aphs, LoadError> {
    let sig = parse_signature_list(&doc.signature, "signature").map_err(|d| invalid(source_name, vec![d]))?;
    let mut ctx = Ctx::new(Some(&sig));
    let axioms = convert_axioms(&mut ctx, doc);
    let mut rules = Vec::new();
    for (i, r) in doc.rules.iter().enumerate() {
        let at = format!("rules[{i}]");
        let name = rule_name(&mut ctx, &at, r);
        if let (Some(name), Some(rule)) = (name, convert_aphs_rule(&mut ctx, &at, r)) {
            rules.push(NamedRule::new(name, rule));
        }
    }
    let s = Aphs::new(sig.clone(), axioms, rules);
    let report = validate_system(&s);
    for v in &report.violations {
        ctx.diags.push(violation_diagnostic(doc, v));
    }
    ctx.finish(source_name, Some(s))
}

fn ands_from_doc(source_name: &str, doc: &SystemDoc) -> Result<Ands, LoadError> {
    let sig = parse_signature_list(&doc.signature, "signature").map_err(|d| invalid(source_name, vec![d]))?;
    let mut ctx = Ctx::new(Some(&sig));
    let axioms = convert_axioms(&mut ctx, doc);
    let mut rules = Vec::new();
    for (i, r) in doc.rules.iter().enumerate() {
        let at = format!("rules[{i}]");
        let name = rule_name(&mut ctx, &at, r);
        if let (Some(name), Some(rule)) = (name, convert_ands_rule(&mut ctx, &at, r)) {
            rules.push(NamedAndsRule::new(name, rule));
        }
    }
    let n = Ands::new(sig.clone(), axioms, rules);
    for v in &validate_ands(&n).violations {
        ctx.diags.push(violation_diagnostic(doc, v));
    }
    for s in crate::ands::RESERVED {
        if sig.contains_symbol(s) {
            ctx.err("signature", format!("symbol `{s}` is reserved for the sequent encoding"));
        }
    }
    ctx.finish(source_name, Some(n))
}

pub fn parse_system(source_name: &str, text: &str) -> Result<LoadedSystem, LoadError> {
    let doc: SystemDoc = decode(source_name, text)?;
    if let Some(k) = doc.system.as_deref() {
        if k != "aphs" && k != "ands" {
            return Err(invalid(source_name, vec![Diagnostic::new("system", format!("unknown system kind `{k}`"))]));
        }
    }
    if is_ands_doc(&doc) {
        ands_from_doc(source_name, &doc).map(LoadedSystem::Ands)
    } else {
        aphs_from_doc(source_name, &doc).map(LoadedSystem::Aphs)
    }
}

pub fn parse_aphs(source_name: &str, text: &str) -> Result<Aphs, LoadError> {
    match parse_system(source_name, text)? {
        LoadedSystem::Aphs(s) => Ok(s),
        LoadedSystem::Ands(_) => Err(invalid(
            source_name,
            vec![Diagnostic::new("", "expected a pure Hilbert system, found a natural-deduction system")],
        )),
    }
}

pub fn parse_ands(source_name: &str, text: &str) -> Result<Ands, LoadError> {
    let mut doc: SystemDoc = decode(source_name, text)?;
    if doc.system.as_deref() == Some("aphs") {
        return Err(invalid(source_name, vec![Diagnostic::new("system", "expected a natural-deduction system")]));
    }
    doc.system = Some("ands".into());
    ands_from_doc(source_name, &doc)
}

pub fn load_system(path: &Path) -> Result<LoadedSystem, LoadError> {
    parse_system(&path.display().to_string(), &read(path)?)
}

pub fn load_aphs(path: &Path) -> Result<Aphs, LoadError> {
    parse_aphs(&path.display().to_string(), &read(path)?)
}

pub fn load_ands(path: &Path) -> Result<Ands, LoadError> {
    parse_ands(&path.display().to_string(), &read(path)?)
}

// ---------------------------------------------------------------------------
// standalone rules

/// A rule read from its own file; the name is optional there.
#[derive(Clone, Debug)]
pub struct RuleFile<R> {
    pub name: Option<String>,
    pub rule: R,
}

/// A rule file is a single rule object in the system format. Formulas are
/// checked against `sig`.
pub fn parse_aphs_rule(source_name: &str, text: &str, sig: &Signature) -> Result<RuleFile<UnnamedRule>, LoadError> {
    let doc: RuleDoc = decode(source_name, text)?;
    let mut ctx = Ctx::new(Some(sig));
    let rule = convert_aphs_rule(&mut ctx, "rule", &doc);
    ctx.finish(source_name, rule).map(|rule| RuleFile { name: doc.name, rule })
}

pub fn parse_ands_rule(source_name: &str, text: &str, sig: &Signature) -> Result<RuleFile<AndsRule>, LoadError> {
    let doc: RuleDoc = decode(source_name, text)?;
    let mut ctx = Ctx::new(Some(sig));
    let rule = convert_ands_rule(&mut ctx, "rule", &doc);
    ctx.finish(source_name, rule).map(|rule| RuleFile { name: doc.name, rule })
}

pub fn load_aphs_rule(path: &Path, sig: &Signature) -> Result<RuleFile<UnnamedRule>, LoadError> {
    parse_aphs_rule(&path.display().to_string(), &read(path)?, sig)
}

pub fn load_ands_rule(path: &Path, sig: &Signature) -> Result<RuleFile<AndsRule>, LoadError> {
    parse_ands_rule(&path.display().to_string(), &read(path)?, sig)
}

// ---------------------------------------------------------------------------
// derivations and mimicry

fn derivation_from_doc(ctx: &mut Ctx, at: &str, d: &DerivationDoc) -> Option<Derivation> {
    match d {
        DerivationDoc::Axiom { name, formula } => {
            ctx.term(&format!("{at}.formula"), formula).map(|f| Derivation::axiom(name.as_str(), f))
        }
        DerivationDoc::Assume { formula } => ctx.term(&format!("{at}.formula"), formula).map(Derivation::assume),
        DerivationDoc::Rule { rule, instance, formula, premises } => {
            let f = ctx.term(&format!("{at}.formula"), formula);
            let ps: Vec<Option<Derivation>> = premises
                .iter()
                .enumerate()
                .map(|(i, p)| derivation_from_doc(ctx, &format!("{at}.premises[{i}]"), p))
                .collect();
            let ps: Option<Vec<Derivation>> = ps.into_iter().collect();
            Some(Derivation::rule(rule.as_str(), instance.as_str(), f?, ps?))
        }
    }
}

pub fn derivation_to_doc(d: &Derivation) -> DerivationDoc {
    match d {
        Derivation::Axiom { name, formula } => DerivationDoc::Axiom { name: name.clone(), formula: formula.to_string() },
        Derivation::Assume { formula } => DerivationDoc::Assume { formula: formula.to_string() },
        Derivation::Rule { rule, instance, formula, premises } => DerivationDoc::Rule {
            rule: rule.clone(),
            instance: instance.to_string(),
            formula: formula.to_string(),
            premises: premises.iter().map(derivation_to_doc).collect(),
        },
    }
}

/// Formulas are parsed but not checked against a signature; the
/// derivation checker does that against the system.
pub fn parse_derivation(source_name: &str, text: &str) -> Result<Derivation, LoadError> {
    let doc: DerivationDoc = decode(source_name, text)?;
    let mut ctx = Ctx::new(None);
    let d = derivation_from_doc(&mut ctx, "root", &doc);
    ctx.finish(source_name, d)
}

pub fn load_derivation(path: &Path) -> Result<Derivation, LoadError> {
    parse_derivation(&path.display().to_string(), &read(path)?)
}

/// A JSON object mapping instance ids to derivations.
pub fn parse_mimicry(source_name: &str, text: &str) -> Result<MimicryTable, LoadError> {
    let doc: BTreeMap<String, DerivationDoc> = decode(source_name, text)?;
    let mut ctx = Ctx::new(None);
    let mut out = MimicryTable::new();
    for (id, d) in &doc {
        if let Some(d) = derivation_from_doc(&mut ctx, &format!("{id:?}"), d) {
            out.insert(id.as_str().into(), d);
        }
    }
    ctx.finish(source_name, Some(out))
}

pub fn load_mimicry(path: &Path) -> Result<MimicryTable, LoadError> {
    parse_mimicry(&path.display().to_string(), &read(path)?)
}

pub fn mimicry_to_json(m: &MimicryTable) -> String {
    let doc: BTreeMap<String, DerivationDoc> = m.iter().map(|(k, v)| (k.to_string(), derivation_to_doc(v))).collect();
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn derivation_to_json(d: &Derivation) -> String {
    serde_json::to_string_pretty(&derivation_to_doc(d)).expect("serializable")
}

// ---------------------------------------------------------------------------
// ARS and signatures

pub fn parse_ars(source_name: &str, text: &str) -> Result<Ars, LoadError> {
    let doc: ArsDoc = decode(source_name, text)?;
    let mut ctx = Ctx::new(None);
    let objects = ctx.terms("objects", &doc.objects);
    let steps: Vec<Option<ArsStep>> = doc
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let src = ctx.term(&format!("steps[{i}].src"), &s.src);
            let tgt = ctx.term(&format!("steps[{i}].tgt"), &s.tgt);
            Some(ArsStep { id: s.id.clone(), src: src?, tgt: tgt?, label: s.label.clone() })
        })
        .collect();
    let steps: Option<Vec<ArsStep>> = steps.into_iter().collect();
    let ars = match (objects, steps) {
        (Some(o), Some(s)) => match Ars::new(o, s) {
            Ok(a) => Some(a),
            Err(e) => {
                ctx.err("steps", e.to_string());
                None
            }
        },
        _ => None,
    };
    ctx.finish(source_name, ars)
}

pub fn load_ars(path: &Path) -> Result<Ars, LoadError> {
    parse_ars(&path.display().to_string(), &read(path)?)
}

pub fn ars_to_json(a: &Ars) -> String {
    let doc = ArsDoc {
        objects: a.objects().iter().map(|o| o.to_string()).collect(),
        steps: a
            .steps()
            .map(|s| StepDoc { id: s.id.clone(), src: s.src.to_string(), tgt: s.tgt.to_string(), label: s.label.clone() })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Either `{"signature": [...]}` or a bare list of `name/arity` strings.
pub fn parse_signature(source_name: &str, text: &str) -> Result<Signature, LoadError> {
    let doc: SignatureDoc = decode(source_name, text)?;
    let decls = match &doc {
        SignatureDoc::Object { signature } => signature,
        SignatureDoc::List(l) => l,
    };
    parse_signature_list(decls, "signature").map_err(|d| invalid(source_name, vec![d]))
}

pub fn load_signature(path: &Path) -> Result<Signature, LoadError> {
    parse_signature(&path.display().to_string(), &read(path)?)
}

// ---------------------------------------------------------------------------
// writing systems

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("rule `{0}` is given by a predicate and has no file form")]
pub struct NotSerializable(pub String);

fn signature_decls(sig: &Signature) -> Vec<String> {
    sig.symbols().map(|s| format!("{}/{}", s.name, s.arity)).collect()
}

pub fn rule_to_doc(name: Option<&str>, r: &UnnamedRule) -> Result<RuleDoc, NotSerializable> {
    let name = name.map(str::to_string);
    match r.backing() {
        RuleBacking::Explicit(e) => Ok(RuleDoc {
            name,
            kind: "explicit".into(),
            instances: Some(
                e.instances()
                    .iter()
                    .map(|i| InstanceDoc {
                        id: i.id.to_string(),
                        prem: i.prem.iter().map(|p| p.to_string()).collect(),
                        concl: i.concl.to_string(),
                        pmassm: None,
                        dmassm: None,
                    })
                    .collect(),
            ),
            ..RuleDoc::default()
        }),
        RuleBacking::Scheme(s) => Ok(RuleDoc {
            name,
            kind: "scheme".into(),
            prem: Some(s.premises().iter().map(|p| p.to_string()).collect()),
            concl: Some(s.conclusion().to_string()),
            ..RuleDoc::default()
        }),
        RuleBacking::Predicate(_) => Err(NotSerializable(name.unwrap_or_default())),
    }
}

pub fn system_to_doc(s: &Aphs) -> Result<SystemDoc, NotSerializable> {
    Ok(SystemDoc {
        signature: signature_decls(s.signature()),
        axioms: s.axioms().iter().map(|a| AxiomDoc { name: a.name.clone(), formula: a.formula.to_string() }).collect(),
        rules: s.rules().iter().map(|r| rule_to_doc(Some(&r.name), &r.rule)).collect::<Result<_, _>>()?,
        ..SystemDoc::default()
    })
}

pub fn system_to_json(s: &Aphs) -> Result<String, NotSerializable> {
    Ok(serde_json::to_string_pretty(&system_to_doc(s)?).expect("serializable"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINI: &str = r#"{
        "signature": ["a/0", "b/0", "imp/2"],
        "axioms": [{"name": "A1", "formula": "a"}],
        "rules": [
            {"name": "MP", "kind": "scheme", "prem": ["imp(?A,?B)", "?A"], "concl": "?B"},
            {"name": "R", "kind": "explicit", "instances": [{"id": "1", "prem": ["a"], "concl": "b"}]}
        ]
    }"#;

    #[test]
    fn round_trips_a_system() {
        let s = parse_aphs("mini", MINI).unwrap();
        assert_eq!(s.rules().len(), 2);
        let again = parse_aphs("again", &system_to_json(&s).unwrap()).unwrap();
        assert_eq!(system_to_json(&again).unwrap(), system_to_json(&s).unwrap());
    }

    #[test]
    fn reports_field_locations() {
        let bad = MINI.replace("\"concl\": \"b\"", "\"concl\": \"c\"");
        let err = parse_aphs("bad", &bad).unwrap_err();
        let d = &err.diagnostics()[0];
        assert_eq!(d.location, "rules[1].instances[0].concl");
        assert!(d.message.contains("c"), "{}", d.message);
    }

    #[test]
    fn reports_shape_errors_with_paths() {
        let bad = MINI.replace("\"prem\": [\"a\"]", "\"prem\": \"a\"");
        let err = parse_aphs("bad", &bad).unwrap_err();
        assert!(err.diagnostics()[0].location.starts_with("rules[1].instances[0].prem"), "{err}");
    }

    #[test]
    fn naming_violations_cite_their_clause() {
        let dup = MINI.replace("\"name\": \"R\"", "\"name\": \"MP\"");
        let err = parse_aphs("dup", &dup).unwrap_err().to_string();
        assert!(err.contains("rules[1]: (ii)"), "{err}");
        let clash = MINI.replace("\"name\": \"R\"", "\"name\": \"A1\"");
        let err = parse_aphs("clash", &clash).unwrap_err().to_string();
        assert!(err.contains("(i)"), "{err}");
    }

    #[test]
    fn derivations_round_trip() {
        let text = r#"{"kind": "rule", "rule": "MP", "instance": "{A=a;B=b}", "formula": "b",
            "premises": [{"kind": "assume", "formula": "imp(a,b)"}, {"kind": "axiom", "name": "A1", "formula": "a"}]}"#;
        let d = parse_derivation("d", text).unwrap();
        assert_eq!(parse_derivation("again", &derivation_to_json(&d)).unwrap(), d);
    }
}
