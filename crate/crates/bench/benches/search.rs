use criterion::{criterion_group, criterion_main, Criterion};
use proofkit_core::analysis::classify_rule;
use proofkit_core::ands::{encode_system, marker_pool, Sequent};
use proofkit_core::aphs::{is_theorem, is_theorem_in, theorem_set};
use proofkit_core::audit::run_audit;
use proofkit_core::corpus;
use proofkit_core::format::{parse_ands, parse_aphs, parse_aphs_rule};
use proofkit_core::{Aphs, Budget, Term};

fn aphs(name: &str) -> Aphs {
    parse_aphs(name, corpus::file(name).expect("corpus file")).expect("valid corpus system")
}

fn hilbert(c: &mut Criterion) {
    let s = aphs("hilbert-min.json");
    let goal: Term = "imp(a,a)".parse().unwrap();
    let b = Budget::with_universe(17).depth(3);
    let mut g = c.benchmark_group("hilbert");
    g.sample_size(10);
    g.bench_function("identity at size 17", |bench| bench.iter(|| is_theorem(&s, &goal, b)));
    g.finish();
    c.bench_function("hilbert theorems at size 9", |bench| bench.iter(|| theorem_set(&s, Budget::with_universe(9))));
}

fn classification(c: &mut Criterion) {
    let s = aphs("converse.json");
    let r = parse_aphs_rule("converse-rule.json", corpus::file("converse-rule.json").unwrap(), s.signature()).unwrap();
    c.bench_function("classify converse rule", |bench| bench.iter(|| classify_rule(&s, &r.rule, Budget::with_universe(1))));
}

fn natural_deduction(c: &mut Criterion) {
    let n = parse_ands("nd-minimal.json", corpus::file("nd-minimal.json").unwrap()).unwrap();
    let e = encode_system(&n, marker_pool(&n, &[], 1).unwrap(), 8).unwrap();
    let goal = "{} => imp(a,a)".parse::<Sequent>().unwrap().to_term();
    let b = Budget::with_universe(8).depth(3);
    c.bench_function("nd identity at size 8", |bench| bench.iter(|| is_theorem_in(&e.system, &e.universe(), &goal, b)));
}

fn audit(c: &mut Criterion) {
    let mut g = c.benchmark_group("audit");
    g.sample_size(10);
    g.bench_function("50 samples", |bench| bench.iter(|| run_audit(1, 50, 8)));
    g.finish();
}

criterion_group!(benches, hilbert, classification, natural_deduction, audit);
criterion_main!(benches);
