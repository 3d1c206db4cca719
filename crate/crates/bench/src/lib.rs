//! Criterion benchmarks for the identity engine, driven from `benches/engine.rs`.

use std::hint::black_box;

use criterion::Criterion;

use equijac::dsl::{parse_expr, RecordKind};
use equijac::engine::{audit, shipped_records, verify_catalog, VerifyOptions};
use equijac::eval::Evaluator;
use equijac::formal::{effective_terms, rank_check, RelationRows};
use equijac::{hw_tensor, pole_orders, AtomRegistry};

pub fn registry(c: &mut Criterion) {
    c.bench_function("registry_build", |b| {
        b.iter(|| AtomRegistry::build().unwrap())
    });
}

pub fn tensor(c: &mut Criterion) {
    let reg = AtomRegistry::build().unwrap();
    let (p5, p3) = (reg.get("P5").unwrap(), reg.get("P3").unwrap());
    c.bench_function("hw_tensor_p5_p3", |b| {
        b.iter(|| hw_tensor(black_box(p5), black_box(p3), 1).unwrap())
    });
}

pub fn poles(c: &mut Criterion) {
    let reg = AtomRegistry::build().unwrap();
    let v = Evaluator::new(&reg)
        .eval(&parse_expr("[P5 @ P5]_9").unwrap())
        .unwrap();
    c.bench_function("pole_orders_top", |b| {
        b.iter(|| pole_orders(black_box(&v)).unwrap())
    });
}

pub fn verification(c: &mut Criterion) {
    let reg = AtomRegistry::build().unwrap();
    let low: Vec<_> = shipped_records()
        .into_iter()
        .filter(|r| r.grade == (0, 0))
        .collect();
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("grade_0_0", |b| {
        b.iter(|| verify_catalog(&reg, &low, VerifyOptions::default()))
    });
    let ev = Evaluator::new(&reg);
    let terms: Vec<_> = [
        "[P4 @ P3]_4",
        "[G @ [P5 @ P4]_8]_4",
        "[G @ [P5 @ P4]_6]_4",
        "[G @ P4]_4",
    ]
    .iter()
    .map(|s| ev.eval(&parse_expr(s).unwrap()).unwrap())
    .collect();
    group.bench_function("audit_four_terms", |b| {
        b.iter(|| audit(black_box(&terms)).unwrap())
    });
    group.finish();
}

pub fn rank(c: &mut Criterion) {
    let reg = AtomRegistry::build().unwrap();
    let records: Vec<_> = shipped_records()
        .into_iter()
        .filter(|r| r.kind == RecordKind::Quadratic)
        .collect();
    let report = verify_catalog(&reg, &records, VerifyOptions::default());
    let rels: Vec<_> = records
        .iter()
        .zip(&report.records)
        .map(|(r, o)| (r.clone(), effective_terms(r, &o.status).unwrap()))
        .collect();
    let rows = RelationRows::build(&reg, &rels).unwrap();
    let mut group = c.benchmark_group("rank");
    group.sample_size(10);
    group.bench_function("one_trial", |b| {
        b.iter(|| rank_check(&rows, 1, 1, None, &[]).unwrap())
    });
    group.finish();
}
