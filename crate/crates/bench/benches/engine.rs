use chargroup::exactlin::{hnf, snf};
use chargroup::shimura::{verify_chargp, verify_thm_main, CaseData, Side};
use chargroup::ssmod::GraphModule;
use chargroup::tmod::SearchBudget;
use chargroup_bench::dense_matrix;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn normal_forms(c: &mut Criterion) {
    let mut group = c.benchmark_group("normal_forms");
    for n in [8, 16, 24] {
        let m = dense_matrix(n);
        group.bench_with_input(BenchmarkId::new("hnf", n), &m, |b, m| b.iter(|| hnf(black_box(m))));
        group.bench_with_input(BenchmarkId::new("snf", n), &m, |b, m| b.iter(|| snf(black_box(m))));
    }
    group.finish();
}

fn graph_modules(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph_modules");
    group.sample_size(10);
    group.bench_function("vertex p=37 l<=13", |b| b.iter(|| GraphModule::vertex(black_box(37), 13).unwrap()));
    group.bench_function("edge p=11 q=7 l<=13", |b| b.iter(|| GraphModule::edge(black_box(11), 7, 13).unwrap()));
    group.finish();
}

fn verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("verification");
    group.sample_size(10);
    let case = CaseData::build(11, 7, 13).unwrap();
    group.bench_function("case 11,7", |b| b.iter(|| CaseData::build(black_box(11), 7, 13).unwrap()));
    group.bench_function("chargp 11,7", |b| b.iter(|| verify_chargp(&case, &SearchBudget::default()).unwrap()));
    group.bench_function("main 11,7", |b| b.iter(|| verify_thm_main(&case, Side::P).unwrap()));
    group.finish();
}

criterion_group!(benches, normal_forms, graph_modules, verification);
criterion_main!(benches);
