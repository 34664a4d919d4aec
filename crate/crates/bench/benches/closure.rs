use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use semigraphoid::{
    ci_model, closure_antichain, closure_fixpoint, closure_two_dominants, random_measure,
    DependencyModel, Universe,
};
use semigraphoid_bench::all_couples;

fn couple_closures(c: &mut Criterion) {
    let (u, couples) = all_couples(4);
    let models: Vec<DependencyModel> = couples
        .iter()
        .map(|&(x, y)| DependencyModel::from_triplets(u.clone(), [x, y]).unwrap())
        .collect();
    let mut group = c.benchmark_group("couples_n4");
    group.sample_size(10);
    group.bench_function("fixpoint", |b| {
        b.iter(|| {
            models
                .iter()
                .map(|m| closure_fixpoint(m).unwrap().len())
                .sum::<usize>()
        })
    });
    group.bench_function("antichain", |b| {
        b.iter(|| {
            models
                .iter()
                .map(|m| closure_antichain(m).unwrap().len())
                .sum::<usize>()
        })
    });
    group.bench_function("two_dominants", |b| {
        b.iter(|| {
            couples
                .iter()
                .map(|(x, y)| closure_two_dominants(x, y).dominants.len())
                .sum::<usize>()
        })
    });
    group.finish();
}

fn ci_models(c: &mut Criterion) {
    let mut group = c.benchmark_group("ci_model");
    for n in [3usize, 4] {
        let u = Universe::numbered(n).unwrap();
        let p = random_measure(&u, &vec![3; n], 1, 0.2).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| ci_model(black_box(p)).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(benches, couple_closures, ci_models);
criterion_main!(benches);
