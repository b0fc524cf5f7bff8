use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qtlab_bench::{basis, instance, representatives};
use qtlab_core::grassmann::tau_from_basis;
use qtlab_core::kacschwarz::{check_annihilation, check_ladder};
use qtlab_core::models::build_phi;
use qtlab_core::oracle::{count_factorizations, HurwitzQuery};
use qtlab_core::{boson, Partition};

fn basis_construction(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_phi");
    for m in representatives() {
        g.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| b.iter(|| build_phi(m, 3, black_box(40))));
    }
    g.finish();
}

fn kac_schwarz(c: &mut Criterion) {
    let mut g = c.benchmark_group("kac_schwarz");
    g.sample_size(10);
    for m in representatives() {
        let inst = instance(m, 40);
        g.bench_with_input(BenchmarkId::new("annihilation", m), &inst, |b, inst| b.iter(|| check_annihilation(inst)));
        g.bench_with_input(BenchmarkId::new("ladder", m), &inst, |b, inst| b.iter(|| check_ladder(inst, 8)));
    }
    g.finish();
}

fn tau(c: &mut Criterion) {
    let mut g = c.benchmark_group("tau");
    g.sample_size(10);
    g.bench_function("bosonic hurwitz d=5", |b| b.iter(|| boson::hurwitz_tau(black_box(5))));
    let vb = basis(qtlab_core::ModelId::Mv { r: 1 }, 5);
    g.bench_function("plucker mv d=5", |b| b.iter(|| tau_from_basis(&vb, 5)));
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    for b_count in [4u32, 6] {
        let q = HurwitzQuery { mu: Partition::new(vec![3, 2]), b: b_count };
        g.bench_with_input(BenchmarkId::new("count (3,2)", b_count), &q, |b, q| b.iter(|| count_factorizations(q)));
    }
    g.finish();
}

criterion_group!(benches, basis_construction, kac_schwarz, tau, oracle);
criterion_main!(benches);
