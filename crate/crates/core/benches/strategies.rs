use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use nilsep::canonical::orbit_representatives_with;
use nilsep::counting::{orbit_partition, OrbitAlgorithm, DEFAULT_BUDGET};
use nilsep::indicator::build_h_set;
use nilsep::invariants::{build_set, check_minimality_with, SetKind};
use nilsep::{GaloisField, Strategy};

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn partition(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit_partition");
    group.sample_size(10);
    for (label, p, k, n, m) in [("q5_n2_m3", 5, 1, 2, 3), ("q3_n3_m1", 3, 1, 3, 1), ("q2_n3_m2", 2, 1, 3, 2)] {
        let f = GaloisField::new(p, k).unwrap();
        for (name, s) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, label), &s, |b, &s| {
                b.iter(|| orbit_partition(&f, n, m, OrbitAlgorithm::default_for(f.q(), n), DEFAULT_BUDGET, s).unwrap())
            });
        }
    }
    group.finish();
}

fn representatives(c: &mut Criterion) {
    let mut group = c.benchmark_group("orbit_representatives");
    let f = GaloisField::new(3, 1).unwrap();
    for (name, s) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, "q3_m5"), |b| {
            b.iter(|| orbit_representatives_with(black_box(&f), 5, s).unwrap())
        });
    }
    group.finish();
}

fn minimality(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_minimality");
    group.sample_size(10);
    let f = GaloisField::new(5, 1).unwrap();
    let set = build_set(SetKind::H, &f, 4).unwrap();
    for (name, s) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, "q5_m4_H"), |b| {
            b.iter(|| check_minimality_with(&set, &f, 4, s).unwrap())
        });
    }
    group.finish();
}

fn indicator(c: &mut Criterion) {
    let mut group = c.benchmark_group("indicator_expansion");
    group.sample_size(10);
    let f = GaloisField::new(3, 1).unwrap();
    let h = build_h_set(&f, 2, None, Strategy::Sequential).unwrap();
    for (name, s) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, "q3_m2_h1"), |b| b.iter(|| h.poly(0, &f, s).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, partition, representatives, minimality, indicator);
criterion_main!(benches);
