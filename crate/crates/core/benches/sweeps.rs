use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sextuple_core::engine::verify_tuple;
use sextuple_core::exactnum::Rat;
use sextuple_core::family::ParamT;
use sextuple_core::paramfam::{self, scan_points, scan_row};
use sextuple_core::reduction::{sweep_case, sweep_cases};
use sextuple_core::sweep::{map_ordered, map_sequential};

fn squarefree_sweep(c: &mut Criterion) {
    let cases = sweep_cases(20, 4);
    let mut g = c.benchmark_group("squarefree-sweep");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("sequential", cases.len()), |b| {
        b.iter(|| map_sequential(&cases, sweep_case))
    });
    g.bench_function(BenchmarkId::new("rayon", cases.len()), |b| {
        b.iter(|| map_ordered(&cases, sweep_case))
    });
    g.finish();
}

fn family_scan(c: &mut Criterion) {
    let pts = scan_points(&Rat::frac(11, 10), &Rat::from(12), &Rat::frac(1, 16)).unwrap();
    let mut g = c.benchmark_group("family-scan");
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("sequential", pts.len()), |b| {
        b.iter(|| map_sequential(&pts, scan_row))
    });
    g.bench_function(BenchmarkId::new("rayon", pts.len()), |b| {
        b.iter(|| map_ordered(&pts, scan_row))
    });
    g.finish();
}

fn batch_verification(c: &mut Criterion) {
    let tuples: Vec<Vec<Rat>> = (2..60)
        .filter_map(|k| ParamT::new(Rat::frac(k, 7)).ok())
        .filter_map(|t| paramfam::family_point(&t).ok())
        .map(|fp| fp.elements.to_vec())
        .collect();
    let mut g = c.benchmark_group("batch-verify");
    g.bench_function(BenchmarkId::new("sequential", tuples.len()), |b| {
        b.iter(|| map_sequential(&tuples, |v| verify_tuple(v).all_pass))
    });
    g.bench_function(BenchmarkId::new("rayon", tuples.len()), |b| {
        b.iter(|| map_ordered(&tuples, |v| verify_tuple(v).all_pass))
    });
    g.finish();
}

criterion_group!(benches, squarefree_sweep, family_scan, batch_verification);
criterion_main!(benches);
