//! Parallel vs sequential throughput on the engine's bulk workloads.
//!
//! `dispatched` goes through `exec::map_indexed` (rayon when the `parallel`
//! feature is on, the default); `sequential` pins the fallback path. Both
//! produce identical results — reductions are fixed-order on either side —
//! so the comparison is purely about throughput.

use criterion::{criterion_group, criterion_main, Criterion};
use num::{One, Zero};
use vecquad_core::exec;
use vecquad_core::gallery::{fat_cantor, kadets_partitions, kadets_vector_fn};
use vecquad_core::integration::{cauchy_gap, riemann_sum, VectorFn};
use vecquad_core::rat::{rat, Rat};

fn bump_series_eval_batch(c: &mut Criterion) {
    let levels = fat_cantor(14).unwrap();
    let f = kadets_vector_fn(&levels, 10).unwrap();
    let points: Vec<Rat> = (0..16_384).map(|i| rat(2 * i + 1, 32_768)).collect();
    let mut group = c.benchmark_group("bump_series_eval_norm_batch");
    group.bench_function("dispatched", |b| {
        b.iter(|| {
            exec::map_indexed(&points, |t| f.eval(t).unwrap().norm())
                .iter()
                .sum::<f64>()
        })
    });
    group.bench_function("sequential", |b| {
        b.iter(|| {
            exec::map_indexed_seq(&points, |t| f.eval(t).unwrap().norm())
                .iter()
                .sum::<f64>()
        })
    });
    group.finish();
}

fn adversarial_gap(c: &mut Criterion) {
    let levels = fat_cantor(12).unwrap();
    let bumps = kadets_vector_fn(&levels, 10).unwrap();
    let smooth = VectorFn::scalar_fn(Rat::zero(), Rat::one(), |t| (3.0 * t).sin()).unwrap();
    let mut group = c.benchmark_group("cauchy_gap");
    group.sample_size(20);
    group.bench_function("bump_series_mesh_2e-6", |b| {
        b.iter(|| cauchy_gap(&bumps, (2f64).powi(-6), 1).unwrap())
    });
    group.bench_function("smooth_mesh_2e-12", |b| {
        b.iter(|| cauchy_gap(&smooth, (2f64).powi(-12), 1).unwrap())
    });
    group.finish();
}

fn witness_riemann_sums(c: &mut Criterion) {
    let levels = fat_cantor(12).unwrap();
    let f = kadets_vector_fn(&levels, 0).unwrap();
    let (p1, _) = kadets_partitions(&levels, 10).unwrap();
    let mut group = c.benchmark_group("riemann_sum");
    group.sample_size(20);
    group.bench_function("witness_partition_stage_10", |b| {
        b.iter(|| riemann_sum(&f, &p1).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bump_series_eval_batch,
    adversarial_gap,
    witness_riemann_sums
);
criterion_main!(benches);
