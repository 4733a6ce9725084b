//! Compares the rayon-backed scans against their sequential twins:
//! stabilizer search, ideal enumeration, and the batch verification loops
//! used by the acceptance checks.
//!
//! Run with `cargo bench -p intdiff-core`.

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use intdiff_core::aut::recognize;
use intdiff_core::ideal::{
    enumerate_ideals, enumerate_ideals_sequential, stabilizer, stabilizer_sequential,
    IdealDescriptor,
};
use intdiff_core::poly::apply;
use intdiff_core::selftest::{
    first_failure, first_failure_sequential, random_automorphism, random_operator, random_poly,
};

fn bench_stabilizer(c: &mut Criterion) {
    // all 2-subsets of 8 slots: a fully symmetric antichain, so the scan
    // keeps all 8! permutations
    let ideal = intdiff_core::ideal::invariant_ideals(8)
        .into_iter()
        .nth(2)
        .expect("height-two invariant ideal");
    assert!(ideal.is_proper());
    let mut group = c.benchmark_group("stabilizer_scan_n8");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| stabilizer(&ideal).unwrap().order));
    group.bench_function("sequential", |b| {
        b.iter(|| stabilizer_sequential(&ideal).unwrap().order)
    });
    group.finish();

    // an asymmetric ideal keeps the comparison honest
    let skew = IdealDescriptor::prime([0usize, 1], 8)
        .unwrap()
        .product(&IdealDescriptor::prime([2usize], 8).unwrap());
    let mut group = c.benchmark_group("stabilizer_scan_skew_n8");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| stabilizer(&skew).unwrap().order));
    group.bench_function("sequential", |b| {
        b.iter(|| stabilizer_sequential(&skew).unwrap().order)
    });
    group.finish();
}

fn bench_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_ideals_n5");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| enumerate_ideals(5).unwrap().len()));
    group.bench_function("sequential", |b| {
        b.iter(|| enumerate_ideals_sequential(5).unwrap().len())
    });
    group.finish();
}

fn bench_module_action_batch(c: &mut Criterion) {
    const CASES: usize = 2_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0xBE);
    let inputs: Vec<_> = (0..CASES)
        .map(|k| {
            let n = 1 + k % 2;
            (
                random_operator(&mut rng, n, 3, 5),
                random_operator(&mut rng, n, 3, 5),
                random_poly(&mut rng, n, 3, 8),
            )
        })
        .collect();
    let check = |k: usize| {
        let (a, b, p) = &inputs[k];
        apply(&(a * b), p) == apply(a, &apply(b, p))
    };
    let mut group = c.benchmark_group("module_action_batch_2k");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| first_failure(CASES, check)));
    group.bench_function("sequential", |b| {
        b.iter(|| first_failure_sequential(CASES, check))
    });
    group.finish();
}

fn bench_recognition_batch(c: &mut Criterion) {
    const CASES: usize = 48;
    let mut rng = ChaCha8Rng::seed_from_u64(0xAF);
    let inputs: Vec<_> = (0..CASES)
        .map(|k| random_automorphism(&mut rng, 1 + k % 2, 4, 3))
        .collect();
    let check = |k: usize| {
        let sigma = &inputs[k];
        recognize(&sigma.images()).map(|found| found == *sigma).unwrap_or(false)
    };
    let mut group = c.benchmark_group("recognition_batch_48");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| first_failure(CASES, check)));
    group.bench_function("sequential", |b| {
        b.iter(|| first_failure_sequential(CASES, check))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_stabilizer,
    bench_enumeration,
    bench_module_action_batch,
    bench_recognition_batch
);
criterion_main!(benches);
