use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use privmin_bench::{synthetic_pair, synthetic_profile};
use privmin_core::{
    approx_probability, estimate_similarity, exp_mech_min_select, jaccard_exact,
    private_minhash_signature, privmin_signature, score_ranges, ApproxQuery, HashFamily,
    RandomSource,
};

fn bench_plain_signature(c: &mut Criterion) {
    let mut group = c.benchmark_group("minhash_signature");
    for &(k, n) in &[(25usize, 200usize), (128, 200), (128, 2000)] {
        let family = HashFamily::new(k, 7).unwrap();
        let profile = synthetic_profile(n, 11);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("K{k}_N{n}")),
            &(family, profile),
            |b, (family, profile)| b.iter(|| family.signature(black_box(profile)).unwrap()),
        );
    }
    group.finish();
}

fn bench_private_signatures(c: &mut Criterion) {
    let mut group = c.benchmark_group("private_signature");
    let family = HashFamily::new(25, 7).unwrap();
    let profile = synthetic_profile(200, 11);
    group.bench_function("exp_all_K25", |b| {
        let mut rng = RandomSource::new(3);
        b.iter(|| private_minhash_signature(black_box(&profile), &family, 0.5, &mut rng).unwrap())
    });
    group.bench_function("privmin_K25", |b| {
        let mut rng = RandomSource::new(3);
        b.iter(|| privmin_signature(black_box(&profile), &family, 0.5, None, &mut rng).unwrap())
    });
    group.finish();
}

fn bench_selection(c: &mut Criterion) {
    let mut group = c.benchmark_group("exp_mech");
    let family = HashFamily::new(1, 7).unwrap();
    for &n in &[32usize, 512] {
        let profile = synthetic_profile(n, 13);
        let hvs = family.hash_values(0, &profile).unwrap();
        group.bench_with_input(BenchmarkId::new("select", n), &hvs, |b, hvs| {
            let mut rng = RandomSource::new(5);
            b.iter(|| exp_mech_min_select(black_box(hvs), 1.0, &mut rng).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("score_ranges", n), &hvs, |b, hvs| {
            b.iter(|| score_ranges(black_box(hvs)))
        });
    }
    group.finish();
}

fn bench_estimation(c: &mut Criterion) {
    let mut group = c.benchmark_group("similarity");
    let (a, b_profile) = synthetic_pair(1000, 500, 17);
    group.bench_function("jaccard_exact_1000", |bch| {
        bch.iter(|| jaccard_exact(black_box(&a), black_box(&b_profile)))
    });
    let family = HashFamily::new(128, 7).unwrap();
    let sa = family.signature(&a).unwrap();
    let sb = family.signature(&b_profile).unwrap();
    group.bench_function("estimate_K128", |bch| {
        bch.iter(|| estimate_similarity(black_box(&sa), black_box(&sb)).unwrap())
    });
    group.finish();
}

fn bench_analysis(c: &mut Criterion) {
    c.bench_function("approx_probability_K1000", |b| {
        let q = ApproxQuery::new(1000, 0.5, 0.05).unwrap();
        b.iter(|| approx_probability(black_box(&q)))
    });
}

criterion_group!(
    benches,
    bench_plain_signature,
    bench_private_signatures,
    bench_selection,
    bench_estimation,
    bench_analysis
);
criterion_main!(benches);
