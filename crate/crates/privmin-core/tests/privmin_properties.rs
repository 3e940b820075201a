//! Budget accounting, gating and noise-scale properties of the private
//! signature generators, plus harness-level orderings on the fixture.

use std::path::Path;

use privmin_core::{
    baseline_similarity, estimate_similarity, load_corpus, privmin_signature, run_experiment,
    Algorithm, CorpusFormat, ExperimentConfig, HashFamily, PairSelection, RandomSource,
    ShingleConfig, ShingleSet,
};

fn fixture_path() -> &'static Path {
    Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../data/fixture_corpus.txt"
    ))
}

fn random_profile(rng: &mut RandomSource, max_size: u64) -> ShingleSet {
    let size = 1 + rng.below(max_size);
    ShingleSet::from_elements((0..size).map(|_| rng.below(u32::MAX as u64) as u32))
}

#[test]
fn budget_accounting_over_random_runs() {
    let mut gen = RandomSource::new(808);
    for run in 0..1000u64 {
        let k = 1 + gen.below(31) as usize;
        let epsilon = 0.01 + gen.uniform() * 9.99;
        let profile = random_profile(&mut gen, 64);
        let family = HashFamily::new(k, gen.below(u64::MAX - 1)).unwrap();
        let mut rng = RandomSource::new(90_000 + run);
        let report = privmin_signature(&profile, &family, epsilon, None, &mut rng).unwrap();
        let b = &report.budget;

        assert_eq!(b.eps1 + b.eps2, epsilon, "run {run}: eps1 + eps2 != eps");
        assert_eq!(b.eps1, b.eps2, "run {run}: split is not 50/50");
        if b.m > 0 {
            let recomposed = b.m as f64 * b.eps_step;
            assert!(
                (recomposed - b.eps2).abs() <= f64::EPSILON * b.eps2,
                "run {run}: m * eps_step = {recomposed} != eps2 = {}",
                b.eps2
            );
        } else {
            assert!(report.degenerate_no_noise);
            assert_eq!(b.eps_step, 0.0);
        }
        assert!(b.m <= k);
        assert_eq!(report.noisy_positions.len(), b.m);
        assert_eq!(
            report.noisy_positions,
            report.flip_vector_final.zero_positions()
        );

        // Gating: one-bits carry the exact minimum.
        let plain = family.signature(&profile).unwrap();
        for (idx, &bit) in report.flip_vector_final.bits().iter().enumerate() {
            if bit == 1 {
                assert_eq!(report.signature.mins[idx], plain.mins[idx], "run {run}");
            }
        }

        // Bit reproducibility under the same stream seed.
        let mut rng2 = RandomSource::new(90_000 + run);
        let again = privmin_signature(&profile, &family, epsilon, None, &mut rng2).unwrap();
        assert_eq!(report.signature, again.signature, "run {run}");
    }
}

#[test]
fn exact_position_rate_sits_between_uniform_floor_and_one() {
    // At any practical epsilon the exact-position fraction lives strictly
    // inside (uniform floor, 1): the RR gate keeps roughly half the
    // positions exact while noisy positions essentially never hit the
    // minimum on the full 2^32 domain. Note the rate is NOT monotone in
    // epsilon: raising epsilon raises P_t, which randomizes the flip
    // vector harder and lowers the exact fraction on this grid.
    let family = HashFamily::new(10, 4242).unwrap();
    let profile = ShingleSet::from_elements((0..30u32).map(|i| i.wrapping_mul(2_654_435_761)));
    let plain = family.signature(&profile).unwrap();
    let runs = 1000u64;
    let root = RandomSource::new(313);
    let mut rates = Vec::new();
    for &epsilon in &[0.01f64, 0.1, 1.0, 10.0] {
        let mut exact_positions = 0usize;
        for run in 0..runs {
            let mut rng = root.substream(&[epsilon.to_bits(), run]);
            let report = privmin_signature(&profile, &family, epsilon, None, &mut rng).unwrap();
            exact_positions += report
                .signature
                .mins
                .iter()
                .zip(&plain.mins)
                .filter(|(a, b)| a == b)
                .count();
        }
        let rate = exact_positions as f64 / (runs * 10) as f64;
        assert!(rate > 0.05, "epsilon={epsilon}: rate {rate} at uniform floor");
        assert!(rate < 0.95, "epsilon={epsilon}: rate {rate} too close to 1");
        rates.push((epsilon, rate));
    }
    // The gate dominates: all rates hover near P(V'_k = 1) ~ 1/2.
    for &(epsilon, rate) in &rates {
        assert!(
            (rate - 0.5).abs() < 0.1,
            "epsilon={epsilon}: rate {rate} far from the RR gate level"
        );
    }
}

#[test]
fn baseline_error_variance_tracks_scale() {
    // Empirical variance of (output - plain estimate) should be
    // 2 * ((1/K)/eps)^2 within 10% at 1e4 samples.
    let family = HashFamily::new(5, 99).unwrap();
    let a = ShingleSet::from_elements((0..40u32).map(|i| i.wrapping_mul(2_654_435_761)));
    let b = ShingleSet::from_elements((20..60u32).map(|i| i.wrapping_mul(2_654_435_761)));
    let sa = family.signature(&a).unwrap();
    let sb = family.signature(&b).unwrap();
    let estimate = estimate_similarity(&sa, &sb).unwrap();
    let eps = 0.5;
    let expect = 2.0 * (0.2 / eps) * (0.2 / eps);
    let mut rng = RandomSource::new(515);
    let n = 10_000;
    let var = (0..n)
        .map(|_| {
            let x = baseline_similarity(&sa, &sb, eps, &mut rng).unwrap();
            (x - estimate) * (x - estimate)
        })
        .sum::<f64>()
        / n as f64;
    assert!(
        (var - expect).abs() < 0.1 * expect,
        "variance {var} vs expected {expect}"
    );
}

#[test]
fn mhjsc_beats_baseline_mse_on_every_grid_point() {
    let corpus = load_corpus(fixture_path(), CorpusFormat::OneDocPerLine)
        .unwrap()
        .documents;
    let mk = |alg| ExperimentConfig {
        algorithm: alg,
        dataset: "fixture".into(),
        epsilon_grid: vec![0.1, 0.5, 1.0],
        k_grid: vec![5, 15, 25],
        threshold: 0.5,
        repetitions: 10,
        master_seed: 7,
        pair_selection: PairSelection::Consecutive,
        shingle: ShingleConfig::default(),
        no_timing: true,
    };
    let plain = run_experiment(&corpus, &mk(Algorithm::MhJsc)).unwrap();
    let noisy = run_experiment(&corpus, &mk(Algorithm::Baseline)).unwrap();
    for (p, b) in plain.rows.iter().zip(&noisy.rows) {
        assert!(
            p.mse < b.mse,
            "K={} eps={}: mh-jsc {} should beat baseline {}",
            p.k,
            p.epsilon,
            p.mse,
            b.mse
        );
    }
}
