//! Report determinism: a frozen golden CSV for a small fixture corpus and
//! thread-count independence on the bundled one.

use std::path::Path;

use privmin_core::{
    load_corpus, run_experiment, Algorithm, CorpusFormat, ExperimentConfig, PairSelection,
    ShingleConfig,
};

fn ten_doc_fixture() -> Vec<privmin_core::Document> {
    [
        "the gallery hangs new landscape paintings every other month",
        "the gallery hangs new portrait paintings every other month",
        "ferry tickets cost less on weekday mornings before nine",
        "the lighthouse lamp was converted to led light last winter",
        "the lighthouse lamp was converted to gas light last winter",
        "allotment plots near the canal flood after heavy autumn rain",
        "the brass band practices in the old drill hall on tuesdays",
        "the brass band practices in the new drill hall on tuesdays",
        "market traders arrive before dawn to claim the corner stalls",
        "the night bakery fills the whole street with warm bread smell",
    ]
    .iter()
    .enumerate()
    .map(|(i, text)| privmin_core::Document::new(i.to_string(), *text))
    .collect()
}

fn golden_config() -> ExperimentConfig {
    ExperimentConfig {
        algorithm: Algorithm::MhJsc,
        dataset: "golden".into(),
        epsilon_grid: vec![0.5],
        k_grid: vec![5, 10],
        threshold: 0.5,
        repetitions: 10,
        master_seed: 12345,
        pair_selection: PairSelection::Consecutive,
        shingle: ShingleConfig::default(),
        no_timing: true,
    }
}

const GOLDEN_CSV: &str = "\
algorithm,dataset,K,epsilon,repetitions,F1,precision,recall,MSE,TP,FP,TN,FN,degenerate_runs,runtime_ms
mh-jsc,golden,5,0.5,10,0.333333,0.3,0.4,0.0204,0.4,0.5,3.5,0.6,0,0
mh-jsc,golden,10,0.5,10,0.533333,0.5,0.6,0.0056,0.6,0.3,3.7,0.4,0,0
";

#[test]
fn golden_report_is_frozen() {
    let report = run_experiment(&ten_doc_fixture(), &golden_config()).unwrap();
    assert_eq!(report.to_csv(), GOLDEN_CSV);
}

#[test]
fn report_is_independent_of_thread_count() {
    let corpus = load_corpus(
        Path::new(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../data/fixture_corpus.txt"
        )),
        CorpusFormat::OneDocPerLine,
    )
    .unwrap()
    .documents;
    let cfg = ExperimentConfig {
        algorithm: Algorithm::Privmin,
        dataset: "fixture".into(),
        epsilon_grid: vec![0.2, 0.8],
        k_grid: vec![5],
        threshold: 0.3,
        repetitions: 4,
        master_seed: 99,
        pair_selection: PairSelection::Consecutive,
        shingle: ShingleConfig::default(),
        no_timing: true,
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_experiment(&corpus, &cfg).unwrap());
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run_experiment(&corpus, &cfg).unwrap());
    assert_eq!(single.to_csv(), four.to_csv());
}
