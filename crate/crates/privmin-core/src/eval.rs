//! Experiment harness: pairwise similarity runs over a corpus, confusion
//! counts against a threshold, F1 and MSE, parameter sweeps over epsilon
//! and K with repetition averaging, and CSV reporting.

use std::time::Instant;

use rayon::prelude::*;

use crate::corpus::{jaccard_exact, shingle, Document, ShingleConfig, ShingleSet};
use crate::error::{Error, Result};
use crate::hashing::{estimate_similarity, HashFamily};
use crate::privmin::{
    baseline_similarity, private_minhash_signature, privmin_signature,
};
use crate::rng::RandomSource;

/// Which similarity pipeline the harness runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Plain MinHash estimate, no noise. The empirical utility ceiling.
    MhJsc,
    /// Laplace output perturbation of the plain estimate.
    Baseline,
    /// Flip-vector gated Exponential perturbation of both profiles.
    Privmin,
    /// Exponential perturbation at every step of both profiles.
    ExpAll,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::MhJsc => "mh-jsc",
            Algorithm::Baseline => "baseline",
            Algorithm::Privmin => "privmin",
            Algorithm::ExpAll => "exp-all",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mh-jsc" => Ok(Algorithm::MhJsc),
            "baseline" => Ok(Algorithm::Baseline),
            "privmin" => Ok(Algorithm::Privmin),
            "exp-all" | "private-minhash-all-steps" => Ok(Algorithm::ExpAll),
            other => Err(Error::Parameter(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// How document pairs are formed from the retained (non-empty) profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSelection {
    /// Document 2i vs document 2i+1. Default; matches corpora where
    /// adjacent lines are meaning-paired.
    Consecutive,
    /// Every unordered pair. Only sensible for small corpora.
    AllPairs,
    /// A fixed number of distinct pairs sampled from the master seed.
    SampledN(usize),
}

/// Full description of one experiment sweep.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub dataset: String,
    pub epsilon_grid: Vec<f64>,
    pub k_grid: Vec<usize>,
    pub threshold: f64,
    pub repetitions: usize,
    pub master_seed: u64,
    pub pair_selection: PairSelection,
    pub shingle: ShingleConfig,
    /// When set, the runtime column is reported as zero so reports are
    /// byte-identical across runs and thread counts.
    pub no_timing: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon_grid.is_empty() || self.k_grid.is_empty() {
            return Err(Error::Parameter("epsilon and K grids must be nonempty".into()));
        }
        if self.epsilon_grid.iter().any(|&e| e <= 0.0 || !e.is_finite()) {
            return Err(Error::Parameter("epsilon grid values must be positive".into()));
        }
        if self.k_grid.contains(&0) {
            return Err(Error::Parameter("K grid values must be >= 1".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Parameter("repetitions must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::Parameter(format!(
                "threshold must be in [0,1], got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// One compared pair: ground-truth Jaccard vs the algorithm's output.
/// The perturbed value is unbounded (the baseline does not clamp).
#[derive(Debug, Clone, PartialEq)]
pub struct PairOutcome {
    pub id_a: String,
    pub id_b: String,
    pub exact: f64,
    pub perturbed: f64,
}

/// Confusion counts at a threshold; "above" means >= on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Classify outcomes against a threshold.
pub fn confusion_counts(outcomes: &[PairOutcome], threshold: f64) -> Confusion {
    let mut c = Confusion::default();
    for o in outcomes {
        let actual = o.exact >= threshold;
        let predicted = o.perturbed >= threshold;
        match (actual, predicted) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
            (true, false) => c.fn_ += 1,
        }
    }
    c
}

/// Precision TP/(TP+FP); 0 when undefined.
pub fn precision(c: &Confusion) -> f64 {
    if c.tp + c.fp == 0 {
        0.0
    } else {
        c.tp as f64 / (c.tp + c.fp) as f64
    }
}

/// Recall TP/(TP+FN); 0 when undefined.
pub fn recall(c: &Confusion) -> f64 {
    if c.tp + c.fn_ == 0 {
        0.0
    } else {
        c.tp as f64 / (c.tp + c.fn_) as f64
    }
}

/// Harmonic mean of precision and recall; all 0/0 cases collapse to 0 so
/// near-zero-TP regimes report a score instead of crashing.
pub fn f1_score(c: &Confusion) -> f64 {
    let p = precision(c);
    let r = recall(c);
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Mean squared error between perturbed and exact similarities.
pub fn mse(outcomes: &[PairOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::Parameter("mse needs at least one outcome".into()));
    }
    Ok(outcomes
        .iter()
        .map(|o| (o.perturbed - o.exact) * (o.perturbed - o.exact))
        .sum::<f64>()
        / outcomes.len() as f64)
}

/// Averaged metrics for one (epsilon, K) grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub k: usize,
    pub epsilon: f64,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub mse: f64,
    pub tp: f64,
    pub fp: f64,
    pub tn: f64,
    pub fn_: f64,
    pub degenerate_runs: usize,
    pub runtime_ms: u64,
}

/// Sweep results plus the configuration echo.
#[derive(Debug, Clone)]
pub struct MetricsReport {
    pub algorithm: Algorithm,
    pub dataset: String,
    pub repetitions: usize,
    pub rows: Vec<GridRow>,
}

pub const REPORT_HEADER: &str =
    "algorithm,dataset,K,epsilon,repetitions,F1,precision,recall,MSE,TP,FP,TN,FN,degenerate_runs,runtime_ms";

/// Format a float with six significant digits, trimming trailing zeros.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let a = x.abs();
    let s = if (1e-4..1e15).contains(&a) {
        let digits_before = a.log10().floor() as i64 + 1;
        let prec = (6 - digits_before).max(0) as usize;
        format!("{x:.prec$}")
    } else {
        let s = format!("{x:.5e}");
        // Trim zeros inside the mantissa of "d.dddddez".
        if let Some(epos) = s.find('e') {
            let (mant, exp) = s.split_at(epos);
            let mant = mant.trim_end_matches('0').trim_end_matches('.');
            return format!("{mant}{exp}");
        }
        s
    };
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

impl MetricsReport {
    /// Render the report in the stable CSV schema.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                self.algorithm.name(),
                self.dataset,
                r.k,
                fmt_sig6(r.epsilon),
                self.repetitions,
                fmt_sig6(r.f1),
                fmt_sig6(r.precision),
                fmt_sig6(r.recall),
                fmt_sig6(r.mse),
                fmt_sig6(r.tp),
                fmt_sig6(r.fp),
                fmt_sig6(r.tn),
                fmt_sig6(r.fn_),
                r.degenerate_runs,
                r.runtime_ms,
            ));
        }
        out
    }
}

/// Profiles retained for the experiment (non-empty after shingling),
/// with ids and pairwise ground truth.
struct Prepared {
    ids: Vec<String>,
    profiles: Vec<ShingleSet>,
    pairs: Vec<(usize, usize)>,
    exact: Vec<f64>,
}

fn prepare(corpus: &[Document], cfg: &ExperimentConfig) -> Result<Prepared> {
    let mut ids = Vec::new();
    let mut profiles = Vec::new();
    for doc in corpus {
        let p = shingle(doc, &cfg.shingle);
        if !p.is_empty() {
            ids.push(doc.id.clone());
            profiles.push(p);
        }
    }
    if profiles.len() < 2 {
        return Err(Error::CorpusTooSmall(format!(
            "need >= 2 non-empty profiles after shingling, got {}",
            profiles.len()
        )));
    }
    let n = profiles.len();
    let pairs: Vec<(usize, usize)> = match cfg.pair_selection {
        PairSelection::Consecutive => (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect(),
        PairSelection::AllPairs => {
            let mut v = Vec::with_capacity(n * (n - 1) / 2);
            for i in 0..n {
                for j in (i + 1)..n {
                    v.push((i, j));
                }
            }
            v
        }
        PairSelection::SampledN(count) => {
            let mut rng = RandomSource::new(cfg.master_seed).substream(&[0x5041_4952]);
            let mut v = Vec::with_capacity(count);
            let mut seen = std::collections::HashSet::new();
            let max_pairs = n * (n - 1) / 2;
            let target = count.min(max_pairs);
            while v.len() < target {
                let i = rng.below(n as u64) as usize;
                let j = rng.below(n as u64) as usize;
                if i == j {
                    continue;
                }
                let key = (i.min(j), i.max(j));
                if seen.insert(key) {
                    v.push(key);
                }
            }
            v
        }
    };
    if pairs.is_empty() {
        return Err(Error::CorpusTooSmall(
            "pair selection produced no pairs".into(),
        ));
    }
    let exact = pairs
        .iter()
        .map(|&(i, j)| jaccard_exact(&profiles[i], &profiles[j]))
        .collect();
    Ok(Prepared {
        ids,
        profiles,
        pairs,
        exact,
    })
}

/// Per-repetition metrics before averaging.
struct RepMetrics {
    f1: f64,
    precision: f64,
    recall: f64,
    mse: f64,
    confusion: Confusion,
    degenerate: usize,
}

fn run_repetition(
    prep: &Prepared,
    cfg: &ExperimentConfig,
    k: usize,
    epsilon: f64,
    rep: u64,
) -> Result<RepMetrics> {
    let root = RandomSource::new(cfg.master_seed);
    let family_seed = root.substream(&[0xFA41, rep]).seed();
    let family = HashFamily::new(k, family_seed)?;

    // Per-document signatures, parallel with per-(rep, grid point, doc)
    // streams so grid points draw independent noise.
    let mut degenerate = 0usize;
    let signatures = match cfg.algorithm {
        Algorithm::MhJsc | Algorithm::Baseline => prep
            .profiles
            .par_iter()
            .map(|p| family.signature(p))
            .collect::<Result<Vec<_>>>()?,
        Algorithm::ExpAll => prep
            .profiles
            .par_iter()
            .enumerate()
            .map(|(d, p)| {
                let mut rng =
                    root.substream(&[0xD0C, rep, k as u64, epsilon.to_bits(), d as u64]);
                private_minhash_signature(p, &family, epsilon, &mut rng)
            })
            .collect::<Result<Vec<_>>>()?,
        Algorithm::Privmin => {
            let reports = prep
                .profiles
                .par_iter()
                .enumerate()
                .map(|(d, p)| {
                    let mut rng =
                        root.substream(&[0xD0C, rep, k as u64, epsilon.to_bits(), d as u64]);
                    privmin_signature(p, &family, epsilon, None, &mut rng)
                })
                .collect::<Result<Vec<_>>>()?;
            degenerate = reports.iter().filter(|r| r.degenerate_no_noise).count();
            reports.into_iter().map(|r| r.signature).collect()
        }
    };

    let outcomes = prep
        .pairs
        .par_iter()
        .enumerate()
        .map(|(pi, &(i, j))| {
            let perturbed = match cfg.algorithm {
                Algorithm::MhJsc | Algorithm::Privmin | Algorithm::ExpAll => {
                    estimate_similarity(&signatures[i], &signatures[j])?
                }
                Algorithm::Baseline => {
                    let mut rng =
                        root.substream(&[0xBA5E, rep, k as u64, epsilon.to_bits(), pi as u64]);
                    baseline_similarity(&signatures[i], &signatures[j], epsilon, &mut rng)?
                }
            };
            Ok(PairOutcome {
                id_a: prep.ids[i].clone(),
                id_b: prep.ids[j].clone(),
                exact: prep.exact[pi],
                perturbed,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let confusion = confusion_counts(&outcomes, cfg.threshold);
    Ok(RepMetrics {
        f1: f1_score(&confusion),
        precision: precision(&confusion),
        recall: recall(&confusion),
        mse: mse(&outcomes)?,
        confusion,
        degenerate,
    })
}

/// Run the full sweep: for every (epsilon, K) grid point, `repetitions`
/// seeded runs are averaged. Deterministic given `master_seed`,
/// independent of thread count.
pub fn run_experiment(corpus: &[Document], cfg: &ExperimentConfig) -> Result<MetricsReport> {
    cfg.validate()?;
    let prep = prepare(corpus, cfg)?;

    let mut rows = Vec::new();
    for &k in &cfg.k_grid {
        for &epsilon in &cfg.epsilon_grid {
            let started = Instant::now();
            let reps: Vec<RepMetrics> = (0..cfg.repetitions as u64)
                .into_par_iter()
                .map(|rep| run_repetition(&prep, cfg, k, epsilon, rep))
                .collect::<Result<Vec<_>>>()?;
            let n = reps.len() as f64;
            let mean = |f: &dyn Fn(&RepMetrics) -> f64| reps.iter().map(f).sum::<f64>() / n;
            rows.push(GridRow {
                k,
                epsilon,
                f1: mean(&|r| r.f1),
                precision: mean(&|r| r.precision),
                recall: mean(&|r| r.recall),
                mse: mean(&|r| r.mse),
                tp: mean(&|r| r.confusion.tp as f64),
                fp: mean(&|r| r.confusion.fp as f64),
                tn: mean(&|r| r.confusion.tn as f64),
                fn_: mean(&|r| r.confusion.fn_ as f64),
                degenerate_runs: reps.iter().map(|r| r.degenerate).sum(),
                runtime_ms: if cfg.no_timing {
                    0
                } else {
                    started.elapsed().as_millis() as u64
                },
            });
        }
    }
    Ok(MetricsReport {
        algorithm: cfg.algorithm,
        dataset: cfg.dataset.clone(),
        repetitions: cfg.repetitions,
        rows,
    })
}
