//! Differentially private MinHash-based Jaccard similarity.
//!
//! The pipeline turns documents into shingle-set profiles, compresses
//! profiles into MinHash signatures, and estimates Jaccard similarity from
//! positional signature agreement. On top of the plain pipeline sit three
//! privacy mechanisms:
//!
//! * an Exponential-mechanism selector that replaces the exact per-step
//!   minimum with a score-weighted draw over the whole hash domain,
//! * a Randomized-Response step selection that privately decides which of
//!   the K MinHashing steps receive that noise, and
//! * a Laplace output-perturbation baseline calibrated to the estimator's
//!   1/K sensitivity.
//!
//! [`analysis`] carries the closed-form concentration probability, the
//! conditional set-operation epsilon built from it, and the usefulness
//! bound of the step selection. [`eval`] is the experiment harness that
//! sweeps epsilon and K over a corpus and reports F1/MSE as CSV.
//!
//! All randomness flows through explicit seeded [`RandomSource`] streams;
//! any result can be reproduced bit-for-bit from its seed.

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod hashing;
pub mod mech;
pub mod privmin;
pub mod rng;

pub use corpus::{
    jaccard_exact, load_corpus, shingle, CorpusFormat, Document, LoadedCorpus, Normalizer,
    ShingleConfig, ShingleSet, ShingleUnit,
};
pub use error::{Error, Result};
pub use eval::{
    confusion_counts, f1_score, mse, run_experiment, Algorithm, Confusion, ExperimentConfig,
    GridRow, MetricsReport, PairOutcome, PairSelection,
};
pub use hashing::{
    estimate_similarity, estimate_similarity_with, parse_signature_line, write_signature_line,
    HashFamily, HashValueSet, MatchMode, Signature, MINHASH_PRIME,
};
pub use mech::{
    exp_mech_min_select, gen_flip_vector, laplace_sample, perturb_flip_vector, rr_threshold,
    score, score_ranges, FlipVector, ScoredRange,
};
pub use privmin::{
    baseline_similarity, private_minhash_signature, privmin_signature,
    privmin_signature_with_split, sensitivity_mh, AuditRecord, BudgetSplit, PrivminReport,
};
pub use rng::RandomSource;

pub use analysis::{
    approx_probability, conditional_dpso_epsilon, usefulness_bound, ApproxQuery, DpsoQuery,
    UsefulnessOutcome, UsefulnessQuery,
};
