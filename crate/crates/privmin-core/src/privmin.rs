//! End-to-end private signature generation.
//!
//! Two profile-perturbation routes and one output-perturbation baseline:
//!
//! * [`private_minhash_signature`] runs the Exponential mechanism at every
//!   one of the K MinHashing steps with a per-step budget of `epsilon/K`.
//! * [`privmin_signature`] first spends half the budget on a
//!   Randomized-Response selection of which steps get noise, then spreads
//!   the other half over the m selected steps.
//! * [`baseline_similarity`] adds Laplace noise scaled to the estimator's
//!   sensitivity `1/K` directly to the released similarity.

use serde::Serialize;

use crate::corpus::ShingleSet;
use crate::error::{Error, Result};
use crate::hashing::{estimate_similarity, HashFamily, Signature};
use crate::mech::{
    exp_mech_min_select, gen_flip_vector, laplace_sample, perturb_flip_vector, rr_threshold,
    FlipVector,
};
use crate::rng::RandomSource;

/// Privacy accounting record for one PrivMin run.
#[derive(Debug, Clone, Serialize)]
pub struct BudgetSplit {
    /// Total budget.
    pub epsilon: f64,
    /// Budget spent on the Randomized-Response step selection.
    pub eps1: f64,
    /// Budget spent on the Exponential-mechanism value selections.
    pub eps2: f64,
    /// Keep threshold derived from eps1.
    pub p_t: f64,
    /// Number of noisy steps (zero bits of the perturbed flip vector).
    pub m: usize,
    /// Per-noisy-step budget eps2/m; 0 when m = 0.
    pub eps_step: f64,
}

/// Audit record of one PrivMin signature generation.
#[derive(Debug, Clone)]
pub struct PrivminReport {
    pub signature: Signature,
    pub budget: BudgetSplit,
    pub flip_vector_final: FlipVector,
    /// Indices produced by the Exponential sampler (zero bits of the
    /// final flip vector).
    pub noisy_positions: Vec<usize>,
    /// Set when m = 0: no step received noise and the plain minimums were
    /// returned unchanged.
    pub degenerate_no_noise: bool,
    /// Set when the caller overrode the fixed 50/50 budget split.
    pub custom_split: bool,
}

/// JSON-lines audit row emitted alongside signature files.
#[derive(Debug, Clone, Serialize)]
pub struct AuditRecord {
    pub id: String,
    pub epsilon: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub m: usize,
    #[serde(rename = "P_t")]
    pub p_t: f64,
    pub noisy_positions: Vec<usize>,
    pub degenerate_no_noise: bool,
}

impl PrivminReport {
    pub fn audit_record(&self, id: &str) -> AuditRecord {
        AuditRecord {
            id: id.to_string(),
            epsilon: self.budget.epsilon,
            eps1: self.budget.eps1,
            eps2: self.budget.eps2,
            m: self.budget.m,
            p_t: self.budget.p_t,
            noisy_positions: self.noisy_positions.clone(),
            degenerate_no_noise: self.degenerate_no_noise,
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::Parameter(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    Ok(())
}

/// Private MinHash Value Generation: every position is selected by the
/// Exponential mechanism with per-step budget `epsilon/K`, which makes the
/// per-step exponent `epsilon * q / (2K)`.
pub fn private_minhash_signature(
    s: &ShingleSet,
    family: &HashFamily,
    epsilon: f64,
    rng: &mut RandomSource,
) -> Result<Signature> {
    check_epsilon(epsilon)?;
    if s.is_empty() {
        return Err(Error::EmptyProfile("private_minhash_signature"));
    }
    let k = family.k();
    let eps_step = epsilon / k as f64;
    let mut mins = Vec::with_capacity(k);
    for idx in 0..k {
        let hvs = family.hash_values(idx, s)?;
        mins.push(exp_mech_min_select(&hvs, eps_step, rng)?);
    }
    Ok(Signature {
        mins,
        family_seed: family.seed(),
        perturbed: true,
    })
}

/// The PrivMin algorithm with the fixed 50/50 budget split and `P_r = P_t`.
pub fn privmin_signature(
    s: &ShingleSet,
    family: &HashFamily,
    epsilon: f64,
    p_r: Option<f64>,
    rng: &mut RandomSource,
) -> Result<PrivminReport> {
    check_epsilon(epsilon)?;
    let eps1 = epsilon / 2.0;
    let eps2 = epsilon / 2.0;
    let p_t = rr_threshold(eps1, family.k())?;
    let p_r = p_r.unwrap_or(p_t);
    privmin_with_params(s, family, epsilon, eps1, eps2, p_t, p_r, false, rng)
}

/// Escape hatch with a caller-chosen split. The report is flagged
/// `custom_split` so downstream accounting can tell it apart.
#[allow(clippy::too_many_arguments)]
pub fn privmin_signature_with_split(
    s: &ShingleSet,
    family: &HashFamily,
    eps1: f64,
    eps2: f64,
    p_r: Option<f64>,
    rng: &mut RandomSource,
) -> Result<PrivminReport> {
    check_epsilon(eps1)?;
    check_epsilon(eps2)?;
    let p_t = rr_threshold(eps1, family.k())?;
    let p_r = p_r.unwrap_or(p_t);
    privmin_with_params(s, family, eps1 + eps2, eps1, eps2, p_t, p_r, true, rng)
}

/// Shared body; `p_t` is taken as given so tests can force branch choices.
#[allow(clippy::too_many_arguments)]
pub(crate) fn privmin_with_params(
    s: &ShingleSet,
    family: &HashFamily,
    epsilon: f64,
    eps1: f64,
    eps2: f64,
    p_t: f64,
    p_r: f64,
    custom_split: bool,
    rng: &mut RandomSource,
) -> Result<PrivminReport> {
    if s.is_empty() {
        return Err(Error::EmptyProfile("privmin_signature"));
    }
    let k = family.k();
    let original = gen_flip_vector(k, p_r, rng)?;
    let perturbed = perturb_flip_vector(&original, p_t, rng)?;
    let m = perturbed.zero_count();
    let eps_step = if m > 0 { eps2 / m as f64 } else { 0.0 };

    let mut mins = Vec::with_capacity(k);
    for idx in 0..k {
        let hvs = family.hash_values(idx, s)?;
        if perturbed.bits()[idx] == 0 {
            mins.push(exp_mech_min_select(&hvs, eps_step, rng)?);
        } else {
            mins.push(hvs.min());
        }
    }

    let noisy_positions = perturbed.zero_positions();
    Ok(PrivminReport {
        signature: Signature {
            mins,
            family_seed: family.seed(),
            perturbed: true,
        },
        budget: BudgetSplit {
            epsilon,
            eps1,
            eps2,
            p_t,
            m,
            eps_step,
        },
        flip_vector_final: perturbed,
        noisy_positions,
        degenerate_no_noise: m == 0,
        custom_split,
    })
}

/// Sensitivity of the MinHash similarity estimator: changing one element
/// of one profile moves the match count by at most one, so `1/K`.
pub fn sensitivity_mh(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Parameter("sensitivity_mh needs K >= 1".into()));
    }
    Ok(1.0 / k as f64)
}

/// Output-perturbation baseline: the plain estimate plus
/// `Laplace((1/K)/epsilon)` noise. The result is deliberately NOT clamped
/// to [0, 1]; clamping would shrink the noise variance below 2·(1/(εK))².
pub fn baseline_similarity(
    a: &Signature,
    b: &Signature,
    epsilon: f64,
    rng: &mut RandomSource,
) -> Result<f64> {
    check_epsilon(epsilon)?;
    if a.perturbed || b.perturbed {
        return Err(Error::IncompatibleSignatures(
            "baseline_similarity requires plain (unperturbed) signatures".into(),
        ));
    }
    let estimate = estimate_similarity(a, b)?;
    let scale = sensitivity_mh(a.k())? / epsilon;
    Ok(estimate + laplace_sample(scale, rng)?)
}

/// Clamp helper for consumers that need an in-range similarity. Off by
/// default everywhere so measured error matches the unclamped analysis.
pub fn clamp_similarity(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}
