//! Randomization primitives: Laplace sampling, the Exponential-mechanism
//! minimum-hash selector, and the Randomized-Response flip-vector steps.
//!
//! The Exponential mechanism's candidate space is the whole hash domain
//! `[0, p)`. Sampling it exactly is feasible because the score of a
//! candidate depends only on how many profile values lie below it, so the
//! domain partitions into `O(M)` constant-score ranges ([`score_ranges`])
//! and selection reduces to a weighted range choice followed by a uniform
//! draw inside the range.

use crate::error::{Error, Result};
use crate::hashing::HashValueSet;
use crate::rng::RandomSource;

/// Inverse CDF of Laplace(0, b) at `u` in (0, 1). `u = 0.5` maps to 0.
pub fn laplace_inverse_cdf(u: f64, b: f64) -> f64 {
    let c = u - 0.5;
    -b * c.signum() * (1.0 - 2.0 * c.abs()).ln()
}

/// One draw from Laplace(0, b).
pub fn laplace_sample(b: f64, rng: &mut RandomSource) -> Result<f64> {
    if b <= 0.0 || !b.is_finite() {
        return Err(Error::Parameter(format!(
            "laplace scale must be positive and finite, got {b}"
        )));
    }
    Ok(laplace_inverse_cdf(rng.uniform_open(), b))
}

/// Score of candidate `psi`: the negated minimal number of single-element
/// changes to the value set that make `psi` its minimum.
///
/// A member of the set costs one change per value below it; a non-member
/// additionally has to be introduced, but one of the removed below-values
/// can be repurposed for that, so the floor is a single change.
pub fn score(hvs: &HashValueSet, psi: u64) -> Result<i64> {
    if psi >= hvs.domain() {
        return Err(Error::Parameter(format!(
            "candidate {psi} outside domain [0, {})",
            hvs.domain()
        )));
    }
    let below = hvs.count_below(psi) as i64;
    if hvs.contains(psi) {
        Ok(-below)
    } else {
        Ok(-below.max(1))
    }
}

/// A half-open candidate range `[lo, hi)` on which the score is constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoredRange {
    pub lo: u64,
    pub hi: u64,
    pub score: i64,
}

impl ScoredRange {
    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }
}

/// Partition the whole domain `[0, p)` into constant-score ranges.
///
/// With sorted distinct values `v1 < ... < vM`: everything below `v1`
/// scores −1, the singleton `{vi}` scores −(i−1), the open gap after `vi`
/// scores −i, and everything above `vM` scores −M.
pub fn score_ranges(hvs: &HashValueSet) -> Vec<ScoredRange> {
    let values = hvs.values();
    let domain = hvs.domain();
    let mut ranges = Vec::with_capacity(2 * values.len() + 1);
    if values[0] > 0 {
        ranges.push(ScoredRange {
            lo: 0,
            hi: values[0],
            score: -1,
        });
    }
    for (i, &v) in values.iter().enumerate() {
        ranges.push(ScoredRange {
            lo: v,
            hi: v + 1,
            score: -(i as i64),
        });
        let gap_hi = if i + 1 < values.len() {
            values[i + 1]
        } else {
            domain
        };
        if v + 1 < gap_hi {
            ranges.push(ScoredRange {
                lo: v + 1,
                hi: gap_hi,
                score: -(i as i64 + 1),
            });
        }
    }
    ranges
}

/// Exponential-mechanism selection of a minimum hash value.
///
/// Samples `psi` from `[0, p)` with probability proportional to
/// `exp(eps_step * score(psi) / 2)` (sensitivity of the score is 1).
/// Weights are handled in log space, so arbitrarily large `eps_step`
/// degrades gracefully to the argmax and `eps_step = 0` is uniform.
pub fn exp_mech_min_select(
    hvs: &HashValueSet,
    eps_step: f64,
    rng: &mut RandomSource,
) -> Result<u64> {
    if eps_step < 0.0 || !eps_step.is_finite() {
        return Err(Error::Parameter(format!(
            "eps_step must be >= 0 and finite, got {eps_step}"
        )));
    }
    let ranges = score_ranges(hvs);
    let log_weights: Vec<f64> = ranges
        .iter()
        .map(|r| (r.len() as f64).ln() + eps_step * r.score as f64 / 2.0)
        .collect();
    let max_lw = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = log_weights.iter().map(|lw| (lw - max_lw).exp()).collect();
    let total: f64 = weights.iter().sum();

    let mut target = rng.uniform() * total;
    let mut chosen = ranges.len() - 1;
    for (i, w) in weights.iter().enumerate() {
        if target < *w {
            chosen = i;
            break;
        }
        target -= w;
    }
    let r = ranges[chosen];
    Ok(r.lo + rng.below(r.len()))
}

/// The Randomized-Response flip threshold `P_t = e^(eps1/K)/(1+e^(eps1/K))`,
/// always in `[1/2, 1)`. Each bit of the perturbed vector is re-randomized
/// with probability `P_t` and kept with probability `1 - P_t`.
pub fn rr_threshold(eps1: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Parameter("rr_threshold needs K >= 1".into()));
    }
    if eps1 < 0.0 || !eps1.is_finite() {
        return Err(Error::Parameter(format!(
            "eps1 must be >= 0 and finite, got {eps1}"
        )));
    }
    let x = eps1 / k as f64;
    Ok(1.0 / (1.0 + (-x).exp()))
}

/// Length-K binary vector marking which MinHashing steps get Exponential
/// noise: bit 0 = noisy step, bit 1 = exact minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipVector {
    bits: Vec<u8>,
}

impl FlipVector {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Parameter("flip vector bits must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Number of zero bits, i.e. steps marked for Exponential noise.
    pub fn zero_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 0).count()
    }

    /// Indices of zero bits.
    pub fn zero_positions(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| (b == 0).then_some(i))
            .collect()
    }
}

/// Draw the original flip vector: each bit is 0 (noisy step) independently
/// with probability `p_r`, else 1.
pub fn gen_flip_vector(k: usize, p_r: f64, rng: &mut RandomSource) -> Result<FlipVector> {
    check_probability("P_r", p_r)?;
    let bits = (0..k)
        .map(|_| if rng.bernoulli(p_r) { 0 } else { 1 })
        .collect();
    Ok(FlipVector { bits })
}

/// Randomized-Response perturbation of a flip vector.
///
/// Per bit, independently: force 1 with probability `p_t/2`, force 0 with
/// probability `p_t/2`, keep the original with probability `1 - p_t`.
pub fn perturb_flip_vector(
    v: &FlipVector,
    p_t: f64,
    rng: &mut RandomSource,
) -> Result<FlipVector> {
    check_probability("P_t", p_t)?;
    let bits = v
        .bits
        .iter()
        .map(|&b| {
            let u = rng.uniform();
            if u < p_t / 2.0 {
                1
            } else if u < p_t {
                0
            } else {
                b
            }
        })
        .collect();
    Ok(FlipVector { bits })
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::Parameter(format!(
            "{name} must be a probability in [0, 1], got {p}"
        )));
    }
    Ok(())
}
