//! MinHash family, signature generation and the similarity estimator.
//!
//! The family is the standard affine one: `h_k(x) = (a_k·x + b_k) mod p`
//! over the prime `p = 4294967311` (the smallest prime above 2^32), so
//! every hash value lives in the finite domain `[0, p)` the Exponential
//! mechanism later samples from.

use crate::corpus::ShingleSet;
use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// Smallest prime larger than 2^32. Upper bound (exclusive) of all hash
/// values and of the Exponential mechanism's candidate domain.
pub const MINHASH_PRIME: u64 = 4_294_967_311;

/// A seeded family of `K` affine hash functions over `[0, MINHASH_PRIME)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFamily {
    params: Vec<(u64, u64)>,
    seed: u64,
}

impl HashFamily {
    /// Build a family of `k` hash functions deterministically from `seed`.
    pub fn new(k: usize, seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parameter("hash family needs K >= 1".into()));
        }
        let mut rng = RandomSource::new(seed).substream(&[0x4841_5348]);
        let params = (0..k)
            .map(|_| {
                let a = 1 + rng.below(MINHASH_PRIME - 1);
                let b = rng.below(MINHASH_PRIME);
                (a, b)
            })
            .collect();
        Ok(Self { params, seed })
    }

    /// Test-only constructor with explicit coefficients.
    #[cfg(test)]
    pub(crate) fn from_params(params: Vec<(u64, u64)>, seed: u64) -> Self {
        Self { params, seed }
    }

    pub fn k(&self) -> usize {
        self.params.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn params(&self) -> &[(u64, u64)] {
        &self.params
    }

    /// Apply hash function `k` (0-based) to a single element.
    pub fn hash_one(&self, k: usize, x: u32) -> Result<u64> {
        let &(a, b) = self
            .params
            .get(k)
            .ok_or_else(|| Error::Parameter(format!("hash index {k} out of range")))?;
        Ok(affine_hash(a, b, x))
    }

    /// Hash every element of a profile under function `k`.
    pub fn hash_values(&self, k: usize, s: &ShingleSet) -> Result<HashValueSet> {
        if s.is_empty() {
            return Err(Error::EmptyProfile("hash_values"));
        }
        let &(a, b) = self
            .params
            .get(k)
            .ok_or_else(|| Error::Parameter(format!("hash index {k} out of range")))?;
        let values: Vec<u64> = s.iter().map(|x| affine_hash(a, b, x)).collect();
        HashValueSet::new(values, MINHASH_PRIME, s.len())
    }

    /// Plain MinHash signature: position `k` holds `min h_k(S)`.
    pub fn signature(&self, s: &ShingleSet) -> Result<Signature> {
        if s.is_empty() {
            return Err(Error::EmptyProfile("minhash_signature"));
        }
        let mins = self
            .params
            .iter()
            .map(|&(a, b)| s.iter().map(|x| affine_hash(a, b, x)).min().unwrap())
            .collect();
        Ok(Signature {
            mins,
            family_seed: self.seed,
            perturbed: false,
        })
    }
}

fn affine_hash(a: u64, b: u64, x: u32) -> u64 {
    // a, b < p < 2^33 and x < 2^32, so the product needs 128-bit headroom.
    ((a as u128 * x as u128 + b as u128) % MINHASH_PRIME as u128) as u64
}

/// The multiset-collapsed hash values of one profile under one hash
/// function, together with the candidate domain they live in.
///
/// Values are sorted, distinct and strictly below `domain`. Construction
/// rejects empty inputs, so downstream score/selection code never sees an
/// empty value set. Tests shrink `domain` to small sizes to make
/// exhaustive enumeration of the Exponential mechanism feasible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashValueSet {
    values: Vec<u64>,
    domain: u64,
    source_size: usize,
}

impl HashValueSet {
    pub fn new(mut values: Vec<u64>, domain: u64, source_size: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyProfile("hash value set"));
        }
        values.sort_unstable();
        values.dedup();
        if let Some(&max) = values.last() {
            if max >= domain {
                return Err(Error::Parameter(format!(
                    "hash value {max} outside domain [0, {domain})"
                )));
            }
        }
        Ok(Self {
            values,
            domain,
            source_size,
        })
    }

    /// Sorted distinct values.
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Exclusive upper bound of the candidate domain.
    pub fn domain(&self) -> u64 {
        self.domain
    }

    /// Number of input elements before collision collapse.
    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn min(&self) -> u64 {
        self.values[0]
    }

    pub fn contains(&self, v: u64) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    /// Count of stored values strictly below `v`.
    pub fn count_below(&self, v: u64) -> usize {
        self.values.partition_point(|&x| x < v)
    }
}

/// Ordered length-K vector of (possibly perturbed) minimum hash values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub mins: Vec<u64>,
    pub family_seed: u64,
    pub perturbed: bool,
}

impl Signature {
    pub fn k(&self) -> usize {
        self.mins.len()
    }

    fn check_compatible(&self, other: &Signature) -> Result<()> {
        if self.family_seed != other.family_seed {
            return Err(Error::IncompatibleSignatures(format!(
                "family seeds differ: {} vs {}",
                self.family_seed, other.family_seed
            )));
        }
        if self.k() != other.k() {
            return Err(Error::IncompatibleSignatures(format!(
                "K differs: {} vs {}",
                self.k(),
                other.k()
            )));
        }
        Ok(())
    }
}

/// How signature agreement is counted by the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    /// Index-wise match count (the classic unbiased estimator).
    #[default]
    Positional,
    /// |set(mins_A) ∩ set(mins_B)| / K, for sensitivity analysis.
    ValueSet,
}

/// MinHash similarity estimate in `{0, 1/K, ..., 1}` (positional mode).
pub fn estimate_similarity(a: &Signature, b: &Signature) -> Result<f64> {
    estimate_similarity_with(a, b, MatchMode::Positional)
}

/// Similarity estimate with an explicit match mode.
pub fn estimate_similarity_with(a: &Signature, b: &Signature, mode: MatchMode) -> Result<f64> {
    a.check_compatible(b)?;
    let k = a.k();
    let matches = match mode {
        MatchMode::Positional => a
            .mins
            .iter()
            .zip(&b.mins)
            .filter(|(x, y)| x == y)
            .count(),
        MatchMode::ValueSet => {
            let mut xs: Vec<u64> = a.mins.clone();
            xs.sort_unstable();
            xs.dedup();
            let mut ys: Vec<u64> = b.mins.clone();
            ys.sort_unstable();
            ys.dedup();
            xs.iter().filter(|x| ys.binary_search(x).is_ok()).count()
        }
    };
    Ok(matches as f64 / k as f64)
}

/// Serialize one signature as `id,K,family_seed,perturbed,m1 m2 ... mK`.
///
/// The id must not contain commas or newlines; round trips are bit exact.
pub fn write_signature_line(id: &str, sig: &Signature) -> Result<String> {
    if id.contains(',') || id.contains('\n') {
        return Err(Error::Parameter(format!(
            "document id {id:?} cannot be serialized (contains ',' or newline)"
        )));
    }
    let mins = sig
        .mins
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    Ok(format!(
        "{},{},{},{},{}",
        id,
        sig.k(),
        sig.family_seed,
        u8::from(sig.perturbed),
        mins
    ))
}

/// Parse a line produced by [`write_signature_line`].
pub fn parse_signature_line(line: &str) -> Result<(String, Signature)> {
    let parts: Vec<&str> = line.trim_end_matches(['\r', '\n']).splitn(5, ',').collect();
    if parts.len() != 5 {
        return Err(Error::SignatureParse(format!(
            "expected 5 comma-separated fields, got {}",
            parts.len()
        )));
    }
    let id = parts[0].to_string();
    let k: usize = parts[1]
        .parse()
        .map_err(|_| Error::SignatureParse(format!("bad K field {:?}", parts[1])))?;
    let family_seed: u64 = parts[2]
        .parse()
        .map_err(|_| Error::SignatureParse(format!("bad seed field {:?}", parts[2])))?;
    let perturbed = match parts[3] {
        "0" => false,
        "1" => true,
        other => {
            return Err(Error::SignatureParse(format!(
                "bad perturbed flag {other:?}"
            )))
        }
    };
    let mins: Vec<u64> = parts[4]
        .split_whitespace()
        .map(|m| {
            m.parse()
                .map_err(|_| Error::SignatureParse(format!("bad min value {m:?}")))
        })
        .collect::<Result<_>>()?;
    if mins.len() != k {
        return Err(Error::SignatureParse(format!(
            "K field says {k} but found {} min values",
            mins.len()
        )));
    }
    Ok((
        id,
        Signature {
            mins,
            family_seed,
            perturbed,
        },
    ))
}
