//! Shared fixtures for the pipeline benchmarks.

use privmin_core::{RandomSource, ShingleSet};

/// Deterministic scattered profile of `size` distinct 32-bit elements.
pub fn synthetic_profile(size: usize, seed: u64) -> ShingleSet {
    let mut rng = RandomSource::new(seed);
    let mut elements = Vec::with_capacity(size);
    while elements.len() < size {
        let v = rng.below(u32::MAX as u64) as u32;
        if !elements.contains(&v) {
            elements.push(v);
        }
    }
    ShingleSet::from_elements(elements)
}

/// A pair of synthetic profiles with roughly the requested overlap.
pub fn synthetic_pair(size: usize, shared: usize, seed: u64) -> (ShingleSet, ShingleSet) {
    let common = synthetic_profile(shared, seed);
    let rng = RandomSource::new(seed ^ 0xBEEF);
    let fill = |tag: u64| {
        let mut elements: Vec<u32> = common.iter().collect();
        let mut sub = rng.substream(&[tag]);
        while elements.len() < size {
            let v = sub.below(u32::MAX as u64) as u32;
            if !elements.contains(&v) {
                elements.push(v);
            }
        }
        ShingleSet::from_elements(elements)
    };
    (fill(1), fill(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_have_requested_sizes() {
        assert_eq!(synthetic_profile(100, 1).len(), 100);
        let (a, b) = synthetic_pair(200, 100, 2);
        assert_eq!(a.len(), 200);
        assert_eq!(b.len(), 200);
        let j = privmin_core::jaccard_exact(&a, &b);
        assert!(j > 0.2 && j < 0.5, "expected ~1/3 overlap, got {j}");
    }
}
