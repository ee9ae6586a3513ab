//! Deterministic seed splitting.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded through
//! [`derive`]. The mapping from `(seed, labels...)` to a child seed is FNV-1a
//! over the label bytes followed by a SplitMix64 finalizer, so it is stable
//! across runs, platforms and releases.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from a parent seed and a label.
pub fn derive(seed: u64, label: &str) -> u64 {
    let mut h = FNV_OFFSET ^ splitmix64(seed);
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    splitmix64(h)
}

/// Seed for one pipeline node.
///
/// `depth` counts from the leaf `x` (the innermost operator has depth 1), so
/// wrapping a pipeline in another operator leaves the draws of the existing
/// nodes untouched.
pub fn node_seed(seed: u64, image_index: u64, depth: usize, op: &str) -> u64 {
    derive(seed, &format!("img{image_index}/d{depth}/{op}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_is_stable_and_label_sensitive() {
        assert_eq!(derive(7, "a"), derive(7, "a"));
        assert_ne!(derive(7, "a"), derive(7, "b"));
        assert_ne!(derive(7, "a"), derive(8, "a"));
        // frozen value: changing this breaks reproducibility of stored runs
        assert_eq!(derive(0, ""), splitmix64(FNV_OFFSET ^ splitmix64(0)));
    }

    #[test]
    fn node_seed_depends_on_every_field() {
        let base = node_seed(1, 0, 1, "GN");
        assert_ne!(base, node_seed(2, 0, 1, "GN"));
        assert_ne!(base, node_seed(1, 1, 1, "GN"));
        assert_ne!(base, node_seed(1, 0, 2, "GN"));
        assert_ne!(base, node_seed(1, 0, 1, "F"));
    }
}
