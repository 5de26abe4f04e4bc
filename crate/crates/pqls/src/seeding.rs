//! Deterministic seed derivation for parallel RNG streams.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX2: u64 = 0xC2B2_AE3D_27D4_EB4F;

/// SplitMix64 finalizer: full-avalanche 64-bit mix.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Stable 64-bit stream seed for (generation, branch) under a master seed.
/// Distinct (g, b) pairs map to distinct streams.
pub fn derive_seed(master_seed: u64, generation_index: u64, branch_index: u64) -> u64 {
    splitmix64(master_seed ^ generation_index.wrapping_mul(GOLDEN) ^ branch_index.wrapping_mul(MIX2))
}

/// Fold an ordered tuple of values into one seed; order-sensitive.
pub fn mix_seeds(parts: &[u64]) -> u64 {
    let mut acc = 0x5151_7765_6C63_6F6Du64;
    for &p in parts {
        acc = splitmix64(acc ^ p.wrapping_mul(GOLDEN));
    }
    acc
}
