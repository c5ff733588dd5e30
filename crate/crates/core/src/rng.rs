//! Deterministic stream derivation.
//!
//! Every random quantity in the crate is drawn from a `ChaCha8Rng` whose seed
//! is a pure function of (master seed, purpose salt, index). Replications,
//! contents, and matrix entries get independent streams, so results are
//! reproducible regardless of thread scheduling or evaluation order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose salts keep the per-index streams of different subsystems disjoint.
pub mod salt {
    pub const RATE_MATRIX: u64 = 0x6d61_7472_6978_0001;
    pub const RATE_MATRIX_W2: u64 = 0x6d61_7472_6978_0002;
    pub const CONTENT: u64 = 0x636f_6e74_656e_7400;
    pub const REPLICATION: u64 = 0x7265_706c_0000_0001;
    pub const SAMPLING: u64 = 0x7361_6d70_6c65_0001;
    pub const MC_POOL: u64 = 0x6d63_706f_6f6c_0001;
    pub const ROUNDING: u64 = 0x726f_756e_6400_0001;
    pub const REALLOC: u64 = 0x7265_616c_6c6f_6301;
}

/// SplitMix64 finalizer; good avalanche for seed mixing.
#[inline]
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the stream identified by (master, salt, index).
#[inline]
pub fn derive_seed(master: u64, salt: u64, index: u64) -> u64 {
    mix(mix(master ^ salt).wrapping_add(mix(index)))
}

/// Independent RNG for the stream identified by (master, salt, index).
#[inline]
pub fn derive_rng(master: u64, salt: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, salt, index))
}

/// Canonical key of an unordered node pair, usable as a stream index.
#[inline]
pub fn pair_key(n_nodes: u32, a: u32, b: u32) -> u64 {
    debug_assert!(a != b && a < n_nodes && b < n_nodes);
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    u64::from(i) * u64::from(n_nodes) + u64::from(j)
}
