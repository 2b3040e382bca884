//! Deterministic per-check random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A reproducible stream derived from a run seed and a check label, so that
/// independent checks never share draws.
pub fn seeded(seed: u64, label: &str) -> ChaCha8Rng {
    // FNV-1a over the label, folded into the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h.rotate_left(17))
}
