//! Deterministic keyed random streams.
//!
//! Every draw is a pure function of a 64-bit seed plus a short key (purpose
//! tag, phase, vertex id, iteration, ...). Draws for different keys are
//! independent of evaluation order, so concurrent and serial executions of
//! the same algorithm see identical randomness.

/// Purpose tags used to separate the streams of one seed.
pub mod tag {
    /// Per-vertex, per-iteration freeze thresholds.
    pub const THRESHOLD: u64 = 0x51;
    /// Vertex-to-machine assignment.
    pub const PARTITION: u64 = 0x52;
}

/// splitmix64 finalizer; full-avalanche mixing of a 64-bit word.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash a seed and key words into a uniform 64-bit value.
pub fn keyed_u64(seed: u64, words: &[u64]) -> u64 {
    let mut h = mix64(seed ^ 0xa076_1d64_78bd_642f);
    for &w in words {
        h = mix64(h ^ mix64(w));
    }
    h
}

/// Uniform draw in `[0, 1)` for the given key.
pub fn keyed_unit(seed: u64, words: &[u64]) -> f64 {
    // Top 53 bits give a dyadic rational in [0, 1).
    (keyed_u64(seed, words) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in `[0, bound)` for the given key. `bound` must be nonzero.
pub fn keyed_range(seed: u64, words: &[u64], bound: u64) -> u64 {
    debug_assert!(bound > 0);
    // Fixed-point multiply; bias is at most 2^-64 per draw.
    ((keyed_u64(seed, words) as u128 * bound as u128) >> 64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_deterministic() {
        let a = keyed_u64(7, &[tag::THRESHOLD, 3, 141, 5]);
        let b = keyed_u64(7, &[tag::THRESHOLD, 3, 141, 5]);
        assert_eq!(a, b);
    }

    #[test]
    fn distinct_keys_differ() {
        let base = keyed_u64(7, &[1, 2, 3]);
        assert_ne!(base, keyed_u64(8, &[1, 2, 3]));
        assert_ne!(base, keyed_u64(7, &[1, 2, 4]));
        assert_ne!(base, keyed_u64(7, &[2, 1, 3]));
        assert_ne!(base, keyed_u64(7, &[1, 2]));
    }

    #[test]
    fn unit_draws_look_uniform() {
        let n = 20_000;
        let mut sum = 0.0;
        let mut buckets = [0usize; 10];
        for v in 0..n {
            let u = keyed_unit(42, &[tag::THRESHOLD, 0, v, 0]);
            assert!((0.0..1.0).contains(&u));
            sum += u;
            buckets[(u * 10.0) as usize] += 1;
        }
        let mean = sum / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
        for (i, &b) in buckets.iter().enumerate() {
            let frac = b as f64 / n as f64;
            assert!((frac - 0.1).abs() < 0.02, "bucket {i}: {frac}");
        }
    }

    #[test]
    fn range_draws_cover_all_values() {
        let mut seen = [false; 7];
        for v in 0..200 {
            seen[keyed_range(1, &[tag::PARTITION, 0, v], 7) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
