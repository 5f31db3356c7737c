//! Seeded, reproducible randomness.
//!
//! All randomized entry points take an explicit [`Seed`]. Work that may
//! be sharded across workers derives one ChaCha8 stream per shard from
//! the same seed ([`stream_rng`]), so results are identical no matter
//! how many threads executed the shards.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

/// Number of samples per Monte Carlo shard. Fixed so that the shard
/// decomposition (and therefore every estimate) is independent of the
/// worker count.
pub(crate) const BATCH_SAMPLES: u64 = 1 << 14;

/// A 64-bit seed for the crate's deterministic randomness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Seed(u64);

impl Seed {
    /// Used by the CLI when no seed is given.
    pub const DEFAULT: Seed = Seed(0xC0FFEE);

    pub fn new(value: u64) -> Self {
        Seed(value)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

impl Default for Seed {
    fn default() -> Self {
        Seed::DEFAULT
    }
}

impl Serialize for Seed {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.0)
    }
}

/// Generator for shard `stream` of the given seed. Streams with the
/// same seed are independent ChaCha8 streams of one keyed cipher.
pub fn stream_rng(seed: Seed, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream(stream);
    rng
}

/// Uniform random permutation of {0, .., n-1} by Fisher-Yates on
/// stream 0 of the seed.
pub fn random_permutation(n: usize, seed: Seed) -> Vec<usize> {
    permutation_with(&mut stream_rng(seed, 0), n)
}

/// Fisher-Yates using the supplied generator; the workhorse behind
/// [`random_permutation`] and the sampling loops.
pub(crate) fn permutation_with<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    shuffle_in_place(rng, &mut perm);
    perm
}

pub(crate) fn shuffle_in_place<R: Rng>(rng: &mut R, perm: &mut [usize]) {
    for i in (1..perm.len()).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
}

/// Shard layout for `samples` total samples: (stream index, samples in
/// that shard), covering the total in fixed-size batches.
pub(crate) fn sample_batches(samples: u64) -> Vec<(u64, u64)> {
    let full = samples / BATCH_SAMPLES;
    let rest = samples % BATCH_SAMPLES;
    let mut batches: Vec<(u64, u64)> = (0..full).map(|b| (b, BATCH_SAMPLES)).collect();
    if rest > 0 {
        batches.push((full, rest));
    }
    batches
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_is_a_permutation() {
        for n in 0..20 {
            let mut perm = random_permutation(n, Seed::new(7));
            perm.sort_unstable();
            assert_eq!(perm, (0..n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn same_seed_same_permutation() {
        assert_eq!(
            random_permutation(10, Seed::new(42)),
            random_permutation(10, Seed::new(42))
        );
        assert_ne!(
            random_permutation(10, Seed::new(42)),
            random_permutation(10, Seed::new(43))
        );
    }

    #[test]
    fn streams_differ() {
        let a: Vec<usize> = permutation_with(&mut stream_rng(Seed::new(1), 0), 12);
        let b: Vec<usize> = permutation_with(&mut stream_rng(Seed::new(1), 1), 12);
        assert_ne!(a, b);
    }

    #[test]
    fn batch_layout_covers_exactly() {
        for samples in [1, 100, BATCH_SAMPLES - 1, BATCH_SAMPLES, BATCH_SAMPLES + 1, 1_000_000] {
            let batches = sample_batches(samples);
            assert_eq!(batches.iter().map(|&(_, c)| c).sum::<u64>(), samples);
            for (i, &(stream, count)) in batches.iter().enumerate() {
                assert_eq!(stream, i as u64);
                assert!(count <= BATCH_SAMPLES && count > 0);
            }
        }
        assert!(sample_batches(0).is_empty());
    }

    /// Fixed-seed sanity check of permutation uniformity: each of the
    /// 6 orderings of {0,1,2} must land within +/-5% of 1/6 over 100k
    /// draws (about 7 standard deviations of slack, so a correct
    /// shuffle never trips it).
    #[test]
    fn permutation_uniformity_on_three_elements() {
        let samples = 100_000u64;
        let mut counts = [0u64; 27];
        let mut rng = stream_rng(Seed::DEFAULT, 0);
        for _ in 0..samples {
            let p = permutation_with(&mut rng, 3);
            counts[p[0] * 9 + p[1] * 3 + p[2]] += 1;
        }
        let expected = samples as f64 / 6.0;
        let seen: Vec<u64> = counts.iter().copied().filter(|&c| c > 0).collect();
        assert_eq!(seen.len(), 6, "all 6 orderings must occur");
        for &c in &seen {
            let dev = (c as f64 - expected).abs() / expected;
            assert!(dev <= 0.05, "ordering frequency off by {:.2}%", dev * 100.0);
        }
    }
}
