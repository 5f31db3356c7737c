//! Seeded Monte Carlo estimators for the exact probabilities computed
//! elsewhere in the crate.
//!
//! Each estimator counts hits over `samples` independent draws and
//! reports the frequency together with the binomial standard error
//! sqrt(v(1-v)/samples) and the exact target it approximates, so a
//! caller (or the calibration suite) can ask whether the estimate
//! landed within three standard errors. Sampling is sharded into
//! fixed-size batches, one ChaCha8 stream per batch, making every
//! estimate a pure function of (inputs, samples, seed) — the number of
//! worker threads never changes a digit.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cover::{sequential_draw_probability, CoverInstance};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;
use crate::rng::{sample_batches, shuffle_in_place, stream_rng, Seed};
use crate::shift::{edge_probability, Distribution};
use crate::sperner::prefix_event_probability;
use crate::subset::{Subset, SubsetFamily};

/// A frequency estimate with its exact target.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    /// Hit frequency in [0, 1].
    pub value: f64,
    /// Binomial standard error sqrt(value * (1 - value) / samples).
    pub stderr: f64,
    pub samples: u64,
    pub seed: Seed,
    /// The exact probability being estimated, when known.
    pub exact: Option<Rational>,
}

impl Estimate {
    fn from_hits(hits: u64, samples: u64, seed: Seed, exact: Option<Rational>) -> Self {
        debug_assert!(hits <= samples && samples > 0);
        let value = hits as f64 / samples as f64;
        let stderr = (value * (1.0 - value) / samples as f64).sqrt();
        Estimate {
            value,
            stderr,
            samples,
            seed,
            exact,
        }
    }

    /// Whether the estimate lies within three standard errors of the
    /// exact target (`None` if no target is attached). A zero standard
    /// error demands exact agreement.
    pub fn within_3_sigma(&self) -> Option<bool> {
        self.exact
            .as_ref()
            .map(|t| (self.value - t.to_f64()).abs() <= 3.0 * self.stderr)
    }

    /// The CLI-facing JSON shape for one estimate.
    pub fn to_json(&self) -> Value {
        json!({
            "estimate": self.value,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "exact": self.exact.as_ref().map(Rational::to_string),
            "within_3_sigma": self.within_3_sigma(),
        })
    }
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::Precondition {
            what: "estimators require samples >= 1",
        });
    }
    Ok(())
}

/// Runs the per-batch closure over the deterministic shard layout and
/// sums the hit counts.
fn count_hits<F>(samples: u64, seed: Seed, batch_hits: F) -> u64
where
    F: Fn(&mut ChaCha8Rng, u64) -> u64 + Sync,
{
    sample_batches(samples)
        .par_iter()
        .map(|&(stream, count)| batch_hits(&mut stream_rng(seed, stream), count))
        .sum()
}

/// Estimates [`edge_probability`]: draws two vertices independently
/// from the distribution and counts how often they span an edge.
pub fn estimate_edge_probability(
    g: &Graph,
    d: &Distribution,
    samples: u64,
    seed: Seed,
) -> Result<Estimate> {
    check_samples(samples)?;
    let exact = edge_probability(g, d)?; // also validates dimensions
    // Cumulative weights; the final entry is pinned to 1.0 so a draw
    // in [0, 1) always lands inside the table.
    let mut cum: Vec<f64> = Vec::with_capacity(d.len());
    let mut acc = 0.0f64;
    for p in d.probabilities() {
        acc += p.to_f64();
        cum.push(acc);
    }
    *cum.last_mut().expect("distributions are nonempty") = 1.0;
    let draw = |rng: &mut ChaCha8Rng| {
        let x = rng.random::<f64>();
        cum.partition_point(|&c| c <= x)
    };
    let hits = count_hits(samples, seed, |rng, count| {
        let mut h = 0u64;
        for _ in 0..count {
            let u = draw(rng);
            let v = draw(rng);
            if g.has_edge(u, v) {
                h += 1;
            }
        }
        h
    });
    Ok(Estimate::from_hits(hits, samples, seed, Some(exact)))
}

/// Estimates [`sequential_draw_probability`]: draws a uniform random
/// l-subset (the first l entries of a random permutation) and counts
/// how often it is a member of the family.
pub fn estimate_sequential_draw(
    inst: CoverInstance,
    family: &SubsetFamily,
    samples: u64,
    seed: Seed,
) -> Result<Estimate> {
    check_samples(samples)?;
    let exact = sequential_draw_probability(inst, family)?; // validates blocks
    let n = inst.n();
    let l = inst.l();
    let hits = count_hits(samples, seed, |rng, count| {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut h = 0u64;
        for _ in 0..count {
            shuffle_in_place(rng, &mut perm);
            let mask: u64 = perm[..l].iter().map(|&v| 1u64 << v).sum();
            if family.contains_bits(mask) {
                h += 1;
            }
        }
        h
    });
    Ok(Estimate::from_hits(hits, samples, seed, Some(exact)))
}

/// Estimates [`prefix_event_probability`] for a concrete subset A:
/// how often a random permutation of A's ground set starts with
/// exactly the elements of A.
pub fn estimate_prefix_event(subset: Subset, samples: u64, seed: Seed) -> Result<Estimate> {
    check_samples(samples)?;
    let n = subset.ground_size();
    let a = subset.len();
    let exact = prefix_event_probability(n, a)?;
    let bits = subset.bits();
    let hits = count_hits(samples, seed, |rng, count| {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut h = 0u64;
        for _ in 0..count {
            shuffle_in_place(rng, &mut perm);
            let mask: u64 = perm[..a].iter().map(|&v| 1u64 << v).sum();
            if mask == bits {
                h += 1;
            }
        }
        h
    });
    Ok(Estimate::from_hits(hits, samples, seed, Some(exact)))
}
