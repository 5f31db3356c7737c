//! Antichains of subsets and the LYM inequality.
//!
//! For an antichain F on {0, .., n-1} draw a uniform random
//! permutation and, for each member A, let E_A be the event "the first
//! |A| entries of the permutation are exactly the elements of A". Each
//! E_A has probability 1/C(n,|A|), and two such events can only fire
//! together when one member contains the other — impossible in an
//! antichain. Disjointness gives the LYM inequality
//! sum 1/C(n,|A|) <= 1, which caps |F| by C(n, floor(n/2)).
//! The middle layer attains the cap, and a tiny exhaustive oracle
//! confirms both facts for n <= 4.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::counting::binomial;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::rng::{sample_batches, shuffle_in_place, stream_rng, Seed};
use crate::subset::{Subset, SubsetFamily};

/// True iff no member strictly contains another. Duplicate-freeness is
/// already guaranteed by [`SubsetFamily`], so mutual non-inclusion of
/// distinct members is what remains.
pub fn is_antichain(family: &SubsetFamily) -> bool {
    let members = family.members();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            if a.is_subset_of(b) || b.is_subset_of(a) {
                return false;
            }
        }
    }
    true
}

/// C(n, floor(n/2)): the size of the middle layer, and the maximum
/// size of any antichain.
pub fn sperner_bound(n: usize) -> BigUint {
    binomial(n as u64, (n / 2) as u64)
}

/// Probability 1/C(n,a) that a uniform random permutation of
/// {0, .., n-1} starts with a prescribed a-element set.
pub fn prefix_event_probability(n: usize, a: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Precondition {
            what: "prefix_event_probability requires n >= 1",
        });
    }
    if a > n {
        return Err(Error::IndexOutOfRange { index: a, n });
    }
    Rational::from_counts(&BigUint::from(1u32), &binomial(n as u64, a as u64))
}

/// The LYM sum of a family: sum over members A of 1/C(n,|A|). For an
/// antichain this is at most 1 exactly.
pub fn lym_sum(family: &SubsetFamily) -> Rational {
    let n = family.ground_size() as u64;
    family
        .iter()
        .map(|a| {
            Rational::from_counts(&BigUint::from(1u32), &binomial(n, a.len() as u64))
                .expect("C(n,a) >= 1 for a <= n")
        })
        .sum()
}

const MAX_ANTICHAIN_N: usize = 4;

/// Visits every antichain over {0, .., n-1} exactly once (including
/// the empty family), pruning any partial family that already contains
/// a comparable pair. There are 2, 3, 6, 20, 168 of them for
/// n = 0..4 — and 7581 already at n = 5, hence the cap.
pub fn enumerate_antichains<F: FnMut(&SubsetFamily)>(n: usize, mut visit: F) -> Result<()> {
    if n > MAX_ANTICHAIN_N {
        return Err(Error::BruteForceLimit {
            what: "enumerate_antichains",
            value: n,
            limit: MAX_ANTICHAIN_N,
        });
    }
    fn comparable(a: u64, b: u64) -> bool {
        a & b == a || a & b == b
    }
    fn recurse<F: FnMut(&SubsetFamily)>(
        n: usize,
        mask: u64,
        chosen: &mut Vec<u64>,
        visit: &mut F,
    ) {
        if mask == 1u64 << n {
            let family = SubsetFamily::from_subsets(
                n,
                chosen
                    .iter()
                    .map(|&bits| Subset::from_bits(n, bits).expect("bits < 2^n")),
            )
            .expect("chosen masks are distinct");
            visit(&family);
            return;
        }
        recurse(n, mask + 1, chosen, visit);
        if chosen.iter().all(|&c| !comparable(c, mask)) {
            chosen.push(mask);
            recurse(n, mask + 1, chosen, visit);
            chosen.pop();
        }
    }
    recurse(n, 0, &mut Vec::new(), &mut visit);
    Ok(())
}

/// Exhaustive maximum antichain size; the independent oracle for
/// [`sperner_bound`].
pub fn max_antichain_bruteforce(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Precondition {
            what: "max_antichain_bruteforce requires n >= 1",
        });
    }
    let mut best = 0;
    enumerate_antichains(n, |family| best = best.max(family.len()))?;
    Ok(best)
}

/// Empirical prefix-event frequencies for a family: how often each
/// member was exactly the permutation prefix of its size, and how
/// often two or more members fired on the same permutation. For an
/// antichain the co-fire count is exactly zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixEventSimulation {
    hits: Vec<u64>,
    co_fire: u64,
    samples: u64,
}

impl PrefixEventSimulation {
    /// Per-member hit counts, in family order.
    pub fn hits(&self) -> &[u64] {
        &self.hits
    }

    /// Permutations on which at least two events fired.
    pub fn co_fire_count(&self) -> u64 {
        self.co_fire
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    /// Per-member empirical frequencies, in family order.
    pub fn frequencies(&self) -> Vec<f64> {
        self.hits
            .iter()
            .map(|&h| h as f64 / self.samples as f64)
            .collect()
    }
}

/// Samples `samples` random permutations (sharded deterministically by
/// seed) and tallies the prefix events of every family member.
pub fn simulate_prefix_events(
    family: &SubsetFamily,
    samples: u64,
    seed: Seed,
) -> Result<PrefixEventSimulation> {
    if samples == 0 {
        return Err(Error::Precondition {
            what: "simulate_prefix_events requires samples >= 1",
        });
    }
    let n = family.ground_size();
    let member_bits: Vec<(u64, usize)> = family.iter().map(|m| (m.bits(), m.len())).collect();
    let m = member_bits.len();

    let (hits, co_fire) = sample_batches(samples)
        .par_iter()
        .map(|&(stream, count)| {
            let mut rng = stream_rng(seed, stream);
            let mut perm: Vec<usize> = (0..n).collect();
            let mut prefix = vec![0u64; n + 1];
            let mut hits = vec![0u64; m];
            let mut co_fire = 0u64;
            for _ in 0..count {
                shuffle_in_place(&mut rng, &mut perm);
                for (i, &v) in perm.iter().enumerate() {
                    prefix[i + 1] = prefix[i] | 1 << v;
                }
                let mut fired = 0u32;
                for (j, &(bits, len)) in member_bits.iter().enumerate() {
                    if prefix[len] == bits {
                        hits[j] += 1;
                        fired += 1;
                    }
                }
                if fired >= 2 {
                    co_fire += 1;
                }
            }
            (hits, co_fire)
        })
        .reduce(
            || (vec![0u64; m], 0u64),
            |(mut ha, ca), (hb, cb)| {
                for (a, b) in ha.iter_mut().zip(hb) {
                    *a += b;
                }
                (ha, ca + cb)
            },
        );

    Ok(PrefixEventSimulation {
        hits,
        co_fire,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(n: usize, members: &[&[usize]]) -> SubsetFamily {
        SubsetFamily::from_subsets(
            n,
            members
                .iter()
                .map(|m| Subset::from_elements(n, m).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn antichain_detection() {
        assert!(is_antichain(&family(4, &[&[0, 1], &[1, 2], &[2, 3]])));
        assert!(!is_antichain(&family(4, &[&[0], &[0, 1]])));
        assert!(is_antichain(&family(4, &[])));
        assert!(is_antichain(&family(4, &[&[0, 1, 2]])));
        // The empty set is below everything.
        assert!(!is_antichain(&family(4, &[&[], &[2]])));
    }

    #[test]
    fn bound_values() {
        let expected = [1u32, 1, 2, 3, 6, 10, 20];
        for (n, &want) in expected.iter().enumerate() {
            assert_eq!(sperner_bound(n), BigUint::from(want), "bound at n={n}");
        }
    }

    #[test]
    fn middle_layer_attains_bound() {
        for n in 1..=6 {
            let middle = SubsetFamily::from_subsets(
                n,
                crate::subset::enumerate_subsets(n, n / 2).unwrap(),
            )
            .unwrap();
            assert!(is_antichain(&middle));
            assert_eq!(
                BigUint::from(middle.len()),
                sperner_bound(n),
                "middle layer at n={n}"
            );
            assert_eq!(lym_sum(&middle), Rational::one());
        }
    }

    #[test]
    fn prefix_probability_values() {
        assert_eq!(
            prefix_event_probability(4, 2).unwrap(),
            Rational::new(1, 6).unwrap()
        );
        assert_eq!(prefix_event_probability(4, 0).unwrap(), Rational::one());
        assert_eq!(prefix_event_probability(4, 4).unwrap(), Rational::one());
        assert!(prefix_event_probability(0, 0).is_err());
        assert!(prefix_event_probability(3, 4).is_err());
    }

    #[test]
    fn prefix_probability_inverts_binomial() {
        for n in 1..=20usize {
            for a in 0..=n {
                let p = prefix_event_probability(n, a).unwrap();
                let c =
                    Rational::from_counts(&binomial(n as u64, a as u64), &1u32.into()).unwrap();
                assert_eq!(p * c, Rational::one(), "n={n} a={a}");
            }
        }
    }

    // Antichains are downward-fragile: inserting a strict superset of
    // any member breaks the property.
    #[test]
    fn superset_insertion_breaks_antichains() {
        let n = 4;
        enumerate_antichains(n, |f| {
            for member in f.members() {
                for bits in 0..1u64 << n {
                    let candidate = Subset::from_bits(n, bits).unwrap();
                    if member.is_strict_subset_of(candidate) && !f.contains_bits(bits) {
                        let mut extended = f.clone();
                        extended.add(candidate).unwrap();
                        assert!(!is_antichain(&extended));
                    }
                }
            }
        })
        .unwrap();
    }

    #[test]
    fn lym_values() {
        // {0,1}, {1,2}, {2,3} on [4]: 3/C(4,2) = 1/2.
        let f = family(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        assert_eq!(lym_sum(&f), Rational::new(1, 2).unwrap());
        // A chain violates nothing about the formula itself.
        let chain = family(3, &[&[0], &[0, 1], &[0, 1, 2]]);
        assert_eq!(
            lym_sum(&chain),
            Rational::new(1, 3).unwrap() + Rational::new(1, 3).unwrap() + Rational::one()
        );
        assert_eq!(lym_sum(&family(4, &[])), Rational::zero());
    }

    #[test]
    fn antichain_enumeration_counts_are_dedekind_numbers() {
        let expected = [2u64, 3, 6, 20, 168];
        for (n, &want) in expected.iter().enumerate() {
            let mut count = 0u64;
            enumerate_antichains(n, |f| {
                assert!(is_antichain(f));
                count += 1;
            })
            .unwrap();
            assert_eq!(count, want, "antichain count at n={n}");
        }
        assert!(enumerate_antichains(5, |_| {}).is_err());
    }

    #[test]
    fn bruteforce_matches_bound() {
        for n in 1..=4 {
            assert_eq!(
                BigUint::from(max_antichain_bruteforce(n).unwrap()),
                sperner_bound(n)
            );
        }
        assert!(max_antichain_bruteforce(0).is_err());
        assert!(max_antichain_bruteforce(5).is_err());
    }

    #[test]
    fn every_small_antichain_satisfies_lym() {
        for n in 0..=4 {
            enumerate_antichains(n, |f| {
                assert!(lym_sum(f) <= Rational::one(), "LYM fails for {f:?}");
            })
            .unwrap();
        }
    }

    #[test]
    fn simulation_on_an_antichain_never_cofires() {
        let f = family(4, &[&[0, 1], &[2, 3], &[1, 2]]);
        let sim = simulate_prefix_events(&f, 20_000, Seed::DEFAULT).unwrap();
        assert_eq!(sim.co_fire_count(), 0);
        assert_eq!(sim.samples(), 20_000);
        // Each event has probability 1/6; at 20k samples the
        // frequencies sit within ~6 sigma of it.
        let target = prefix_event_probability(4, 2).unwrap().to_f64();
        for freq in sim.frequencies() {
            assert!((freq - target).abs() < 0.016, "freq {freq} vs {target}");
        }
    }

    #[test]
    fn simulation_on_a_chain_cofires() {
        // {0} below {0,1}: both fire exactly when the permutation
        // starts 0, 1 — probability 1/2 on n = 2.
        let f = family(2, &[&[0], &[0, 1]]);
        let sim = simulate_prefix_events(&f, 10_000, Seed::DEFAULT).unwrap();
        assert_eq!(sim.hits()[1], 10_000); // full set always fires
        let co = sim.co_fire_count() as f64 / 10_000.0;
        assert!((co - 0.5).abs() < 0.03, "co-fire rate {co}");
        assert!(simulate_prefix_events(&f, 0, Seed::DEFAULT).is_err());
    }

    #[test]
    fn simulation_is_deterministic_and_seed_sensitive() {
        let f = family(4, &[&[0, 1], &[2, 3]]);
        let a = simulate_prefix_events(&f, 50_000, Seed::new(5)).unwrap();
        let b = simulate_prefix_events(&f, 50_000, Seed::new(5)).unwrap();
        assert_eq!(a, b);
        let c = simulate_prefix_events(&f, 50_000, Seed::new(6)).unwrap();
        assert_ne!(a.hits(), c.hits());
    }

    #[test]
    fn disjointness_bounds_hit_sum_for_antichains() {
        // Since the events are disjoint for an antichain, the total
        // number of fires across members can never exceed the sample
        // count.
        let f = family(5, &[&[0, 1], &[1, 2], &[3, 4], &[0, 2, 3]]);
        assert!(is_antichain(&f));
        let sim = simulate_prefix_events(&f, 30_000, Seed::new(9)).unwrap();
        let total: u64 = sim.hits().iter().sum();
        assert!(total <= sim.samples());
        let lym = lym_sum(&f).to_f64();
        let freq_sum: f64 = sim.frequencies().iter().sum();
        assert!(freq_sum <= lym + 0.02);
    }
}
