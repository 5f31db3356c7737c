//! Randomized cross-module properties: exact identities that must
//! hold on arbitrary inputs, not just the hand-picked unit cases.

use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

use turanlab::counting::binomial;
use turanlab::cover::{greedy_cover, is_covering, solve_exact, turan_lower_bound, CoverInstance};
use turanlab::graph::{format_edge_list, parse_edge_list, Graph};
use turanlab::montecarlo::estimate_edge_probability;
use turanlab::shift::{edge_probability, run_to_clique, uniformize_on_support, Distribution};
use turanlab::subset::{enumerate_subsets, Subset, SubsetFamily};
use turanlab::{Rational, Seed};

/// A graph on `n` vertices from a bitmask over the C(n,2) vertex
/// pairs in lexicographic order.
fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut slot = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> slot & 1 == 1 {
                edges.push((u, v));
            }
            slot += 1;
        }
    }
    Graph::from_edges(n, &edges).expect("pair slots are simple edges")
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let slots = n * (n - 1) / 2;
        (Just(n), 0..1u64 << slots).prop_map(|(n, mask)| graph_from_mask(n, mask))
    })
}

/// An exact distribution from integer weights (at least one forced
/// positive; normalization happens in exact arithmetic).
fn distribution_from_weights(mut w: Vec<u32>) -> Distribution {
    if w.iter().all(|&x| x == 0) {
        w[0] = 1;
    }
    let total: i64 = w.iter().map(|&x| x as i64).sum();
    let p = w
        .iter()
        .map(|&x| Rational::new(x as i64, total).expect("total > 0"))
        .collect();
    Distribution::from_rationals(p).expect("weights normalize")
}

fn arb_graph_and_start(max_n: usize) -> impl Strategy<Value = (Graph, Distribution)> {
    (1..=max_n)
        .prop_flat_map(|n| {
            let slots = n * (n - 1) / 2;
            (
                Just(n),
                0..1u64 << slots,
                proptest::collection::vec(0u32..100, n),
            )
        })
        .prop_map(|(n, mask, w)| (graph_from_mask(n, mask), distribution_from_weights(w)))
}

proptest! {
    // Pascal triangle over the full ground-set range, in exact
    // arbitrary-precision arithmetic.
    #[test]
    fn pascal_identity(n in 1u64..=64, r in 1u64..=63) {
        prop_assume!(r < n);
        prop_assert_eq!(
            binomial(n, r),
            binomial(n - 1, r - 1) + binomial(n - 1, r)
        );
        prop_assert_eq!(binomial(n, r), binomial(n, n - r));
    }

    // Every arithmetic result is fully reduced with a positive
    // denominator, and the float view is a faithful approximation.
    #[test]
    fn rational_results_are_reduced(
        a in -50i64..=50, b in 1i64..=50,
        c in -50i64..=50, d in 1i64..=50,
    ) {
        let x = Rational::new(a, b).unwrap();
        let y = Rational::new(c, d).unwrap();
        let sum = &x + &y;
        let product = &x * &y;
        for r in [&sum, &product] {
            prop_assert!(r.denom().sign() != num_bigint::Sign::Minus);
            prop_assert_eq!(r.numer().gcd(r.denom()), 1.into());
        }
        prop_assert_eq!(&sum - &y, x.clone());
        let float = x.to_f64();
        let direct = a as f64 / b as f64;
        prop_assert!((float - direct).abs() <= 1e-12);
    }

    // The colex stream has exactly C(n,l) members, each of size l,
    // strictly increasing as bitmasks (hence distinct).
    #[test]
    fn subset_enumeration_is_complete(n in 0usize..=16, l in 0usize..=16) {
        let subsets: Vec<Subset> = enumerate_subsets(n, l).unwrap().collect();
        let expected = if l <= n { binomial(n as u64, l as u64) } else { BigUint::from(0u32) };
        prop_assert_eq!(BigUint::from(subsets.len()), expected);
        for w in subsets.windows(2) {
            prop_assert!(w[0].bits() < w[1].bits());
        }
        for s in &subsets {
            prop_assert_eq!(s.len(), l);
        }
    }

    #[test]
    fn edge_list_text_roundtrips(g in arb_graph(8)) {
        prop_assert_eq!(parse_edge_list(&format_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn family_text_roundtrips(
        n in 1usize..=10,
        picks in proptest::collection::btree_set(0u64..1024, 0..8),
    ) {
        let mask = (1u64 << n) - 1;
        let members: std::collections::BTreeSet<u64> =
            picks.into_iter().map(|b| b & mask).collect();
        let family = SubsetFamily::from_subsets(
            n,
            members.into_iter().map(|b| Subset::from_bits(n, b).unwrap()),
        )
        .unwrap();
        prop_assert_eq!(SubsetFamily::parse(&family.to_text()).unwrap(), family);
    }

    // The dynamics contract on arbitrary graphs and arbitrary exact
    // starting distributions: monotone recorded gains that match the
    // probability movement, termination on a clique support, and the
    // uniformized value 1 - 1/|Q|.
    #[test]
    fn shift_trace_is_sound_from_any_start((g, d) in arb_graph_and_start(6)) {
        let trace = run_to_clique(&g, &d).unwrap();
        let mut value = edge_probability(&g, &d).unwrap();
        // Each step zeroes exactly one supported vertex.
        prop_assert_eq!(
            trace.steps().len(),
            d.support_size() - trace.final_distribution().support_size()
        );
        let mut current = d;
        for step in trace.steps() {
            prop_assert!(!step.gain.is_negative());
            let mut p: Vec<Rational> = current.probabilities().to_vec();
            p[step.receiver] = &p[step.receiver] + &p[step.donor];
            p[step.donor] = Rational::zero();
            let next = Distribution::from_rationals(p).unwrap();
            let next_value = edge_probability(&g, &next).unwrap();
            prop_assert_eq!(&next_value - &value, step.gain.clone());
            prop_assert!(next_value >= value);
            value = next_value;
            current = next;
        }
        prop_assert_eq!(&current, trace.final_distribution());
        let (_, capped) = uniformize_on_support(&g, &current).unwrap();
        prop_assert!(capped >= value);
    }

    // Lower bound <= optimal <= greedy on arbitrary instances, with
    // the optimal family a verified covering.
    #[test]
    fn cover_sandwich_holds(n in 1usize..=7, k in 1usize..=7, l in 0usize..=3) {
        prop_assume!(k <= n && l <= k);
        let inst = CoverInstance::new(n, k, l).unwrap();
        let result = solve_exact(inst, 10_000_000).unwrap();
        prop_assert!(result.optimal);
        let (_, ceiling) = turan_lower_bound(inst);
        prop_assert!(BigUint::from(result.size) >= ceiling);
        prop_assert!(result.size <= greedy_cover(inst).unwrap().len());
        prop_assert!(is_covering(inst, &result.family).unwrap());
    }

    // Same seed, same estimate — and the standard error follows the
    // binomial formula exactly.
    #[test]
    fn estimates_are_reproducible(g in arb_graph(5), seed in 0u64.., samples in 1u64..=4096) {
        let d = Distribution::uniform(g.n()).unwrap();
        let a = estimate_edge_probability(&g, &d, samples, Seed::new(seed)).unwrap();
        let b = estimate_edge_probability(&g, &d, samples, Seed::new(seed)).unwrap();
        prop_assert_eq!(a.value, b.value);
        prop_assert_eq!(a.stderr, b.stderr);
        let expected = (a.value * (1.0 - a.value) / samples as f64).sqrt();
        prop_assert_eq!(a.stderr, expected);
    }
}
