//! Minimum covering families: the least number of l-subsets of
//! {0, .., n-1} such that every k-subset contains at least one of them.
//!
//! The exact lower bound C(n,l) / C(k,l) comes from a one-line
//! argument: draw an l-subset uniformly at random; conditioned on any
//! k-subset K, the chance the draw landed inside K is C(k,l)/C(n,l),
//! so a family meeting every K must have size at least the
//! reciprocal. The solver closes the gap from above: greedy seeds an
//! incumbent, then a branch-and-bound over candidate blocks proves
//! optimality or reports the best cover found within its node budget.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::counting::{binomial, binomial_u128};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::subset::{enumerate_subsets, Subset, SubsetFamily};

/// Default node budget for [`solve_exact`].
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Enumeration refuses instances whose block or target lists would
/// exceed this many subsets.
const MAX_ENUMERATION: u128 = 1_000_000;
/// ... or whose per-target candidate tables would exceed this many
/// entries in total.
const MAX_CANDIDATE_TABLE: u128 = 50_000_000;

/// Parameters (n, k, l) with n >= k >= l >= 0 and n <= 64.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoverInstance {
    n: usize,
    k: usize,
    l: usize,
}

impl CoverInstance {
    pub fn new(n: usize, k: usize, l: usize) -> Result<Self> {
        if n > crate::subset::MAX_GROUND_SET {
            return Err(Error::CapacityExceeded {
                n,
                max: crate::subset::MAX_GROUND_SET,
            });
        }
        if k > n || l > k {
            return Err(Error::InvalidInstance { n, k, l });
        }
        Ok(CoverInstance { n, k, l })
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn k(self) -> usize {
        self.k
    }

    pub fn l(self) -> usize {
        self.l
    }
}

/// Exact lower bound C(n,l)/C(k,l) and its ceiling.
pub fn turan_lower_bound(inst: CoverInstance) -> (Rational, BigUint) {
    let num = binomial(inst.n as u64, inst.l as u64);
    let den = binomial(inst.k as u64, inst.l as u64);
    let exact = Rational::from_counts(&num, &den).expect("C(k,l) >= 1 since l <= k");
    let ceiling = exact
        .ceil_int()
        .to_biguint()
        .expect("bound is nonnegative");
    (exact, ceiling)
}

/// Every member must be an l-subset of the instance's ground set.
fn validate_blocks(inst: CoverInstance, family: &SubsetFamily) -> Result<()> {
    if family.ground_size() != inst.n {
        return Err(Error::GroundSetMismatch {
            member: "family".into(),
            got: family.ground_size(),
            expected: inst.n,
        });
    }
    for member in family.iter() {
        if member.len() != inst.l {
            return Err(Error::WrongBlockSize {
                member: member.to_string(),
                got: member.len(),
                expected: inst.l,
            });
        }
    }
    Ok(())
}

fn enumeration_guard(inst: CoverInstance) -> Result<()> {
    let blocks = binomial_u128(inst.n as u64, inst.l as u64).unwrap_or(u128::MAX);
    let targets = binomial_u128(inst.n as u64, inst.k as u64).unwrap_or(u128::MAX);
    let candidates_per_target = binomial_u128(inst.k as u64, inst.l as u64).unwrap_or(u128::MAX);
    if blocks > MAX_ENUMERATION || targets > MAX_ENUMERATION {
        return Err(Error::BruteForceLimit {
            what: "covering enumeration (subsets per side)",
            value: blocks.max(targets).min(usize::MAX as u128) as usize,
            limit: MAX_ENUMERATION as usize,
        });
    }
    if targets.saturating_mul(candidates_per_target) > MAX_CANDIDATE_TABLE {
        return Err(Error::BruteForceLimit {
            what: "covering candidate table (targets x C(k,l))",
            value: usize::MAX,
            limit: MAX_CANDIDATE_TABLE as usize,
        });
    }
    Ok(())
}

/// True iff every k-subset of the ground set contains some member of
/// the family. Early-exits on the first uncovered k-subset.
pub fn is_covering(inst: CoverInstance, family: &SubsetFamily) -> Result<bool> {
    validate_blocks(inst, family)?;
    enumeration_guard(inst)?;
    Ok(first_uncovered(inst, family).is_none())
}

fn first_uncovered(inst: CoverInstance, family: &SubsetFamily) -> Option<Subset> {
    enumerate_subsets(inst.n, inst.k)
        .expect("instance capacity already checked")
        .find(|target| {
            !family
                .iter()
                .any(|block| block.bits() & !target.bits() == 0)
        })
}

/// Probability that a uniformly random l-subset is a member of the
/// family: |F| / C(n,l).
pub fn sequential_draw_probability(inst: CoverInstance, family: &SubsetFamily) -> Result<Rational> {
    validate_blocks(inst, family)?;
    let total = binomial(inst.n as u64, inst.l as u64);
    Rational::from_counts(&BigUint::from(family.len()), &total)
}

/// For a covering family, checks the inequality behind the lower
/// bound: |F|/C(n,l) >= 1/C(k,l). Errors (with the first uncovered
/// k-subset as witness) if the family is not a covering.
pub fn conditional_bound_check(inst: CoverInstance, family: &SubsetFamily) -> Result<bool> {
    validate_blocks(inst, family)?;
    enumeration_guard(inst)?;
    if let Some(witness) = first_uncovered(inst, family) {
        return Err(Error::NotACovering {
            k: inst.k,
            witness: witness.to_string(),
        });
    }
    let draw = sequential_draw_probability(inst, family)?;
    let threshold = Rational::from_counts(
        &BigUint::from(1u32),
        &binomial(inst.k as u64, inst.l as u64),
    )?;
    Ok(draw >= threshold)
}

/// Block and target bitmasks in colexicographic order.
fn enumeration(inst: CoverInstance) -> Result<(Vec<u64>, Vec<u64>)> {
    enumeration_guard(inst)?;
    let blocks = enumerate_subsets(inst.n, inst.l)?.map(|s| s.bits()).collect();
    let targets = enumerate_subsets(inst.n, inst.k)?.map(|s| s.bits()).collect();
    Ok((blocks, targets))
}

fn greedy_masks(blocks: &[u64], targets: &[u64]) -> Vec<u64> {
    let mut uncovered: Vec<u64> = targets.to_vec();
    let mut picked = Vec::new();
    while !uncovered.is_empty() {
        let mut best_block = 0u64;
        let mut best_count = 0usize;
        for &b in blocks {
            let count = uncovered.iter().filter(|&&t| t & b == b).count();
            if count > best_count {
                best_count = count;
                best_block = b;
            }
        }
        debug_assert!(best_count > 0, "every k-subset contains some l-subset");
        picked.push(best_block);
        uncovered.retain(|&t| t & best_block != best_block);
    }
    picked
}

/// Greedy covering: repeatedly takes the block covering the most
/// still-uncovered k-subsets (ties: colexicographically smallest).
/// Always returns a covering; its size seeds the exact solver.
pub fn greedy_cover(inst: CoverInstance) -> Result<SubsetFamily> {
    let (blocks, targets) = enumeration(inst)?;
    let picked = greedy_masks(&blocks, &targets);
    SubsetFamily::from_subsets(
        inst.n,
        picked
            .into_iter()
            .map(|bits| Subset::from_bits(inst.n, bits).expect("masks from enumeration")),
    )
}

/// Outcome of [`solve_exact`].
#[derive(Clone, Debug)]
pub struct CoverResult {
    /// Best covering found, members in colexicographic order.
    pub family: SubsetFamily,
    pub size: usize,
    /// Exact lower bound C(n,l)/C(k,l).
    pub lower_bound: Rational,
    /// True iff minimality was proven within the node budget.
    pub optimal: bool,
    pub nodes_explored: u64,
}

/// The CLI-facing JSON shape for a solved instance.
pub fn cover_json(inst: CoverInstance, result: &CoverResult) -> Value {
    let family: Vec<Vec<usize>> = result.family.iter().map(|s| s.to_vec()).collect();
    json!({
        "n": inst.n,
        "k": inst.k,
        "l": inst.l,
        "size": result.size,
        "lower_bound": result.lower_bound.to_string(),
        "optimal": result.optimal,
        "family": family,
        "nodes": result.nodes_explored,
    })
}

struct Search<'a> {
    blocks: &'a [u64],
    target_masks: &'a [u64],
    /// Per target, the ids of the C(k,l) blocks inside it.
    candidates: &'a [Vec<u32>],
    budget: u64,
    nodes: u64,
    exhausted: bool,
    /// Proof finished early: incumbent hit the ceiling lower bound.
    done: bool,
    floor: usize,
    best: Vec<u64>,
    forbidden: Vec<bool>,
    /// Stamped per-block coverage tallies, reset lazily per node.
    tally: Vec<u32>,
    stamp: Vec<u64>,
    stamp_id: u64,
}

impl Search<'_> {
    /// One node: bound, pick the most-constrained uncovered target,
    /// branch over its available candidate blocks. Along the branches
    /// of one node, already-tried candidates are forbidden in the
    /// remaining subtrees, so no cover is generated in two orders.
    fn node(&mut self, uncovered: &[u32], chosen: &mut Vec<u64>) {
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        if uncovered.is_empty() {
            // A sibling subtree may have improved the incumbent after
            // this path passed its bound check, so compare again.
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
                self.best.sort_unstable();
                if self.best.len() == self.floor {
                    self.done = true;
                }
            }
            return;
        }

        // Tally, per available block, how many uncovered targets it
        // covers; track the most-constrained target as branch point.
        self.stamp_id += 1;
        let mut touched: Vec<u32> = Vec::new();
        let mut branch_target = usize::MAX;
        let mut branch_arity = usize::MAX;
        for &ti in uncovered {
            let mut arity = 0usize;
            for &cid in &self.candidates[ti as usize] {
                if self.forbidden[cid as usize] {
                    continue;
                }
                arity += 1;
                if self.stamp[cid as usize] != self.stamp_id {
                    self.stamp[cid as usize] = self.stamp_id;
                    self.tally[cid as usize] = 0;
                    touched.push(cid);
                }
                self.tally[cid as usize] += 1;
            }
            if arity == 0 {
                return; // some target lost all its candidates
            }
            if arity < branch_arity {
                branch_arity = arity;
                branch_target = ti as usize;
            }
        }

        // Admissible bound: any completion needs at least r more
        // blocks, where r is minimal with the r largest per-block
        // coverages summing to the uncovered count (union bound).
        let mut coverages: Vec<u32> = touched.iter().map(|&cid| self.tally[cid as usize]).collect();
        coverages.sort_unstable_by(|a, b| b.cmp(a));
        let mut need = uncovered.len() as u64;
        let mut extra = 0usize;
        for &c in &coverages {
            if need == 0 {
                break;
            }
            extra += 1;
            need = need.saturating_sub(c as u64);
        }
        debug_assert!(need == 0, "candidate union must cover all targets");
        if chosen.len() + extra >= self.best.len() {
            return;
        }

        // Candidates of the branch target, best coverage first (ties:
        // smaller block id, i.e. colexicographically earlier block).
        let mut branch: Vec<u32> = self.candidates[branch_target]
            .iter()
            .copied()
            .filter(|&cid| !self.forbidden[cid as usize])
            .collect();
        branch.sort_unstable_by(|&a, &b| {
            self.tally[b as usize]
                .cmp(&self.tally[a as usize])
                .then(a.cmp(&b))
        });

        let mut newly_forbidden: Vec<u32> = Vec::new();
        for &cid in &branch {
            let block = self.blocks[cid as usize];
            let next: Vec<u32> = uncovered
                .iter()
                .copied()
                .filter(|&ti| self.target_masks[ti as usize] & block != block)
                .collect();
            chosen.push(block);
            self.node(&next, chosen);
            chosen.pop();
            if self.done || self.exhausted {
                break;
            }
            self.forbidden[cid as usize] = true;
            newly_forbidden.push(cid);
        }
        for cid in newly_forbidden {
            self.forbidden[cid as usize] = false;
        }
    }
}

/// Exact minimum covering via branch and bound.
///
/// Strategy: seed the incumbent with [`greedy_cover`]; branch on the
/// uncovered k-subset with the fewest remaining candidate blocks;
/// within a node, forbid each tried candidate in the later branches
/// (so every candidate family is explored once); prune with the
/// union-bound block count against the incumbent. The search is
/// exhaustive, so `optimal` is true unless the node budget ran out;
/// hitting the ceiling of the exact lower bound also ends the proof.
pub fn solve_exact(inst: CoverInstance, node_budget: u64) -> Result<CoverResult> {
    let (blocks, targets) = enumeration(inst)?;
    let (exact_lb, ceil_lb) = turan_lower_bound(inst);
    let floor = ceil_lb
        .to_usize()
        .expect("ceiling is at most C(n,l), which passed the enumeration guard");

    let mut incumbent = greedy_masks(&blocks, &targets);
    incumbent.sort_unstable();

    let result_family = |masks: &[u64]| {
        SubsetFamily::from_subsets(
            inst.n,
            masks
                .iter()
                .map(|&bits| Subset::from_bits(inst.n, bits).expect("masks from enumeration")),
        )
        .expect("solver families are duplicate-free")
    };

    if incumbent.len() == floor {
        return Ok(CoverResult {
            family: result_family(&incumbent),
            size: incumbent.len(),
            lower_bound: exact_lb,
            optimal: true,
            nodes_explored: 0,
        });
    }

    // Rank of each block mask in colex order == index in `blocks`
    // (ascending masks); targets likewise. Candidate ids per target.
    let block_rank: std::collections::HashMap<u64, u32> = blocks
        .iter()
        .enumerate()
        .map(|(i, &b)| (b, i as u32))
        .collect();
    let candidates: Vec<Vec<u32>> = targets
        .iter()
        .map(|&t| {
            let elems: Vec<usize> = Subset::from_bits(inst.n, t)
                .expect("masks from enumeration")
                .to_vec();
            enumerate_subsets(inst.k, inst.l)
                .expect("k <= n <= 64")
                .map(|combo| {
                    let mask: u64 = combo.elements().map(|i| 1u64 << elems[i]).sum();
                    block_rank[&mask]
                })
                .collect()
        })
        .collect();

    let mut search = Search {
        blocks: &blocks,
        target_masks: &targets,
        candidates: &candidates,
        budget: node_budget,
        nodes: 0,
        exhausted: false,
        done: false,
        floor,
        best: incumbent,
        forbidden: vec![false; blocks.len()],
        tally: vec![0; blocks.len()],
        stamp: vec![0; blocks.len()],
        stamp_id: 0,
    };
    let all_targets: Vec<u32> = (0..targets.len() as u32).collect();
    search.node(&all_targets, &mut Vec::new());

    Ok(CoverResult {
        family: result_family(&search.best),
        size: search.best.len(),
        lower_bound: exact_lb,
        optimal: !search.exhausted,
        nodes_explored: search.nodes,
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
    fn instance_validation() {
        assert!(CoverInstance::new(5, 4, 2).is_ok());
        assert!(CoverInstance::new(5, 5, 5).is_ok());
        assert!(CoverInstance::new(0, 0, 0).is_ok());
        assert_eq!(
            CoverInstance::new(4, 5, 2).unwrap_err(),
            Error::InvalidInstance { n: 4, k: 5, l: 2 }
        );
        assert_eq!(
            CoverInstance::new(5, 3, 4).unwrap_err(),
            Error::InvalidInstance { n: 5, k: 3, l: 4 }
        );
        assert!(CoverInstance::new(65, 4, 2).is_err());
    }

    #[test]
    fn lower_bound_values() {
        let (exact, ceil) = turan_lower_bound(CoverInstance::new(5, 4, 2).unwrap());
        assert_eq!(exact, Rational::new(5, 3).unwrap()); // 10/6 reduced
        assert_eq!(ceil, BigUint::from(2u32));

        let (exact, ceil) = turan_lower_bound(CoverInstance::new(5, 3, 2).unwrap());
        assert_eq!(exact, Rational::new(10, 3).unwrap());
        assert_eq!(ceil, BigUint::from(4u32));

        let (exact, ceil) = turan_lower_bound(CoverInstance::new(6, 6, 3).unwrap());
        assert_eq!(exact, Rational::one());
        assert_eq!(ceil, BigUint::from(1u32));
    }

    #[test]
    fn covering_detection() {
        let inst = CoverInstance::new(4, 3, 2).unwrap();
        assert!(is_covering(inst, &family(4, &[&[0, 1], &[2, 3]])).unwrap());
        assert!(!is_covering(inst, &family(4, &[&[0, 1], &[0, 2]])).unwrap());
        assert!(!is_covering(inst, &family(4, &[])).unwrap());
    }

    #[test]
    fn covering_validation_errors() {
        let inst = CoverInstance::new(4, 3, 2).unwrap();
        assert!(matches!(
            is_covering(inst, &family(4, &[&[0, 1, 2]])),
            Err(Error::WrongBlockSize { .. })
        ));
        assert!(matches!(
            is_covering(inst, &family(5, &[&[0, 1]])),
            Err(Error::GroundSetMismatch { .. })
        ));
    }

    #[test]
    fn draw_probability() {
        let inst = CoverInstance::new(5, 4, 2).unwrap();
        let f = family(5, &[&[0, 1], &[2, 3]]);
        assert_eq!(
            sequential_draw_probability(inst, &f).unwrap(),
            Rational::new(1, 5).unwrap() // 2/10
        );
        assert_eq!(
            sequential_draw_probability(inst, &family(5, &[])).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn conditional_bound_on_coverings() {
        let inst = CoverInstance::new(5, 4, 2).unwrap();
        // {0,1} and {2,3} meet every 4-subset of [5].
        let f = family(5, &[&[0, 1], &[2, 3]]);
        assert!(conditional_bound_check(inst, &f).unwrap());
        // 1/5 >= 1/6 is the inequality being checked.
        match conditional_bound_check(inst, &family(5, &[&[0, 1]])) {
            Err(Error::NotACovering { k: 4, witness }) => {
                assert_eq!(witness, "{0, 2, 3, 4}");
            }
            other => panic!("expected NotACovering, got {other:?}"),
        }
    }

    #[test]
    fn greedy_small_instance() {
        let inst = CoverInstance::new(4, 3, 2).unwrap();
        let f = greedy_cover(inst).unwrap();
        let got: Vec<Vec<usize>> = f.iter().map(|s| s.to_vec()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![2, 3]]);
        assert!(is_covering(inst, &f).unwrap());
    }

    #[test]
    fn greedy_always_covers() {
        for n in 1..=7 {
            for k in 1..=n {
                for l in 0..=k.min(3) {
                    let inst = CoverInstance::new(n, k, l).unwrap();
                    let f = greedy_cover(inst).unwrap();
                    assert!(
                        is_covering(inst, &f).unwrap(),
                        "greedy failed on ({n},{k},{l})"
                    );
                }
            }
        }
    }

    #[test]
    fn solve_five_four_two() {
        let inst = CoverInstance::new(5, 4, 2).unwrap();
        let result = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(result.size, 2);
        assert!(result.optimal);
        assert_eq!(result.lower_bound, Rational::new(5, 3).unwrap());
        assert!(is_covering(inst, &result.family).unwrap());
        let got: Vec<Vec<usize>> = result.family.iter().map(|s| s.to_vec()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![2, 3]]);

        // Independent minimality check: no single pair is inside all
        // five 4-subsets, so 2 is genuinely optimal.
        for pair in enumerate_subsets(5, 2).unwrap() {
            let covers_all = enumerate_subsets(5, 4)
                .unwrap()
                .all(|t| pair.is_subset_of(t));
            assert!(!covers_all, "{pair} would be a 1-cover");
        }
    }

    #[test]
    fn solve_five_three_two() {
        let inst = CoverInstance::new(5, 3, 2).unwrap();
        let result = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(result.size, 4);
        assert!(result.optimal);
        assert!(is_covering(inst, &result.family).unwrap());
        // Complement identity: C(5,2) - floor(25/4) = 10 - 6 = 4.
        assert_eq!(
            result.size,
            binomial_u128(5, 2).unwrap() as usize - crate::graph::mantel_bound(5)
        );
    }

    #[test]
    fn solve_trivial_families() {
        // k == n: a single block covers the only target.
        let inst = CoverInstance::new(6, 6, 2).unwrap();
        let result = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(result.size, 1);
        assert!(result.optimal);
        assert_eq!(result.nodes_explored, 0);

        // l == 0: the empty set is inside everything.
        let inst = CoverInstance::new(5, 3, 0).unwrap();
        let result = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(result.size, 1);
        assert!(result.family.members()[0].is_empty());
        assert!(result.optimal);

        // l == k: every k-subset must itself be in the family.
        let inst = CoverInstance::new(5, 2, 2).unwrap();
        let result = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(result.size, 10);
        assert!(result.optimal);

        // n == k == l == 0: cover the empty set with itself.
        let inst = CoverInstance::new(0, 0, 0).unwrap();
        let result = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(result.size, 1);
        assert!(result.optimal);
    }

    #[test]
    fn solver_family_is_sorted_and_deterministic() {
        let inst = CoverInstance::new(6, 4, 2).unwrap();
        let a = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        let b = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(a.family.members(), b.family.members());
        assert_eq!(a.nodes_explored, b.nodes_explored);
        let masks: Vec<u64> = a.family.iter().map(|s| s.bits()).collect();
        assert!(masks.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn budget_exhaustion_reports_non_optimal() {
        let inst = CoverInstance::new(7, 4, 3).unwrap();
        let starved = solve_exact(inst, 1).unwrap();
        assert!(!starved.optimal);
        assert!(is_covering(inst, &starved.family).unwrap());
        let solved = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        assert!(solved.optimal);
        assert!(solved.size <= starved.size);
    }

    #[test]
    fn enumeration_guard_trips() {
        let inst = CoverInstance::new(64, 32, 16).unwrap();
        assert!(matches!(
            solve_exact(inst, 10),
            Err(Error::BruteForceLimit { .. })
        ));
    }

    #[test]
    fn cover_json_shape() {
        let inst = CoverInstance::new(5, 4, 2).unwrap();
        let result = solve_exact(inst, DEFAULT_NODE_BUDGET).unwrap();
        let value = cover_json(inst, &result);
        assert_eq!(value["n"], 5);
        assert_eq!(value["k"], 4);
        assert_eq!(value["l"], 2);
        assert_eq!(value["size"], 2);
        assert_eq!(value["lower_bound"], "5/3");
        assert_eq!(value["optimal"], true);
        assert_eq!(value["family"][0][0], 0);
        assert_eq!(value["family"][1][1], 3);
    }
}
