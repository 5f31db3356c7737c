//! Named verification suites tying the exact, brute-force, and
//! randomized layers together. Each suite returns a [`SuiteReport`]
//! with a deterministic summary, so the CLI's `verify-all` and the
//! acceptance tests share one implementation.

use num_bigint::BigUint;
use rand::RngCore;

use crate::counting::binomial_u128;
use crate::cover::{
    conditional_bound_check, greedy_cover, is_covering, solve_exact, turan_lower_bound,
    CoverInstance, DEFAULT_NODE_BUDGET,
};
use crate::graph::{
    brute_force_max_clique, brute_force_max_triangle_free, enumerate_graphs,
    enumerate_triangle_free_graphs, mantel_bound, Graph,
};
use crate::montecarlo::{
    estimate_edge_probability, estimate_prefix_event, estimate_sequential_draw, Estimate,
};
use crate::rational::Rational;
use crate::rng::{stream_rng, Seed};
use crate::shift::{edge_probability, run_to_clique, shift_step, uniformize_on_support, Distribution};
use crate::sperner::{enumerate_antichains, lym_sum, max_antichain_bruteforce, sperner_bound};
use crate::subset::{enumerate_subsets, Subset, SubsetFamily};

/// Outcome of one verification suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub pass: bool,
    /// What was checked (pass) or the first failure (fail).
    pub detail: String,
}

fn run_suite(
    name: &'static str,
    body: impl FnOnce() -> std::result::Result<String, String>,
) -> SuiteReport {
    match body() {
        Ok(detail) => SuiteReport {
            name,
            pass: true,
            detail,
        },
        Err(detail) => SuiteReport {
            name,
            pass: false,
            detail,
        },
    }
}

fn internal<E: std::fmt::Display>(e: E) -> String {
    format!("internal error: {e}")
}

/// Tuning knobs shared by the suites; [`VerifyOptions::default`] is
/// sized for an interactive `verify-all` run.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Largest ground-set / vertex-count the suites may touch; each
    /// suite additionally clamps to its own oracle's domain.
    pub max_n: usize,
    pub seed: Seed,
    /// Random graphs sampled per n in the shift-dynamics suite.
    pub random_graphs_per_n: usize,
    /// Node budget for the covering solver.
    pub node_budget: u64,
    /// Samples per Monte Carlo estimate.
    pub samples: u64,
    /// Number of seeds in the calibration coverage loop.
    pub calibration_seeds: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_n: 5,
            seed: Seed::DEFAULT,
            random_graphs_per_n: 1_000,
            node_budget: DEFAULT_NODE_BUDGET,
            samples: 100_000,
            calibration_seeds: 100,
        }
    }
}

/// Runs every suite with the given options, in a fixed order.
pub fn run_all(opts: &VerifyOptions) -> Vec<SuiteReport> {
    vec![
        mantel_exhaustion(opts.max_n),
        shift_dynamics(opts.max_n, opts.seed, opts.random_graphs_per_n),
        mantel_chain(opts.max_n),
        sperner_oracle(opts.max_n),
        turan_sandwich(opts.max_n, opts.node_budget),
        complement_identity(opts.max_n),
        montecarlo_calibration(opts.samples, opts.calibration_seeds, opts.seed),
    ]
}

/// Exhaustive maximum triangle-free edge counts equal floor(n^2/4)
/// for n = 2 up to min(max_n, 7).
pub fn mantel_exhaustion(max_n: usize) -> SuiteReport {
    run_suite("mantel-exhaustion", || {
        let hi = max_n.min(7);
        for n in 2..=hi {
            let brute = brute_force_max_triangle_free(n).map_err(internal)?;
            let bound = mantel_bound(n);
            if brute != bound {
                return Err(format!(
                    "n={n}: exhaustive maximum {brute} != floor(n^2/4) = {bound}"
                ));
            }
        }
        Ok(format!(
            "exhaustive triangle-free maximum equals floor(n^2/4) for n=2..={hi}"
        ))
    })
}

/// Full shifting-dynamics contract on one graph, from the uniform
/// start: exact gain identity at every step, monotone edge
/// probability, termination within n-1 steps on a clique support, and
/// the uniformized value 1 - 1/|Q| with |Q| <= omega(G).
fn check_shift_chain(g: &Graph) -> std::result::Result<(), String> {
    let n = g.n();
    let start = Distribution::uniform(n).map_err(internal)?;
    let mut current = start.clone();
    let mut value = edge_probability(g, &current).map_err(internal)?;
    let mut steps = 0usize;
    while let Some((next, step)) = shift_step(g, &current).map_err(internal)? {
        if step.gain.is_negative() {
            return Err(format!("negative gain {} on {:?}", step.gain, g));
        }
        let next_value = edge_probability(g, &next).map_err(internal)?;
        if &next_value - &value != step.gain {
            return Err(format!(
                "gain mismatch on {:?}: recorded {} but probability moved {} -> {}",
                g, step.gain, value, next_value
            ));
        }
        value = next_value;
        current = next;
        steps += 1;
        if steps >= n {
            return Err(format!("dynamics failed to terminate within n-1 steps on {g:?}"));
        }
    }
    let trace = run_to_clique(g, &start).map_err(internal)?;
    if trace.steps().len() != steps || trace.final_distribution() != &current {
        return Err(format!("trace replay mismatch on {g:?}"));
    }
    let (uniformized, capped) = uniformize_on_support(g, &current).map_err(|e| {
        format!("terminal support is not a clique on {g:?}: {e}")
    })?;
    let q = current.support_size();
    let expected = Rational::one() - Rational::new(1, q as i64).map_err(internal)?;
    if capped != expected {
        return Err(format!("uniformized value {capped} != 1 - 1/{q} on {g:?}"));
    }
    if capped < value {
        return Err(format!("uniformization lowered the value on {g:?}"));
    }
    let realized = edge_probability(g, &uniformized).map_err(internal)?;
    if realized != capped {
        return Err(format!("uniformized value {capped} not realized ({realized}) on {g:?}"));
    }
    let omega = brute_force_max_clique(g).map_err(internal)?;
    if q > omega {
        return Err(format!("terminal support size {q} exceeds omega {omega} on {g:?}"));
    }
    Ok(())
}

/// Builds the graph whose edge set is `bits` over the lexicographic
/// pair slots of n vertices.
fn graph_from_slot_bits(n: usize, bits: u64) -> Graph {
    let mut edges = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits >> i & 1 == 1 {
                edges.push((u, v));
            }
            i += 1;
        }
    }
    Graph::from_edges(n, &edges).expect("slot edges are simple")
}

/// Shifting dynamics hold on every graph with up to 5 vertices and on
/// seeded random graphs with 6..=min(max_n,7) vertices.
pub fn shift_dynamics(max_n: usize, seed: Seed, random_per_n: usize) -> SuiteReport {
    run_suite("shift-dynamics", || {
        let mut exhaustive = 0u64;
        for n in 1..=max_n.min(5) {
            let mut failure = None;
            enumerate_graphs(n, |g| {
                if failure.is_none() {
                    if let Err(e) = check_shift_chain(g) {
                        failure = Some(e);
                    }
                    exhaustive += 1;
                }
            })
            .map_err(internal)?;
            if let Some(e) = failure {
                return Err(e);
            }
        }
        let mut random = 0u64;
        for n in 6..=max_n.min(7) {
            let slots = (n * (n - 1) / 2) as u32;
            for i in 0..random_per_n {
                let mut rng = stream_rng(seed, (n as u64) << 32 | i as u64);
                let bits = rng.next_u64() & ((1u64 << slots) - 1);
                let g = graph_from_slot_bits(n, bits);
                check_shift_chain(&g)?;
                random += 1;
            }
        }
        Ok(format!(
            "gain identity, termination, and clique cap hold on {exhaustive} exhaustive and {random} random graphs"
        ))
    })
}

/// The full chain on every triangle-free graph with up to
/// min(max_n, 7) vertices: 2|E|/n^2 = uniform edge probability <=
/// uniformized terminal value <= 1/2, certifying |E| <= floor(n^2/4).
pub fn mantel_chain(max_n: usize) -> SuiteReport {
    run_suite("mantel-chain", || {
        let half = Rational::new(1, 2).map_err(internal)?;
        let mut checked = 0u64;
        for n in 1..=max_n.min(7) {
            let mut failure = None;
            enumerate_triangle_free_graphs(n, |g| {
                if failure.is_some() {
                    return;
                }
                let result = (|| -> std::result::Result<(), String> {
                    let uniform = Distribution::uniform(n).map_err(internal)?;
                    let start = edge_probability(g, &uniform).map_err(internal)?;
                    let expected =
                        Rational::new(2 * g.edge_count() as i64, (n * n) as i64).map_err(internal)?;
                    if start != expected {
                        return Err(format!("uniform value {start} != 2|E|/n^2 on {g:?}"));
                    }
                    let trace = run_to_clique(g, &uniform).map_err(internal)?;
                    let (_, capped) =
                        uniformize_on_support(g, trace.final_distribution()).map_err(internal)?;
                    if start > capped {
                        return Err(format!("chain not monotone on {g:?}"));
                    }
                    if capped > half {
                        return Err(format!(
                            "terminal value {capped} exceeds 1/2 on triangle-free {g:?}"
                        ));
                    }
                    if g.edge_count() > mantel_bound(n) {
                        return Err(format!("edge count beats the bound on {g:?}"));
                    }
                    Ok(())
                })();
                if let Err(e) = result {
                    failure = Some(e);
                }
                checked += 1;
            })
            .map_err(internal)?;
            if let Some(e) = failure {
                return Err(e);
            }
        }
        Ok(format!(
            "probability chain certifies the edge bound on {checked} triangle-free graphs"
        ))
    })
}

/// Exhaustive maximum antichain sizes equal C(n, floor(n/2)) and every
/// enumerated antichain satisfies the LYM inequality exactly, for
/// n = 1 up to min(max_n, 4).
pub fn sperner_oracle(max_n: usize) -> SuiteReport {
    run_suite("sperner-oracle", || {
        let hi = max_n.min(4);
        let mut families = 0u64;
        for n in 1..=hi {
            let brute = max_antichain_bruteforce(n).map_err(internal)?;
            if BigUint::from(brute) != sperner_bound(n) {
                return Err(format!(
                    "n={n}: exhaustive maximum {brute} != C(n, floor(n/2)) = {}",
                    sperner_bound(n)
                ));
            }
            let bound = sperner_bound(n);
            let mut failure = None;
            enumerate_antichains(n, |f| {
                if failure.is_none() {
                    if lym_sum(f) > Rational::one() {
                        failure = Some(format!("LYM sum exceeds 1 for {f:?}"));
                    } else if BigUint::from(f.len()) > bound {
                        failure = Some(format!("antichain larger than the bound: {f:?}"));
                    }
                    families += 1;
                }
            })
            .map_err(internal)?;
            if let Some(e) = failure {
                return Err(e);
            }
        }
        Ok(format!(
            "antichain maximum matches the binomial bound for n=1..={hi}; LYM holds on all {families} antichains"
        ))
    })
}

/// Solves the full covering grid (n up to min(max_n, 8), l <= 3):
/// every instance is proven optimal within the budget, sandwiched
/// between the exact lower bound and the greedy size, covering and
/// bound-check clean, monotone in k, and equal to the known values on
/// the spot instances.
pub fn turan_sandwich(max_n: usize, node_budget: u64) -> SuiteReport {
    run_suite("turan-sandwich", || {
        let hi = max_n.min(8);
        let mut instances = 0u64;
        let mut sizes = std::collections::HashMap::new();
        for n in 1..=hi {
            for k in 1..=n {
                for l in 0..=k.min(3) {
                    let inst = CoverInstance::new(n, k, l).map_err(internal)?;
                    let result = solve_exact(inst, node_budget).map_err(internal)?;
                    if !result.optimal {
                        return Err(format!(
                            "({n},{k},{l}): budget exhausted after {} nodes",
                            result.nodes_explored
                        ));
                    }
                    let (exact, ceiling) = turan_lower_bound(inst);
                    if result.lower_bound != exact {
                        return Err(format!("({n},{k},{l}): lower bound mismatch"));
                    }
                    if BigUint::from(result.size) < ceiling {
                        return Err(format!(
                            "({n},{k},{l}): size {} beats the lower bound {exact}",
                            result.size
                        ));
                    }
                    let greedy = greedy_cover(inst).map_err(internal)?;
                    if result.size > greedy.len() {
                        return Err(format!(
                            "({n},{k},{l}): size {} exceeds greedy {}",
                            result.size,
                            greedy.len()
                        ));
                    }
                    if !is_covering(inst, &result.family).map_err(internal)? {
                        return Err(format!("({n},{k},{l}): result family is not a covering"));
                    }
                    if !conditional_bound_check(inst, &result.family).map_err(internal)? {
                        return Err(format!("({n},{k},{l}): conditional bound check failed"));
                    }
                    sizes.insert((n, k, l), result.size);
                    instances += 1;
                }
            }
        }
        // Monotone in k: relaxing the target size never needs more
        // blocks.
        for (&(n, k, l), &size) in &sizes {
            if let Some(&looser) = sizes.get(&(n, k + 1, l)) {
                if looser > size {
                    return Err(format!(
                        "monotonicity fails: T({n},{},{l}) = {looser} > T({n},{k},{l}) = {size}",
                        k + 1
                    ));
                }
            }
        }
        // Spot values with their own one-line proofs. T(5,4,2) = 2:
        // no single pair lies in all five 4-subsets. T(5,3,2) = 4:
        // complement of the n=5 triangle-free maximum. T(n,n,l) = 1.
        if hi >= 5 {
            if sizes[&(5, 4, 2)] != 2 {
                return Err(format!("T(5,4,2) = {} != 2", sizes[&(5, 4, 2)]));
            }
            if sizes[&(5, 3, 2)] != 4 {
                return Err(format!("T(5,3,2) = {} != 4", sizes[&(5, 3, 2)]));
            }
        }
        for n in 1..=hi {
            for l in 0..=n.min(3) {
                if sizes[&(n, n, l)] != 1 {
                    return Err(format!("T({n},{n},{l}) = {} != 1", sizes[&(n, n, l)]));
                }
            }
        }
        Ok(format!(
            "{instances} covering instances solved optimally; sandwich, covering, bound, monotonicity, and spot checks hold"
        ))
    })
}

/// T(n, 3, 2) equals C(n,2) - floor(n^2/4) for n = 4 up to
/// min(max_n, 8): blocking every triangle is exactly the complement
/// of a maximum triangle-free graph.
pub fn complement_identity(max_n: usize) -> SuiteReport {
    run_suite("complement-identity", || {
        let hi = max_n.min(8);
        if hi < 4 {
            return Ok("skipped (needs max_n >= 4)".into());
        }
        for n in 4..=hi {
            let inst = CoverInstance::new(n, 3, 2).map_err(internal)?;
            let result = solve_exact(inst, DEFAULT_NODE_BUDGET).map_err(internal)?;
            if !result.optimal {
                return Err(format!("(n={n}): budget exhausted"));
            }
            let pairs = binomial_u128(n as u64, 2).expect("small") as usize;
            let expected = pairs - mantel_bound(n);
            if result.size != expected {
                return Err(format!(
                    "n={n}: T(n,3,2) = {} != C(n,2) - floor(n^2/4) = {expected}",
                    result.size
                ));
            }
        }
        Ok(format!(
            "T(n,3,2) = C(n,2) - floor(n^2/4) for n=4..={hi}"
        ))
    })
}

fn canonical_edge_case() -> (Graph, Distribution, Rational) {
    let g = Graph::complete(3).expect("K3");
    let d = Distribution::uniform(3).expect("n >= 1");
    (g, d, Rational::new(2, 3).expect("exact value"))
}

fn canonical_draw_case() -> (CoverInstance, SubsetFamily, Rational) {
    let inst = CoverInstance::new(5, 4, 2).expect("valid");
    let family = SubsetFamily::from_subsets(
        5,
        [
            Subset::from_elements(5, &[0, 1]).expect("in range"),
            Subset::from_elements(5, &[2, 3]).expect("in range"),
        ],
    )
    .expect("distinct");
    (inst, family, Rational::new(1, 5).expect("exact value"))
}

fn canonical_prefix_case() -> (Subset, Rational) {
    (
        Subset::from_elements(4, &[0, 1]).expect("in range"),
        Rational::new(1, 6).expect("exact value"),
    )
}

/// Estimator calibration: on the canonical case of each estimator the
/// base-seed run at `samples` lands within 3 sigma of the exact value,
/// degenerate cases are hit exactly, and across `seeds` consecutive
/// seeds at least 95% of runs land within 3 sigma.
pub fn montecarlo_calibration(samples: u64, seeds: u64, base: Seed) -> SuiteReport {
    run_suite("montecarlo-calibration", || {
        if samples == 0 || seeds == 0 {
            return Err("calibration requires samples >= 1 and seeds >= 1".into());
        }
        let (g, d, edge_exact) = canonical_edge_case();
        let (inst, family, draw_exact) = canonical_draw_case();
        let (prefix, prefix_exact) = canonical_prefix_case();

        let run_all_three = |seed: Seed| -> std::result::Result<[Estimate; 3], String> {
            Ok([
                estimate_edge_probability(&g, &d, samples, seed).map_err(internal)?,
                estimate_sequential_draw(inst, &family, samples, seed).map_err(internal)?,
                estimate_prefix_event(prefix, samples, seed).map_err(internal)?,
            ])
        };

        // Base-seed runs must match their exact targets.
        let estimates = run_all_three(base)?;
        for (est, exact) in estimates
            .iter()
            .zip([&edge_exact, &draw_exact, &prefix_exact])
        {
            if est.exact.as_ref() != Some(exact) {
                return Err(format!("exact target mismatch: {:?} vs {exact}", est.exact));
            }
            if est.within_3_sigma() != Some(true) {
                return Err(format!(
                    "base seed estimate {} missed {} by more than 3 sigma (stderr {})",
                    est.value, exact, est.stderr
                ));
            }
        }

        // Degenerate targets must be reproduced exactly.
        let zero = estimate_edge_probability(
            &Graph::edgeless(4).map_err(internal)?,
            &Distribution::uniform(4).map_err(internal)?,
            1_000,
            base,
        )
        .map_err(internal)?;
        if zero.value != 0.0 || zero.within_3_sigma() != Some(true) {
            return Err("edgeless graph estimate is not exactly 0".into());
        }
        let all_blocks = SubsetFamily::from_subsets(
            5,
            enumerate_subsets(5, 2).map_err(internal)?,
        )
        .map_err(internal)?;
        let one = estimate_sequential_draw(inst, &all_blocks, 1_000, base).map_err(internal)?;
        if one.value != 1.0 || one.within_3_sigma() != Some(true) {
            return Err("full family estimate is not exactly 1".into());
        }

        // Coverage: at least 95% of seeds within 3 sigma, per
        // estimator.
        let mut within = [0u64; 3];
        for i in 0..seeds {
            let estimates = run_all_three(Seed::new(base.value().wrapping_add(i)))?;
            for (w, est) in within.iter_mut().zip(&estimates) {
                if est.within_3_sigma() == Some(true) {
                    *w += 1;
                }
            }
        }
        let needed = (seeds as f64 * 0.95).ceil() as u64;
        let names = ["edge", "draw", "prefix"];
        for (name, &w) in names.iter().zip(&within) {
            if w < needed {
                return Err(format!(
                    "{name} estimator: only {w}/{seeds} seeds within 3 sigma (need {needed})"
                ));
            }
        }
        Ok(format!(
            "estimators calibrated at {samples} samples; coverage {}/{seeds}, {}/{seeds}, {}/{seeds} across seeds",
            within[0], within[1], within[2]
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_run_passes() {
        let opts = VerifyOptions {
            max_n: 4,
            random_graphs_per_n: 50,
            samples: 20_000,
            calibration_seeds: 20,
            ..VerifyOptions::default()
        };
        let reports = run_all(&opts);
        assert_eq!(reports.len(), 7);
        for report in &reports {
            assert!(report.pass, "{} failed: {}", report.name, report.detail);
        }
        let names: Vec<&str> = reports.iter().map(|r| r.name).collect();
        assert_eq!(
            names,
            vec![
                "mantel-exhaustion",
                "shift-dynamics",
                "mantel-chain",
                "sperner-oracle",
                "turan-sandwich",
                "complement-identity",
                "montecarlo-calibration"
            ]
        );
    }

    #[test]
    fn suites_are_deterministic() {
        let a = shift_dynamics(4, Seed::new(3), 20);
        let b = shift_dynamics(4, Seed::new(3), 20);
        assert_eq!(a, b);
        let c = montecarlo_calibration(5_000, 10, Seed::new(3));
        let d = montecarlo_calibration(5_000, 10, Seed::new(3));
        assert_eq!(c, d);
    }

    #[test]
    fn calibration_rejects_empty_plans() {
        assert!(!montecarlo_calibration(0, 10, Seed::DEFAULT).pass);
        assert!(!montecarlo_calibration(100, 0, Seed::DEFAULT).pass);
    }
}
