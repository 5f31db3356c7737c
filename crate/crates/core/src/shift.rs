//! Probability distributions on graph vertices and the exact
//! mass-shifting argument.
//!
//! For a distribution p on the vertices, draw two vertices
//! independently from p; the probability that the (ordered) draw spans
//! an edge is `edge_probability`, sum of 2 * p_u * p_v over edges. If
//! two supported vertices i, j are non-adjacent, moving all mass of
//! the one with the smaller neighbor mass onto the other never
//! decreases that probability — the exact gain of the move is
//! 2 * p_donor * (neighbor_mass(receiver) - neighbor_mass(donor)),
//! which is nonnegative by the choice of direction. Each move shrinks
//! the support by one vertex, so after at most n-1 steps the support
//! spans a clique; averaging the mass over that clique Q (Jensen) then
//! pushes the value up to 1 - 1/|Q|. Since the uniform start has value
//! 2|E|/n^2 and the terminal value is at most 1 - 1/omega(G), the
//! chain bounds |E| by n^2/4 on triangle-free graphs and, run from
//! random starts, yields clique lower bounds on arbitrary graphs.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::Rational;
use crate::rng::{permutation_with, stream_rng, Seed};
use crate::subset::MAX_GROUND_SET;

// ==========================================================================
// Distributions
// ==========================================================================

/// A probability distribution on {0, .., n-1} with exact rational
/// entries: nonnegative, summing to exactly 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    p: Vec<Rational>,
}

impl Distribution {
    /// Validating constructor; the only public way to build arbitrary
    /// distributions.
    pub fn from_rationals(p: Vec<Rational>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution {
                reason: "must have at least one entry",
            });
        }
        if p.len() > MAX_GROUND_SET {
            return Err(Error::CapacityExceeded {
                n: p.len(),
                max: MAX_GROUND_SET,
            });
        }
        if p.iter().any(Rational::is_negative) {
            return Err(Error::InvalidDistribution {
                reason: "entries must be nonnegative",
            });
        }
        let total: Rational = p.iter().cloned().sum();
        if total != Rational::one() {
            return Err(Error::InvalidDistribution {
                reason: "entries must sum to exactly 1",
            });
        }
        Ok(Distribution { p })
    }

    /// Internal constructor for values produced by mass moves, which
    /// preserve validity.
    fn from_valid(p: Vec<Rational>) -> Self {
        debug_assert!(Distribution::from_rationals(p.clone()).is_ok());
        Distribution { p }
    }

    /// 1/n everywhere.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution {
                reason: "must have at least one entry",
            });
        }
        if n > MAX_GROUND_SET {
            return Err(Error::CapacityExceeded {
                n,
                max: MAX_GROUND_SET,
            });
        }
        let share = Rational::new(1, n as i64).expect("n >= 1");
        Ok(Distribution {
            p: vec![share; n],
        })
    }

    /// All mass on a single vertex.
    pub fn point_mass(n: usize, vertex: usize) -> Result<Self> {
        if vertex >= n {
            return Err(Error::IndexOutOfRange { index: vertex, n });
        }
        let mut p = vec![Rational::zero(); n];
        p[vertex] = Rational::one();
        Distribution::from_rationals(p)
    }

    /// (1/2, 1/4, .., 1/2^(n-1), 1/2^(n-1)): strictly decreasing until
    /// the final duplicated entry, so any two vertices almost always
    /// carry distinct masses. Used as a restart profile that breaks
    /// the ties a uniform start would hit.
    pub fn geometric_profile(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution {
                reason: "must have at least one entry",
            });
        }
        if n > MAX_GROUND_SET {
            return Err(Error::CapacityExceeded {
                n,
                max: MAX_GROUND_SET,
            });
        }
        let mut p = Vec::with_capacity(n);
        let mut piece = Rational::one();
        let half = Rational::new(1, 2).expect("2 != 0");
        for _ in 0..n - 1 {
            piece = piece * &half;
            p.push(piece.clone());
        }
        p.push(if n == 1 { Rational::one() } else { piece });
        Ok(Distribution::from_valid(p))
    }

    /// Relabels mass: entry i of `self` moves to vertex `perm[i]`.
    /// `perm` must be a permutation of 0..n.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.p.len();
        if perm.len() != n {
            return Err(Error::Precondition {
                what: "permutation length must match distribution length",
            });
        }
        let mut out = vec![Rational::zero(); n];
        let mut seen = vec![false; n];
        for (i, &target) in perm.iter().enumerate() {
            if target >= n || seen[target] {
                return Err(Error::Precondition {
                    what: "permuted requires a permutation of 0..n",
                });
            }
            seen[target] = true;
            out[target] = self.p[i].clone();
        }
        Ok(Distribution::from_valid(out))
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn get(&self, vertex: usize) -> &Rational {
        &self.p[vertex]
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.p
    }

    /// Vertices with strictly positive mass, increasing.
    pub fn support(&self) -> Vec<usize> {
        (0..self.p.len()).filter(|&v| !self.p[v].is_zero()).collect()
    }

    /// Support as a bitmask (lengths are capped at 64).
    pub fn support_mask(&self) -> u64 {
        let mut mask = 0u64;
        for v in self.support() {
            mask |= 1 << v;
        }
        mask
    }

    pub fn support_size(&self) -> usize {
        self.p.iter().filter(|x| !x.is_zero()).count()
    }
}

fn check_dims(g: &Graph, d: &Distribution) -> Result<()> {
    if d.len() != g.n() {
        return Err(Error::DimensionMismatch {
            got: d.len(),
            expected: g.n(),
        });
    }
    Ok(())
}

// ==========================================================================
// Exact edge probability and mass shifting
// ==========================================================================

/// Probability that two independent p-draws (ordered) span an edge:
/// sum over edges {u, v} of 2 * p_u * p_v. Uniform p gives 2|E|/n^2.
pub fn edge_probability(g: &Graph, d: &Distribution) -> Result<Rational> {
    check_dims(g, d)?;
    let mut total = Rational::zero();
    for (u, v) in g.edges() {
        total = total + Rational::from_integer(2) * (d.get(u) * d.get(v));
    }
    Ok(total)
}

/// Total mass sitting on the neighbors of `vertex`.
pub fn neighbor_mass(g: &Graph, d: &Distribution, vertex: usize) -> Result<Rational> {
    check_dims(g, d)?;
    if vertex >= g.n() {
        return Err(Error::IndexOutOfRange {
            index: vertex,
            n: g.n(),
        });
    }
    Ok(g.neighbors(vertex).map(|u| d.get(u).clone()).sum())
}

/// One recorded mass move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftStep {
    /// Vertex whose entire mass was moved away (zeroing it).
    pub donor: usize,
    /// Vertex that absorbed the mass.
    pub receiver: usize,
    /// Exact change of [`edge_probability`] caused by the move;
    /// nonnegative by the choice of direction.
    pub gain: Rational,
}

/// Performs one mass move if the support still contains a non-adjacent
/// pair, or returns `None` if the support already spans a clique.
///
/// The pair is the lexicographically smallest non-adjacent supported
/// (i, j) with i < j; the receiver is the endpoint with the larger
/// neighbor mass (ties: the smaller index), and the donor's entire
/// mass moves to the receiver. The recorded gain is the closed form
/// 2 * p_donor * (s_receiver - s_donor), which for a non-adjacent pair
/// equals edge_probability(after) - edge_probability(before) exactly.
pub fn shift_step(g: &Graph, d: &Distribution) -> Result<Option<(Distribution, ShiftStep)>> {
    check_dims(g, d)?;
    let support = d.support();
    let mut pair = None;
    'outer: for (a, &i) in support.iter().enumerate() {
        for &j in &support[a + 1..] {
            if !g.has_edge(i, j) {
                pair = Some((i, j));
                break 'outer;
            }
        }
    }
    let Some((i, j)) = pair else {
        return Ok(None);
    };
    let s_i = neighbor_mass(g, d, i)?;
    let s_j = neighbor_mass(g, d, j)?;
    let (receiver, donor, s_recv, s_don) = if s_i >= s_j {
        (i, j, s_i, s_j)
    } else {
        (j, i, s_j, s_i)
    };
    let gain = Rational::from_integer(2) * d.get(donor) * (s_recv - s_don);
    debug_assert!(!gain.is_negative());
    let mut p = d.probabilities().to_vec();
    p[receiver] = &p[receiver] + &p[donor];
    p[donor] = Rational::zero();
    let next = Distribution::from_valid(p);
    Ok(Some((
        next,
        ShiftStep {
            donor,
            receiver,
            gain,
        },
    )))
}

/// Full run of the shifting dynamics: every recorded step plus the
/// terminal distribution, whose support spans a clique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftTrace {
    steps: Vec<ShiftStep>,
    final_dist: Distribution,
}

impl ShiftTrace {
    pub fn steps(&self) -> &[ShiftStep] {
        &self.steps
    }

    pub fn final_distribution(&self) -> &Distribution {
        &self.final_dist
    }

    /// Sum of all step gains; equals the total change of
    /// [`edge_probability`] from start to finish.
    pub fn total_gain(&self) -> Rational {
        self.steps.iter().map(|s| s.gain.clone()).sum()
    }

    /// JSON export: an array of step records followed by one final
    /// record carrying the terminal distribution.
    pub fn to_json(&self) -> Value {
        let mut records: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "donor": s.donor,
                    "receiver": s.receiver,
                    "gain_num": s.gain.numer().to_string(),
                    "gain_den": s.gain.denom().to_string(),
                })
            })
            .collect();
        let final_entries: Vec<String> = self
            .final_dist
            .probabilities()
            .iter()
            .map(Rational::to_string)
            .collect();
        records.push(json!({ "final": final_entries }));
        Value::Array(records)
    }
}

/// Iterates [`shift_step`] until the support spans a clique. Each step
/// removes one vertex from the support, so at most n-1 steps happen.
pub fn run_to_clique(g: &Graph, start: &Distribution) -> Result<ShiftTrace> {
    check_dims(g, start)?;
    let mut steps = Vec::new();
    let mut current = start.clone();
    while let Some((next, step)) = shift_step(g, &current)? {
        steps.push(step);
        current = next;
        debug_assert!(steps.len() < g.n(), "support must shrink every step");
    }
    Ok(ShiftTrace {
        steps,
        final_dist: current,
    })
}

/// Replaces a clique-supported distribution by the uniform one on its
/// support Q and returns it with its edge probability 1 - 1/|Q|.
/// By convexity this never decreases the edge probability, so the
/// returned value caps any shifting run: 1 - 1/|Q| <= 1 - 1/omega(G).
pub fn uniformize_on_support(g: &Graph, d: &Distribution) -> Result<(Distribution, Rational)> {
    check_dims(g, d)?;
    let support = d.support();
    for (a, &u) in support.iter().enumerate() {
        for &v in &support[a + 1..] {
            if !g.has_edge(u, v) {
                return Err(Error::SupportNotClique { u, v });
            }
        }
    }
    let q = support.len() as i64;
    debug_assert!(q >= 1, "a distribution always has support");
    let share = Rational::new(1, q).expect("support is nonempty");
    let mut p = vec![Rational::zero(); d.len()];
    for &v in &support {
        p[v] = share.clone();
    }
    let value = Rational::one() - Rational::new(1, q).expect("q >= 1");
    Ok((Distribution::from_valid(p), value))
}

/// Size of the largest clique found by running the dynamics from
/// `restarts` randomly permuted geometric starts (restart r uses
/// stream r of the seed). The result is the support size of the best
/// terminal distribution — always a clique of the graph, hence a
/// lower bound on omega(G).
pub fn clique_lower_bound(g: &Graph, restarts: u64, seed: Seed) -> Result<usize> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if restarts == 0 {
        return Err(Error::Precondition {
            what: "clique_lower_bound requires at least one restart",
        });
    }
    let profile = Distribution::geometric_profile(g.n())?;
    let mut best = 0;
    for r in 0..restarts {
        let perm = permutation_with(&mut stream_rng(seed, r), g.n());
        let start = profile.permuted(&perm)?;
        let trace = run_to_clique(g, &start)?;
        best = best.max(trace.final_distribution().support_size());
    }
    Ok(best)
}
