//! Simple undirected graphs on at most 64 vertices.
//!
//! Adjacency is one `u64` bitmask per vertex, which keeps the hot
//! predicates branch-free: `adj[u] & adj[v] != 0` is "edge u-v closes a
//! triangle", and clique extension is a running mask intersection. The
//! module also carries the small brute-force oracles (exhaustive
//! triangle-free maximum, exhaustive maximum clique) that the
//! randomized machinery is checked against, plus the edge-list text
//! format used by the CLI.

use crate::error::{Error, Result};
use crate::subset::MAX_GROUND_SET;

// ==========================================================================
// Graph type and constructions
// ==========================================================================

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn edgeless(n: usize) -> Result<Self> {
        if n > MAX_GROUND_SET {
            return Err(Error::CapacityExceeded {
                n,
                max: MAX_GROUND_SET,
            });
        }
        Ok(Graph {
            n,
            adj: vec![0; n],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::edgeless(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        Ok(g)
    }

    /// Complete bipartite graph with near-equal parts: the first
    /// ceil(n/2) vertices on one side, the rest on the other. Its edge
    /// count ceil(n/2) * floor(n/2) attains [`mantel_bound`].
    pub fn complete_bipartite(n: usize) -> Result<Self> {
        let mut g = Graph::edgeless(n)?;
        let left = n.div_ceil(2);
        for u in 0..left {
            for v in left..n {
                g.insert_edge(u, v);
            }
        }
        Ok(g)
    }

    /// Path 0-1-..-(n-1).
    pub fn path(n: usize) -> Result<Self> {
        let mut g = Graph::edgeless(n)?;
        for u in 1..n {
            g.insert_edge(u - 1, u);
        }
        Ok(g)
    }

    /// Cycle on n >= 3 vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Precondition {
                what: "cycle requires n >= 3",
            });
        }
        let mut g = Graph::path(n)?;
        g.insert_edge(0, n - 1);
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut builder = GraphBuilder::new(n)?;
        for &(u, v) in edges {
            builder.add_edge(u, v)?;
        }
        Ok(builder.build())
    }

    /// Unchecked insertion for internal constructions that cannot
    /// violate the invariants.
    fn insert_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        debug_assert_eq!(self.adj[u] >> v & 1, 0);
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Neighborhood of `v` as a bitmask.
    pub fn adjacency(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> Result<usize> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        Ok((0..self.n).map(|v| self.degree(v)).max().unwrap())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges as (u, v) with u < v, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            let mut above = self.adj[u] >> (u + 1) << (u + 1);
            while above != 0 {
                let v = above.trailing_zeros() as usize;
                above &= above - 1;
                out.push((u, v));
            }
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mut bits = self.adj[v];
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let u = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(u)
            }
        })
    }

    /// True iff some edge u-v has a common neighbor.
    pub fn has_triangle(&self) -> bool {
        for u in 0..self.n {
            // Neighbors strictly above u; the mask form stays in
            // range even at u = 63.
            let mut above = self.adj[u] & !(u64::MAX >> (63 - u));
            while above != 0 {
                let v = above.trailing_zeros() as usize;
                above &= above - 1;
                if self.adj[u] & self.adj[v] != 0 {
                    return true;
                }
            }
        }
        false
    }

    pub fn is_triangle_free(&self) -> bool {
        !self.has_triangle()
    }
}

/// Checked incremental construction; rejects self-loops, duplicate
/// edges, and out-of-range endpoints.
#[derive(Debug)]
pub struct GraphBuilder {
    graph: Graph,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Result<Self> {
        Ok(GraphBuilder {
            graph: Graph::edgeless(n)?,
        })
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<&mut Self> {
        let n = self.graph.n;
        if u >= n {
            return Err(Error::IndexOutOfRange { index: u, n });
        }
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, n });
        }
        if u == v {
            return Err(Error::SelfLoop { vertex: u });
        }
        if self.graph.adj[u] >> v & 1 == 1 {
            return Err(Error::DuplicateEdge {
                u: u.min(v),
                v: u.max(v),
            });
        }
        self.graph.insert_edge(u, v);
        Ok(self)
    }

    pub fn build(self) -> Graph {
        self.graph
    }
}

/// floor(n^2 / 4), the maximum edge count of a triangle-free graph.
pub fn mantel_bound(n: usize) -> usize {
    n * n / 4
}

// ==========================================================================
// Brute-force oracles
// ==========================================================================

const MAX_ENUMERATION_N: usize = 7;
const MAX_ALL_GRAPHS_N: usize = 6;
const MAX_CLIQUE_N: usize = 20;

fn edge_slots(n: usize) -> Vec<(usize, usize)> {
    let mut slots = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for u in 0..n {
        for v in u + 1..n {
            slots.push((u, v));
        }
    }
    slots
}

/// Visits every labeled graph on n vertices exactly once (2^C(n,2) of
/// them), in increasing order of the edge-set bitmask over
/// lexicographic edge slots.
pub fn enumerate_graphs<F: FnMut(&Graph)>(n: usize, mut visit: F) -> Result<()> {
    if n > MAX_ALL_GRAPHS_N {
        return Err(Error::BruteForceLimit {
            what: "enumerate_graphs",
            value: n,
            limit: MAX_ALL_GRAPHS_N,
        });
    }
    let slots = edge_slots(n);
    for mask in 0u32..1 << slots.len() {
        let mut g = Graph::edgeless(n).expect("n <= 6");
        for (i, &(u, v)) in slots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.insert_edge(u, v);
            }
        }
        visit(&g);
    }
    Ok(())
}

/// Visits every labeled triangle-free graph on n vertices exactly
/// once. Branches over edge slots and abandons any branch as soon as
/// an added edge would close a triangle, so the work is proportional
/// to the number of triangle-free graphs rather than 2^C(n,2).
pub fn enumerate_triangle_free_graphs<F: FnMut(&Graph)>(n: usize, mut visit: F) -> Result<()> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::BruteForceLimit {
            what: "enumerate_triangle_free_graphs",
            value: n,
            limit: MAX_ENUMERATION_N,
        });
    }
    let slots = edge_slots(n);
    let mut g = Graph::edgeless(n)?;
    fn recurse<F: FnMut(&Graph)>(g: &mut Graph, slots: &[(usize, usize)], idx: usize, visit: &mut F) {
        if idx == slots.len() {
            visit(g);
            return;
        }
        let (u, v) = slots[idx];
        recurse(g, slots, idx + 1, visit);
        if g.adj[u] & g.adj[v] == 0 {
            g.insert_edge(u, v);
            recurse(g, slots, idx + 1, visit);
            g.adj[u] &= !(1 << v);
            g.adj[v] &= !(1 << u);
        }
    }
    recurse(&mut g, &slots, 0, &mut visit);
    Ok(())
}

/// Exhaustive maximum edge count over all triangle-free graphs on n
/// vertices; the independent oracle for [`mantel_bound`].
pub fn brute_force_max_triangle_free(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Precondition {
            what: "brute_force_max_triangle_free requires n >= 1",
        });
    }
    let mut best = 0;
    enumerate_triangle_free_graphs(n, |g| best = best.max(g.edge_count()))?;
    Ok(best)
}

/// Exhaustive maximum clique size via branch and bound over candidate
/// masks. Clique number of the empty graph is 0, of any nonempty
/// edgeless graph 1.
pub fn brute_force_max_clique(g: &Graph) -> Result<usize> {
    if g.n > MAX_CLIQUE_N {
        return Err(Error::BruteForceLimit {
            what: "brute_force_max_clique",
            value: g.n,
            limit: MAX_CLIQUE_N,
        });
    }
    fn expand(adj: &[u64], candidates: u64, size: usize, best: &mut usize) {
        if candidates == 0 {
            *best = (*best).max(size);
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            if size + rest.count_ones() as usize <= *best {
                return;
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            expand(adj, rest & adj[v], size + 1, best);
        }
    }
    let mut best = 0;
    let full = if g.n == 0 { 0 } else { u64::MAX >> (64 - g.n) };
    expand(&g.adj, full, 0, &mut best);
    Ok(best)
}

// ==========================================================================
// Edge-list text format
// ==========================================================================

/// Parses the edge-list format: first line `n m`, then exactly m lines
/// `u v` (0-based endpoints). Self-loops, duplicate edges, and stray
/// trailing content are errors tagged with their 1-based line number.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing 'n m' header".into(),
    })?;
    let mut parts = header.split_whitespace();
    let (n, m) = match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => {
            let n: usize = a.parse().map_err(|_| Error::Parse {
                line: 1,
                reason: format!("invalid vertex count {a:?}"),
            })?;
            let m: usize = b.parse().map_err(|_| Error::Parse {
                line: 1,
                reason: format!("invalid edge count {b:?}"),
            })?;
            (n, m)
        }
        _ => {
            return Err(Error::Parse {
                line: 1,
                reason: format!("expected 'n m', got {header:?}"),
            })
        }
    };
    let mut builder = GraphBuilder::new(n).map_err(|e| Error::Parse {
        line: 1,
        reason: e.to_string(),
    })?;
    let mut seen = 0usize;
    for (i, line) in lines {
        let line_no = i + 1;
        if seen == m {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected exactly {m} edge lines, found extra content"),
            });
        }
        let mut parts = line.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                let u: usize = a.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    reason: format!("invalid endpoint {a:?}"),
                })?;
                let v: usize = b.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    reason: format!("invalid endpoint {b:?}"),
                })?;
                (u, v)
            }
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    reason: format!("expected 'u v', got {line:?}"),
                })
            }
        };
        builder.add_edge(u, v).map_err(|e| Error::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: seen + 2,
            reason: format!("expected {m} edge lines, found {seen}"),
        });
    }
    Ok(builder.build())
}

/// Inverse of [`parse_edge_list`]; edges in lexicographic order.
pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
