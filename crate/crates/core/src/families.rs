//! Example chain families: the winning streak chain and its time reversal,
//! the complete graph bijection, and lazy random walks on undirected graphs.
//!
//! All constructors use 0-based states. In the winning streak reversal, state
//! 0 is the "reset" state and state `n - 1` the sticky top state.

use serde::Serialize;

use crate::chain::{lazify, Distribution, StochasticMatrix, VALIDATION_TOL};
use crate::error::{Error, Result};

/// An undirected simple graph given by sorted neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphAdjacency {
    n: usize,
    neighbors: Vec<Vec<usize>>,
}

impl GraphAdjacency {
    /// Builds the graph from an undirected edge list. Duplicate edges are
    /// merged; self-loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::StateOutOfRange { state: a.max(b), n });
            }
            if a == b {
                return Err(Error::Graph(format!("self-loop at state {a}")));
            }
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self { n, neighbors })
    }

    /// Builds the graph from per-state neighbour lists, which must describe a
    /// symmetric relation without self-loops.
    pub fn from_neighbor_lists(lists: Vec<Vec<usize>>) -> Result<Self> {
        let n = lists.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut neighbors = lists;
        for (i, list) in neighbors.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(&bad) = list.iter().find(|&&j| j >= n) {
                return Err(Error::StateOutOfRange { state: bad, n });
            }
            if list.binary_search(&i).is_ok() {
                return Err(Error::Graph(format!("self-loop at state {i}")));
            }
        }
        for i in 0..n {
            for &j in &neighbors[i] {
                if neighbors[j].binary_search(&i).is_err() {
                    return Err(Error::Graph(format!(
                        "asymmetric adjacency: {j} is a neighbour of {i} but not conversely"
                    )));
                }
            }
        }
        Ok(Self { n, neighbors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.neighbors[i].len()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Lazy simple random walk: stay with probability 1/2, otherwise move to a
/// uniformly chosen neighbour.
pub fn lazy_walk(adj: &GraphAdjacency) -> Result<StochasticMatrix> {
    let n = adj.n();
    if n == 1 {
        return StochasticMatrix::identity(1);
    }
    if !adj.is_connected() {
        return Err(Error::Graph("graph is disconnected".into()));
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 0.5;
        let w = 1.0 / (2.0 * adj.degree(i) as f64);
        for &j in adj.neighbors(i) {
            entries[i * n + j] = w;
        }
    }
    StochasticMatrix::from_flat(n, entries, VALIDATION_TOL)
}

/// Stationary law of a lazy walk: proportional to degree.
pub fn degree_distribution(adj: &GraphAdjacency) -> Distribution {
    let total: usize = (0..adj.n()).map(|i| adj.degree(i)).sum();
    if total == 0 {
        return Distribution::from_vec_unchecked(vec![1.0]);
    }
    Distribution::from_vec_unchecked(
        (0..adj.n())
            .map(|i| adj.degree(i) as f64 / total as f64)
            .collect(),
    )
}

fn require_wsr_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::UnsupportedSize {
            n,
            reason: "winning streak chains need n >= 2",
        });
    }
    Ok(())
}

/// The winning streak chain: from state `i < n - 1` advance to `i + 1` or
/// reset to 0, each with probability 1/2; the top state holds or resets.
pub fn winning_streak(n: usize) -> Result<StochasticMatrix> {
    require_wsr_size(n)?;
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n] += 0.5;
        entries[i * n + (i + 1).min(n - 1)] += 0.5;
    }
    StochasticMatrix::from_flat(n, entries, VALIDATION_TOL)
}

/// The time reversal of [`winning_streak`].
///
/// Row 0 is the stationary law itself, states `1..n-1` step down
/// deterministically, and the top state splits evenly between itself and the
/// state below. Entries are produced by repeated halving and are exact
/// dyadic rationals.
pub fn winning_streak_reversal(n: usize) -> Result<StochasticMatrix> {
    require_wsr_size(n)?;
    let mut entries = vec![0.0; n * n];
    entries[..n].copy_from_slice(wsr_stationary(n)?.probs());
    for i in 1..n - 1 {
        entries[i * n + i - 1] = 1.0;
    }
    entries[(n - 1) * n + n - 2] += 0.5;
    entries[(n - 1) * n + n - 1] += 0.5;
    StochasticMatrix::from_flat(n, entries, 0.0)
}

/// Closed-form stationary law of both winning streak chains:
/// `2^-(i+1)` for `i < n - 1` and `2^-(n-1)` for the top state.
pub fn wsr_stationary(n: usize) -> Result<Distribution> {
    require_wsr_size(n)?;
    let mut probs = vec![0.0; n];
    let mut v = 1.0;
    for p in probs.iter_mut().take(n - 1) {
        v /= 2.0;
        *p = v;
    }
    probs[n - 1] = v;
    Ok(Distribution::from_vec_unchecked(probs))
}

fn require_cgb_size(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::UnsupportedSize {
            n,
            reason: "complete graph bijection needs n >= 4 (even) or n >= 5 (odd)",
        });
    }
    Ok(())
}

/// Size of each clique in the complete graph bijection.
pub fn cgb_half(n: usize) -> usize {
    n / 2
}

/// Whether `n` has the auxiliary hub state `n - 1`.
pub fn cgb_has_hub(n: usize) -> bool {
    n % 2 == 1
}

/// The matched partner of a clique state.
pub fn cgb_partner(n: usize, i: usize) -> usize {
    let k = cgb_half(n);
    debug_assert!(i < 2 * k);
    if i < k {
        i + k
    } else {
        i - k
    }
}

/// Clique index (0 or 1) of a non-hub state.
pub fn cgb_clique(n: usize, i: usize) -> usize {
    usize::from(i >= cgb_half(n))
}

/// Two cliques of size `floor(n/2)` joined by the matching `i <-> i + n/2`,
/// plus (for odd `n`) a hub adjacent to every other state.
pub fn cgb_adjacency(n: usize) -> Result<GraphAdjacency> {
    require_cgb_size(n)?;
    let k = cgb_half(n);
    let mut edges = Vec::new();
    for base in [0, k] {
        for a in 0..k {
            for b in (a + 1)..k {
                edges.push((base + a, base + b));
            }
        }
    }
    for i in 0..k {
        edges.push((i, i + k));
    }
    if cgb_has_hub(n) {
        for i in 0..n - 1 {
            edges.push((i, n - 1));
        }
    }
    GraphAdjacency::from_edges(n, &edges)
}

/// The complete graph bijection chain, assembled from its block form.
///
/// Even `n`: `I/2 + (1/n) [[J - I, I], [I, J - I]]`. Odd `n`: the same
/// pattern scaled by `1/(n+1)` with an extra hub column of ones and a hub
/// row with weight `(n+1)/(2(n-1))` on every clique state.
pub fn complete_graph_bijection(n: usize) -> Result<StochasticMatrix> {
    require_cgb_size(n)?;
    let k = cgb_half(n);
    let hub = cgb_has_hub(n);
    let scale = if hub { 1.0 / (n + 1) as f64 } else { 1.0 / n as f64 };
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        entries[i * n + i] = 0.5;
    }
    for i in 0..2 * k {
        let clique_start = cgb_clique(n, i) * k;
        for j in clique_start..clique_start + k {
            if j != i {
                entries[i * n + j] += scale;
            }
        }
        entries[i * n + cgb_partner(n, i)] += scale;
        if hub {
            entries[i * n + n - 1] += scale;
        }
    }
    if hub {
        let w = (n + 1) as f64 / (2.0 * (n - 1) as f64) * scale;
        for j in 0..n - 1 {
            entries[(n - 1) * n + j] += w;
        }
    }
    StochasticMatrix::from_flat(n, entries, 1e-12)
}

/// Closed-form stationary law: uniform for even `n`; for odd `n`,
/// `(n+1)/((n+3)(n-1))` on clique states and `2/(n+3)` on the hub.
pub fn cgb_stationary(n: usize) -> Result<Distribution> {
    require_cgb_size(n)?;
    if !cgb_has_hub(n) {
        return Distribution::uniform(n);
    }
    let nf = n as f64;
    let mut probs = vec![(nf + 1.0) / ((nf + 3.0) * (nf - 1.0)); n];
    probs[n - 1] = 2.0 / (nf + 3.0);
    Ok(Distribution::from_vec_unchecked(probs))
}

/// Named families used by sweeps and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Winning streak reversal.
    Wsr,
    /// `(P + I)/2` of the winning streak reversal.
    LazyWsr,
    /// Complete graph bijection.
    Cgb,
}

impl Family {
    pub fn build(self, n: usize) -> Result<StochasticMatrix> {
        match self {
            Family::Wsr => winning_streak_reversal(n),
            Family::LazyWsr => winning_streak_reversal(n).map(|p| lazify(&p)),
            Family::Cgb => complete_graph_bijection(n),
        }
    }

    /// Closed-form stationary distribution.
    pub fn stationary(self, n: usize) -> Result<Distribution> {
        match self {
            Family::Wsr | Family::LazyWsr => wsr_stationary(n),
            Family::Cgb => cgb_stationary(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Wsr => "wsr",
            Family::LazyWsr => "lazy-wsr",
            Family::Cgb => "cgb",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "wsr" => Ok(Family::Wsr),
            "lazy-wsr" => Ok(Family::LazyWsr),
            "cgb" => Ok(Family::Cgb),
            _ => Err(format!("unknown family {s:?}; expected wsr, lazy-wsr or cgb")),
        }
    }
}
