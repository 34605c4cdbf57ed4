//! Dense transition matrices, probability vectors and the basic operations
//! on them: validation, classification, stationary distributions, total
//! variation and stepping a distribution forward in time.
//!
//! States are indexed from 0. All types are immutable once built, so they can
//! be shared freely across rayon workers.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default tolerance for row sums and distribution sums.
pub const VALIDATION_TOL: f64 = 1e-9;
/// Default bound on `||pi P - pi||_1` accepted from the stationary solve.
pub const STATIONARY_TOL: f64 = 1e-10;
/// Default detailed-balance and laziness tolerance used by [`classify`].
pub const BALANCE_TOL: f64 = 1e-9;

/// A validated row-stochastic `n x n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StochasticMatrix {
    n: usize,
    entries: Vec<f64>,
    row_sums_tol: f64,
}

impl StochasticMatrix {
    /// Validates a square array of rows.
    ///
    /// Rows whose sum lies within `tol` of 1 are rescaled to sum to 1; any
    /// larger deviation, a negative or non-finite entry, or a ragged row is
    /// rejected.
    pub fn validate(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
            entries.extend_from_slice(row);
        }
        Self::from_flat(n, entries, tol)
    }

    /// Validates with the default tolerance.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::validate(rows, VALIDATION_TOL)
    }

    /// Validates a row-major buffer of length `n * n`.
    pub fn from_flat(n: usize, mut entries: Vec<f64>, tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                left: entries.len(),
                right: n * n,
            });
        }
        if !(tol >= 0.0) {
            return Err(Error::param("tol", tol, "must be nonnegative"));
        }
        for i in 0..n {
            let row = &mut entries[i * n..(i + 1) * n];
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::RowSum { row: i, sum, tol });
            }
            if sum != 1.0 {
                row.iter_mut().for_each(|v| *v /= sum);
            }
        }
        Ok(Self {
            n,
            entries,
            row_sums_tol: tol,
        })
    }

    /// Builds a matrix the caller has already guaranteed to be stochastic.
    pub(crate) fn from_flat_unchecked(n: usize, entries: Vec<f64>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Self {
            n,
            entries,
            row_sums_tol: VALIDATION_TOL,
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Ok(Self::from_flat_unchecked(n, entries))
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_sums_tol(&self) -> f64 {
        self.row_sums_tol
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks_exact(self.n)
    }

    /// Row-major view of all entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn min_diagonal(&self) -> f64 {
        (0..self.n)
            .map(|i| self.get(i, i))
            .fold(f64::INFINITY, f64::min)
    }

    /// Writes `mu P` into `out`.
    pub fn left_multiply_into(&self, mu: &[f64], out: &mut [f64]) {
        debug_assert_eq!(mu.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        out.iter_mut().for_each(|v| *v = 0.0);
        for (&weight, row) in mu.iter().zip(self.rows()) {
            if weight == 0.0 {
                continue;
            }
            for (o, &p) in out.iter_mut().zip(row) {
                *o += weight * p;
            }
        }
    }

    /// Returns `mu P`.
    pub fn left_multiply(&self, mu: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.left_multiply_into(mu, &mut out);
        out
    }

    /// Relabels states so that new state `perm[i]` plays the role of old
    /// state `i`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[perm[i] * n + perm[j]] = self.get(i, j);
            }
        }
        Ok(Self::from_flat_unchecked(n, entries))
    }

    /// Indices `j` with `P(i, j) > 0`.
    pub(crate) fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(j, _)| j)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            left: perm.len(),
            right: n,
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::StateOutOfRange { state: p, n });
        }
        seen[p] = true;
    }
    Ok(())
}

/// A probability vector over `n` states.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates nonnegativity and that the entries sum to 1 within `tol`.
    pub fn new(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty);
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::NegativeEntry {
                    row: 0,
                    col: i,
                    value: p,
                });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::DistributionSum { sum, tol });
        }
        Ok(Self { probs })
    }

    pub fn from_vec(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs, VALIDATION_TOL)
    }

    pub(crate) fn from_vec_unchecked(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    /// The point mass `e_i`.
    pub fn point(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::StateOutOfRange { state: i, n });
        }
        let mut probs = vec![0.0; n];
        probs[i] = 1.0;
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Total mass of the listed states.
    pub fn mass(&self, states: &[usize]) -> f64 {
        states.iter().map(|&i| self.probs[i]).sum()
    }

    pub fn min(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n())?;
        let mut probs = vec![0.0; self.n()];
        for (i, &p) in perm.iter().enumerate() {
            probs[p] = self.probs[i];
        }
        Ok(Self { probs })
    }
}

/// Structural and balance properties of a chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainProperties {
    pub irreducible: bool,
    pub aperiodic: bool,
    /// gcd of cycle lengths through state 0.
    pub period: usize,
    pub lazy: bool,
    pub min_diagonal: f64,
    pub reversible: bool,
    /// `max_{i,j} |pi(i) P(i,j) - pi(j) P(j,i)|`
    pub reversibility_residual: f64,
}

impl ChainProperties {
    /// Membership in the class of irreducible aperiodic chains.
    pub fn is_ergodic(&self) -> bool {
        self.irreducible && self.aperiodic
    }
}

/// Half the l1 distance between two equal-length slices.
#[inline]
pub(crate) fn tv_slices(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Total variation distance `(1/2) sum_i |mu(i) - nu(i)|`.
pub fn total_variation(mu: &Distribution, nu: &Distribution) -> Result<f64> {
    if mu.n() != nu.n() {
        return Err(Error::DimensionMismatch {
            left: mu.n(),
            right: nu.n(),
        });
    }
    Ok(tv_slices(&mu.probs, &nu.probs).min(1.0))
}

/// `mu P^t`, by `t` vector-matrix products.
pub fn step(mu: &Distribution, p: &StochasticMatrix, t: usize) -> Result<Distribution> {
    if mu.n() != p.n() {
        return Err(Error::DimensionMismatch {
            left: mu.n(),
            right: p.n(),
        });
    }
    let mut cur = mu.probs.clone();
    let mut next = vec![0.0; p.n()];
    for _ in 0..t {
        p.left_multiply_into(&cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(Distribution::from_vec_unchecked(cur))
}

/// `(P + I) / 2`.
pub fn lazify(p: &StochasticMatrix) -> StochasticMatrix {
    let n = p.n();
    let mut entries: Vec<f64> = p.entries().iter().map(|v| 0.5 * v).collect();
    for i in 0..n {
        entries[i * n + i] += 0.5;
    }
    StochasticMatrix::from_flat_unchecked(n, entries)
}

/// Breadth-first reachability over positive entries, optionally on the
/// reversed graph.
fn reachable(p: &StochasticMatrix, start: usize, reverse: bool) -> Vec<bool> {
    let n = p.n();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for (v, s) in seen.iter_mut().enumerate() {
            let w = if reverse { p.get(v, u) } else { p.get(u, v) };
            if w > 0.0 && !*s {
                *s = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Returns the first state not strongly connected to state 0, if any.
pub(crate) fn first_unreachable(p: &StochasticMatrix) -> Option<usize> {
    let fwd = reachable(p, 0, false);
    let bwd = reachable(p, 0, true);
    (0..p.n()).find(|&i| !fwd[i] || !bwd[i])
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Period of state 0: gcd over edges `u -> v` inside its reachable set of
/// `level(u) + 1 - level(v)`, with BFS levels from state 0.
fn period_of_origin(p: &StochasticMatrix) -> usize {
    let n = p.n();
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    let mut g = 0;
    while let Some(u) = queue.pop_front() {
        for v in p.successors(u) {
            if level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                g = gcd(g, (level[u] + 1).abs_diff(level[v]));
            }
        }
    }
    g
}

/// Max over `i, j` of `|pi(i) P(i,j) - pi(j) P(j,i)|`.
pub fn detailed_balance_residual(p: &StochasticMatrix, pi: &Distribution) -> f64 {
    let n = p.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = (pi.get(i) * p.get(i, j) - pi.get(j) * p.get(j, i)).abs();
            worst = worst.max(r);
        }
    }
    worst
}

/// Reports irreducibility, aperiodicity, laziness and reversibility.
///
/// `pi` should be stationary for `p`; it only enters the reversibility test.
pub fn classify(p: &StochasticMatrix, pi: &Distribution, tol: f64) -> Result<ChainProperties> {
    if pi.n() != p.n() {
        return Err(Error::DimensionMismatch {
            left: pi.n(),
            right: p.n(),
        });
    }
    let irreducible = first_unreachable(p).is_none();
    let min_diagonal = p.min_diagonal();
    let period = if (0..p.n()).any(|i| p.get(i, i) > 0.0) && irreducible {
        1
    } else {
        period_of_origin(p)
    };
    let residual = detailed_balance_residual(p, pi);
    Ok(ChainProperties {
        irreducible,
        aperiodic: period == 1,
        period,
        lazy: min_diagonal >= 0.5 - tol,
        min_diagonal,
        reversible: residual <= tol,
        reversibility_residual: residual,
    })
}

/// `||mu P - mu||_1`.
pub fn stationarity_residual(p: &StochasticMatrix, mu: &[f64]) -> f64 {
    let next = p.left_multiply(mu);
    next.iter().zip(mu).map(|(a, b)| (a - b).abs()).sum()
}

/// Solves `pi (P - I) = 0`, `sum(pi) = 1` for an irreducible chain.
///
/// The rows of `P^T - I` sum to zero, so one equation is redundant; it is
/// replaced by the normalisation row and the square system is solved by LU
/// with partial pivoting plus two rounds of iterative refinement.
pub fn stationary(p: &StochasticMatrix, tol: f64) -> Result<Distribution> {
    if let Some(state) = first_unreachable(p) {
        return Err(Error::Reducible { state });
    }
    let n = p.n();
    if n == 1 {
        return Ok(Distribution::from_vec_unchecked(vec![1.0]));
    }
    let a = DMatrix::from_fn(n, n, |i, j| {
        if i == n - 1 {
            1.0
        } else {
            p.get(j, i) - if i == j { 1.0 } else { 0.0 }
        }
    });
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let lu = a.clone().lu();
    let mut x = lu.solve(&b).ok_or(Error::SolverFailure {
        residual: f64::INFINITY,
        tol,
    })?;
    for _ in 0..2 {
        let r = &b - &a * &x;
        if let Some(dx) = lu.solve(&r) {
            x += dx;
        }
    }
    let mut probs: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
    let sum: f64 = probs.iter().sum();
    if !(sum > 0.0) {
        return Err(Error::SolverFailure {
            residual: f64::INFINITY,
            tol,
        });
    }
    probs.iter_mut().for_each(|v| *v /= sum);
    let residual = stationarity_residual(p, &probs);
    if !(residual <= tol) {
        return Err(Error::SolverFailure { residual, tol });
    }
    Ok(Distribution::from_vec_unchecked(probs))
}
