//! Hitting probabilities of large sets and the hitting time
//! `t_hit(1 - eta3, eta1)`: the first `t` such that from every start, every
//! set `A` with `pi(A) >= 1 - eta3` has been entered by time `t` with
//! probability at least `1 - eta1`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::chain::{Distribution, StochasticMatrix};
use crate::error::{Error, Result};

/// Largest state count for which [`SearchMode::Exact`] enumerates subsets.
pub const BRUTE_FORCE_LIMIT: usize = 18;

/// How the maximizing set `A` is searched for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    /// Every inclusion-minimal qualifying set. Needs `n <= BRUTE_FORCE_LIMIT`.
    Exact,
    /// A single set: start from the whole space and drop states in order of
    /// increasing stationary mass while the set still qualifies. Gives a
    /// lower bound on `t_hit`.
    Greedy,
    /// `Exact` when the chain is small enough, `Greedy` otherwise.
    Auto,
}

/// A witness `(x, A)` for `t_hit`: `P_x(T_A > t_hit - 1) > eta1` whenever
/// `t_hit >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HittingTimeCertificate {
    pub t_hit: usize,
    pub witness_x: usize,
    /// Sorted state indices.
    pub witness_a: Vec<usize>,
    /// `P_x(T_A > max(t_hit, 1) - 1)`.
    pub witness_prob: f64,
    /// Whether the subset search was exhaustive.
    pub exhaustive: bool,
}

impl HittingTimeCertificate {
    /// Serializes with 1-based state labels.
    pub fn to_json(&self) -> String {
        json!({
            "t_hit": self.t_hit,
            "x": self.witness_x + 1,
            "A": self.witness_a.iter().map(|a| a + 1).collect::<Vec<_>>(),
            "prob": self.witness_prob,
            "exhaustive": self.exhaustive,
        })
        .to_string()
    }
}

fn membership(n: usize, a: &[usize]) -> Result<Vec<bool>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut inside = vec![false; n];
    for &s in a {
        if s >= n {
            return Err(Error::StateOutOfRange { state: s, n });
        }
        inside[s] = true;
    }
    Ok(inside)
}

/// `P_x(T_A > t)` for `t = 0..=t_max`, where `T_A` is the first time
/// (counting time 0) the chain started at `x` is in `A`.
pub fn hitting_profile(
    p: &StochasticMatrix,
    x: usize,
    a: &[usize],
    t_max: usize,
) -> Result<Vec<f64>> {
    let n = p.n();
    let inside = membership(n, a)?;
    if x >= n {
        return Err(Error::StateOutOfRange { state: x, n });
    }
    let outside: Vec<usize> = (0..n).filter(|&s| !inside[s]).collect();
    let mut out = Vec::with_capacity(t_max + 1);
    if inside[x] {
        out.resize(t_max + 1, 0.0);
        return Ok(out);
    }
    // Mass of e_x Q^t on the complement of A, Q the killed kernel.
    let mut mu = vec![0.0; n];
    let mut next = vec![0.0; n];
    mu[x] = 1.0;
    out.push(1.0);
    for _ in 0..t_max {
        for &z in &outside {
            next[z] = outside.iter().map(|&y| mu[y] * p.get(y, z)).sum();
        }
        std::mem::swap(&mut mu, &mut next);
        out.push(outside.iter().map(|&z| mu[z]).sum::<f64>().min(1.0));
    }
    Ok(out)
}

/// Outcome of running the survival recursion for one set.
#[derive(Debug, Clone, Copy)]
struct SetRun {
    tau: usize,
    prob: f64,
    x: usize,
}

/// Iterates `h_{t+1}(y) = [y not in A] sum_z P(y, z) h_t(z)` from
/// `h_0 = 1_{A^c}` until `max_y h_t(y) <= eta1`. Returns that time together
/// with the maximizing start and value one step earlier.
fn survival_run(p: &StochasticMatrix, inside: &[bool], eta1: f64, t_cap: usize) -> Result<SetRun> {
    let n = p.n();
    let outside: Vec<usize> = (0..n).filter(|&s| !inside[s]).collect();
    let mut h: Vec<f64> = inside.iter().map(|&i| if i { 0.0 } else { 1.0 }).collect();
    let mut next = vec![0.0; n];
    let argmax = |h: &[f64]| {
        let mut best = (0usize, 0.0f64);
        for (y, &v) in h.iter().enumerate() {
            if v > best.1 {
                best = (y, v);
            }
        }
        best
    };
    let (mut x, mut m) = argmax(&h);
    if m <= eta1 {
        return Ok(SetRun { tau: 0, prob: m, x });
    }
    let mut t = 0;
    loop {
        if t >= t_cap {
            return Err(Error::CapExceeded { cap: t_cap });
        }
        for &y in &outside {
            let row = p.row(y);
            next[y] = outside.iter().map(|&z| row[z] * h[z]).sum();
        }
        std::mem::swap(&mut h, &mut next);
        t += 1;
        let (nx, nm) = argmax(&h);
        if nm <= eta1 {
            return Ok(SetRun { tau: t, prob: m, x });
        }
        (x, m) = (nx, nm);
    }
}

fn check_eta(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, v, "must lie in (0, 1)"))
    }
}

/// Computes `t_hit(1 - eta3, eta1)` together with a witness.
///
/// Witness ties are broken by smallest `x`, then by smallest subset bitmask.
pub fn t_hit(
    p: &StochasticMatrix,
    pi: &Distribution,
    eta3: f64,
    eta1: f64,
    mode: SearchMode,
    t_cap: usize,
) -> Result<HittingTimeCertificate> {
    t_hit_with_limit(p, pi, eta3, eta1, mode, t_cap, BRUTE_FORCE_LIMIT)
}

/// [`t_hit`] with an explicit brute-force limit for exact mode.
pub fn t_hit_with_limit(
    p: &StochasticMatrix,
    pi: &Distribution,
    eta3: f64,
    eta1: f64,
    mode: SearchMode,
    t_cap: usize,
    limit: usize,
) -> Result<HittingTimeCertificate> {
    check_eta("eta3", eta3)?;
    check_eta("eta1", eta1)?;
    let n = p.n();
    if pi.n() != n {
        return Err(Error::DimensionMismatch {
            left: pi.n(),
            right: n,
        });
    }
    let limit = limit.min(30);
    let threshold = 1.0 - eta3;
    match mode {
        SearchMode::Exact if n > limit => Err(Error::BruteForceLimit { n, limit }),
        SearchMode::Exact => exact_search(p, pi, threshold, eta1, t_cap),
        SearchMode::Auto if n <= limit => exact_search(p, pi, threshold, eta1, t_cap),
        SearchMode::Greedy | SearchMode::Auto => greedy_search(p, pi, threshold, eta1, t_cap),
    }
}

fn exact_search(
    p: &StochasticMatrix,
    pi: &Distribution,
    threshold: f64,
    eta1: f64,
    t_cap: usize,
) -> Result<HittingTimeCertificate> {
    let n = p.n();
    let full = 1u32 << n;
    let mut mass = vec![0.0f64; full as usize];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        mass[mask as usize] = mass[(mask & (mask - 1)) as usize] + pi.get(low);
    }
    let minimal: Vec<u32> = (1..full)
        .into_par_iter()
        .filter(|&mask| {
            mass[mask as usize] >= threshold
                && (0..n)
                    .filter(|&i| mask & (1 << i) != 0)
                    .all(|i| mass[(mask ^ (1 << i)) as usize] < threshold)
        })
        .collect();
    if minimal.is_empty() {
        return Err(Error::EmptySet);
    }
    let runs: Vec<SetRun> = minimal
        .par_iter()
        .map(|&mask| {
            let inside: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
            survival_run(p, &inside, eta1, t_cap)
        })
        .collect::<Result<_>>()?;
    let t_hit = runs.iter().map(|r| r.tau).max().unwrap_or(0);
    // Masks are ascending, so the first strict improvement wins ties.
    let mut best: Option<(SetRun, u32)> = None;
    for (run, &mask) in runs.iter().zip(&minimal) {
        if run.tau != t_hit {
            continue;
        }
        let better = match best {
            None => true,
            Some((b, _)) => run.prob > b.prob || (run.prob == b.prob && run.x < b.x),
        };
        if better {
            best = Some((*run, mask));
        }
    }
    let (run, mask) = best.expect("some set attains the maximum");
    Ok(HittingTimeCertificate {
        t_hit,
        witness_x: run.x,
        witness_a: (0..n).filter(|&i| mask & (1 << i) != 0).collect(),
        witness_prob: run.prob,
        exhaustive: true,
    })
}

fn greedy_search(
    p: &StochasticMatrix,
    pi: &Distribution,
    threshold: f64,
    eta1: f64,
    t_cap: usize,
) -> Result<HittingTimeCertificate> {
    let n = p.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| pi.get(a).total_cmp(&pi.get(b)).then(a.cmp(&b)));
    let mut inside = vec![true; n];
    let mass = |inside: &[bool]| -> f64 {
        inside
            .iter()
            .zip(pi.probs())
            .filter(|(&i, _)| i)
            .map(|(_, &v)| v)
            .sum()
    };
    if mass(&inside) < threshold {
        return Err(Error::EmptySet);
    }
    for s in order {
        inside[s] = false;
        if mass(&inside) < threshold {
            inside[s] = true;
        }
    }
    let run = survival_run(p, &inside, eta1, t_cap)?;
    Ok(HittingTimeCertificate {
        t_hit: run.tau,
        witness_x: run.x,
        witness_a: (0..n).filter(|&i| inside[i]).collect(),
        witness_prob: run.prob,
        exhaustive: false,
    })
}
