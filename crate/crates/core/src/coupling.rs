//! Monte Carlo simulation of explicit couplings.
//!
//! Every trial draws from its own ChaCha8 stream: the generator is seeded
//! with the run seed and the stream number is the trial index. Trials are
//! spread over rayon workers and tallied with integer counts, so a trace
//! depends only on its seed and never on the number of threads.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{stationary, tv_slices, Distribution, StochasticMatrix, STATIONARY_TOL};
use crate::error::{Error, Result};
use crate::families::{cgb_adjacency, cgb_clique, cgb_half, cgb_partner, GraphAdjacency};

/// Tallies from a coupling run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingTrace {
    pub trials: u64,
    /// Final time.
    pub t: usize,
    /// Trials with `X(t) = Y(t)`.
    pub meet_count: u64,
    /// Fraction of trials with `X(t) != Y(t)`.
    pub estimate: f64,
    /// `sqrt(p (1 - p) / trials)`.
    pub std_err: f64,
    pub seed: u64,
    /// Trials with `X(s) != Y(s)`, for `s = 0..=t`.
    pub mismatch_by_step: Vec<u64>,
    /// Counts of `X(t)` and `Y(t)` per state.
    pub x_counts: Vec<u64>,
    pub y_counts: Vec<u64>,
}

fn std_err(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

impl CouplingTrace {
    /// Mismatch estimate and its standard error at step `s`.
    pub fn estimate_at(&self, s: usize) -> (f64, f64) {
        let p = self.mismatch_by_step[s] as f64 / self.trials as f64;
        (p, std_err(p, self.trials))
    }

    /// Empirical law of `X(t)`.
    pub fn x_marginal(&self) -> Vec<f64> {
        self.x_counts.iter().map(|&c| c as f64 / self.trials as f64).collect()
    }

    pub fn y_marginal(&self) -> Vec<f64> {
        self.y_counts.iter().map(|&c| c as f64 / self.trials as f64).collect()
    }

    /// CSV with columns `t,estimate,std_err,trials,seed`, one row per step.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,estimate,std_err,trials,seed\n");
        for s in 0..=self.t {
            let (p, se) = self.estimate_at(s);
            let _ = writeln!(out, "{s},{p:?},{se:?},{},{}", self.trials, self.seed);
        }
        out
    }
}

/// The per-trial generator.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Cumulative weights for inverse-transform sampling.
#[derive(Debug, Clone)]
struct Cdf {
    cum: Vec<f64>,
    last_positive: usize,
}

impl Cdf {
    fn new(weights: impl IntoIterator<Item = f64>) -> Self {
        let mut cum = Vec::new();
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, w) in weights.into_iter().enumerate() {
            if w > 0.0 {
                acc += w;
                last_positive = i;
            }
            cum.push(acc);
        }
        Self { cum, last_positive }
    }

    fn total(&self) -> f64 {
        self.cum.last().copied().unwrap_or(0.0)
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u = rng.gen::<f64>() * self.total();
        self.cum.partition_point(|&c| c <= u).min(self.last_positive)
    }
}

/// Overlap decomposition of a pair of laws.
#[derive(Debug, Clone)]
struct MaximalCoupling {
    tv: f64,
    common: Cdf,
    left: Cdf,
    right: Cdf,
}

impl MaximalCoupling {
    fn new(mu: &[f64], nu: &[f64]) -> Self {
        let pairs = || mu.iter().zip(nu);
        Self {
            tv: tv_slices(mu, nu).min(1.0),
            common: Cdf::new(pairs().map(|(a, b)| a.min(*b))),
            left: Cdf::new(pairs().map(|(a, b)| (a - b).max(0.0))),
            right: Cdf::new(pairs().map(|(a, b)| (b - a).max(0.0))),
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> (usize, usize) {
        if self.tv <= 0.0 || (self.tv < 1.0 && rng.gen::<f64>() >= self.tv) {
            let z = self.common.sample(rng);
            (z, z)
        } else {
            (self.left.sample(rng), self.right.sample(rng))
        }
    }
}

/// Draws `(X, Y)` with `X ~ mu`, `Y ~ nu` and `P(X != Y) = ||mu - nu||`.
pub fn maximal_coupling_sample<R: Rng>(
    mu: &Distribution,
    nu: &Distribution,
    rng: &mut R,
) -> Result<(usize, usize)> {
    if mu.n() != nu.n() {
        return Err(Error::DimensionMismatch {
            left: mu.n(),
            right: nu.n(),
        });
    }
    Ok(MaximalCoupling::new(mu.probs(), nu.probs()).sample(rng))
}

#[derive(Clone)]
struct Tally {
    mismatch: Vec<u64>,
    x: Vec<u64>,
    y: Vec<u64>,
}

impl Tally {
    fn new(n: usize, t: usize) -> Self {
        Self {
            mismatch: vec![0; t + 1],
            x: vec![0; n],
            y: vec![0; n],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.mismatch.iter_mut().zip(&other.mismatch) {
            *a += b;
        }
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a += b;
        }
        for (a, b) in self.y.iter_mut().zip(&other.y) {
            *a += b;
        }
        self
    }
}

/// Runs `trials` independent copies of a coupled pair for `t` steps.
fn simulate<I, S>(n: usize, t: usize, trials: u64, seed: u64, init: I, step: S) -> Result<CouplingTrace>
where
    I: Fn(&mut ChaCha8Rng) -> (usize, usize) + Sync,
    S: Fn(&mut ChaCha8Rng, usize, usize) -> (usize, usize) + Sync,
{
    if trials == 0 {
        return Err(Error::param("trials", 0.0, "need at least one trial"));
    }
    let tally = (0..trials)
        .into_par_iter()
        .fold(
            || Tally::new(n, t),
            |mut acc, trial| {
                let mut rng = trial_rng(seed, trial);
                let (mut x, mut y) = init(&mut rng);
                acc.mismatch[0] += u64::from(x != y);
                for s in 1..=t {
                    (x, y) = step(&mut rng, x, y);
                    acc.mismatch[s] += u64::from(x != y);
                }
                acc.x[x] += 1;
                acc.y[y] += 1;
                acc
            },
        )
        .reduce(|| Tally::new(n, t), Tally::merge);
    let mismatches = tally.mismatch[t];
    let estimate = mismatches as f64 / trials as f64;
    Ok(CouplingTrace {
        trials,
        t,
        meet_count: trials - mismatches,
        estimate,
        std_err: std_err(estimate, trials),
        seed,
        mismatch_by_step: tally.mismatch,
        x_counts: tally.x,
        y_counts: tally.y,
    })
}

/// Couples `P` started from `pi~` with `P~` started from the same draw:
/// while the chains agree they step by the maximal coupling of their rows,
/// afterwards independently. The mismatch probability at time `t` bounds
/// `||pi~ P^t - pi~||`.
pub fn restart_coupling(
    p: &StochasticMatrix,
    ptilde: &StochasticMatrix,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<CouplingTrace> {
    let n = p.n();
    if ptilde.n() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: ptilde.n(),
        });
    }
    let pi_tilde = stationary(ptilde, STATIONARY_TOL)?;
    let start = Cdf::new(pi_tilde.probs().iter().copied());
    let rows_p: Vec<Cdf> = p.rows().map(|r| Cdf::new(r.iter().copied())).collect();
    let rows_q: Vec<Cdf> = ptilde.rows().map(|r| Cdf::new(r.iter().copied())).collect();
    let joint: Vec<MaximalCoupling> = (0..n)
        .map(|i| MaximalCoupling::new(p.row(i), ptilde.row(i)))
        .collect();
    simulate(
        n,
        t,
        trials,
        seed,
        |rng| {
            let z = start.sample(rng);
            (z, z)
        },
        |rng, x, y| {
            if x == y {
                joint[x].sample(rng)
            } else {
                (rows_p[x].sample(rng), rows_q[y].sample(rng))
            }
        },
    )
}

fn check_state(n: usize, s: usize) -> Result<()> {
    if s < n {
        Ok(())
    } else {
        Err(Error::StateOutOfRange { state: s, n })
    }
}

fn uniform_neighbor<R: Rng>(g: &GraphAdjacency, i: usize, rng: &mut R) -> usize {
    let nb = g.neighbors(i);
    nb[rng.gen_range(0..nb.len())]
}

/// A lazy step taken by both chains together.
fn joint_lazy_step<R: Rng>(g: &GraphAdjacency, x: usize, rng: &mut R) -> usize {
    if rng.gen_bool(0.5) {
        x
    } else {
        uniform_neighbor(g, x, rng)
    }
}

/// One chain moves to a uniform neighbour, the other holds, chosen by a fair
/// coin.
fn alternating_step<R: Rng>(g: &GraphAdjacency, x: usize, y: usize, rng: &mut R) -> (usize, usize) {
    if rng.gen_bool(0.5) {
        (uniform_neighbor(g, x, rng), y)
    } else {
        (x, uniform_neighbor(g, y, rng))
    }
}

/// The coupling of two copies of the even complete graph bijection, started
/// at `i` and `j`.
///
/// Chains in different cliques alternate lazy moves. Chains in the same
/// clique hold together on a fair coin; otherwise a die sends both across
/// the matching (`2/n`), swaps them (`2/n`), or moves both onto one uniform
/// state of their clique other than their current two (`1 - 4/n`).
pub fn cgb_even_coupling(
    n: usize,
    i: usize,
    j: usize,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<CouplingTrace> {
    if n % 2 == 1 || n < 6 {
        return Err(Error::UnsupportedSize {
            n,
            reason: "the even coupling needs even n >= 6",
        });
    }
    check_state(n, i)?;
    check_state(n, j)?;
    let g = cgb_adjacency(n)?;
    let k = cgb_half(n);
    let nf = n as f64;
    let cross = 2.0 / nf;
    let swap = 4.0 / nf;
    simulate(
        n,
        t,
        trials,
        seed,
        |_| (i, j),
        |rng, x, y| {
            if x == y {
                let z = joint_lazy_step(&g, x, rng);
                return (z, z);
            }
            if cgb_clique(n, x) != cgb_clique(n, y) {
                return alternating_step(&g, x, y, rng);
            }
            if rng.gen_bool(0.5) {
                return (x, y);
            }
            let u = rng.gen::<f64>();
            if u < cross {
                (cgb_partner(n, x), cgb_partner(n, y))
            } else if u < swap {
                (y, x)
            } else {
                // Uniform over the clique minus {x, y}: draw a rank among the
                // k - 2 remaining states.
                let base = cgb_clique(n, x) * k;
                let (lo, hi) = (x.min(y), x.max(y));
                let mut z = base + rng.gen_range(0..k - 2);
                if z >= lo {
                    z += 1;
                }
                if z >= hi {
                    z += 1;
                }
                (z, z)
            }
        },
    )
}

/// The coupling of two copies of the odd complete graph bijection, started
/// at `i` and `j`.
///
/// If either chain is at the hub they alternate lazy moves. Otherwise a die
/// holds both (`1/2`), moves each independently to a uniform non-hub
/// neighbour (`1/2 - 1/(n+1)`), or sends both to the hub (`1/(n+1)`).
pub fn cgb_odd_coupling(
    n: usize,
    i: usize,
    j: usize,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<CouplingTrace> {
    if n % 2 == 0 || n < 5 {
        return Err(Error::UnsupportedSize {
            n,
            reason: "the odd coupling needs odd n >= 5",
        });
    }
    check_state(n, i)?;
    check_state(n, j)?;
    let g = cgb_adjacency(n)?;
    let hub = n - 1;
    let to_hub = 1.0 / (n + 1) as f64;
    let hold = 0.5;
    let non_hub = |s: usize| -> &[usize] {
        // The hub is the largest label, so it closes every neighbour list.
        let nb = g.neighbors(s);
        &nb[..nb.len() - 1]
    };
    simulate(
        n,
        t,
        trials,
        seed,
        |_| (i, j),
        |rng, x, y| {
            if x == y {
                let z = joint_lazy_step(&g, x, rng);
                return (z, z);
            }
            if x == hub || y == hub {
                return alternating_step(&g, x, y, rng);
            }
            let u = rng.gen::<f64>();
            if u < hold {
                (x, y)
            } else if u < 1.0 - to_hub {
                let (nx, ny) = (non_hub(x), non_hub(y));
                (nx[rng.gen_range(0..nx.len())], ny[rng.gen_range(0..ny.len())])
            } else {
                (hub, hub)
            }
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::step;
    use crate::families::complete_graph_bijection;
    use crate::perturbation::{restart_matrix, RestartPerturbation};

    #[test]
    fn maximal_coupling_extremes() {
        let mut rng = trial_rng(7, 0);
        let mu = Distribution::from_vec(vec![0.2, 0.3, 0.5]).unwrap();
        for _ in 0..1000 {
            let (x, y) = maximal_coupling_sample(&mu, &mu, &mut rng).unwrap();
            assert_eq!(x, y);
        }
        let e1 = Distribution::point(2, 0).unwrap();
        let e2 = Distribution::point(2, 1).unwrap();
        for _ in 0..1000 {
            assert_eq!(maximal_coupling_sample(&e1, &e2, &mut rng).unwrap(), (0, 1));
        }
        let e3 = Distribution::point(3, 0).unwrap();
        assert!(maximal_coupling_sample(&e1, &e3, &mut rng).is_err());
    }

    #[test]
    fn maximal_coupling_rate() {
        let mu = Distribution::uniform(2).unwrap();
        let nu = Distribution::point(2, 0).unwrap();
        let trials = 100_000u64;
        let mut mismatches = 0u64;
        let mut xs = 0u64;
        for trial in 0..trials {
            let mut rng = trial_rng(11, trial);
            let (x, y) = maximal_coupling_sample(&mu, &nu, &mut rng).unwrap();
            assert_eq!(y, 0);
            mismatches += u64::from(x != y);
            xs += x as u64;
        }
        let p = mismatches as f64 / trials as f64;
        assert!((p - 0.5).abs() <= 3.0 * std_err(0.5, trials), "{p}");
        assert_eq!(mismatches, xs);
    }

    #[test]
    fn identical_chains_never_separate() {
        let p = complete_graph_bijection(6).unwrap();
        let trace = restart_coupling(&p, &p, 10, 2000, 3).unwrap();
        assert_eq!(trace.estimate, 0.0);
        assert_eq!(trace.meet_count, 2000);
    }

    #[test]
    fn restart_coupling_starts_together() {
        let p = complete_graph_bijection(6).unwrap();
        let pert = RestartPerturbation::new(0.2, Distribution::point(6, 0).unwrap()).unwrap();
        let q = restart_matrix(&p, &pert).unwrap();
        let trace = restart_coupling(&p, &q, 0, 500, 5).unwrap();
        assert_eq!(trace.estimate, 0.0);
        let trace = restart_coupling(&p, &q, 5, 20_000, 5).unwrap();
        let bound = 1.0 - 0.8f64.powi(5);
        assert!(trace.estimate <= bound + 3.0 * trace.std_err);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = cgb_even_coupling(8, 0, 5, 12, 5000, 42).unwrap();
        let b = cgb_even_coupling(8, 0, 5, 12, 5000, 42).unwrap();
        assert_eq!(a, b);
        let c = cgb_even_coupling(8, 0, 5, 12, 5000, 43).unwrap();
        assert_ne!(a.mismatch_by_step, c.mismatch_by_step);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let d = pool.install(|| cgb_even_coupling(8, 0, 5, 12, 5000, 42).unwrap());
        assert_eq!(a, d);
    }

    #[test]
    fn equal_starts_stay_equal() {
        assert_eq!(cgb_even_coupling(6, 2, 2, 8, 1000, 1).unwrap().estimate, 0.0);
        assert_eq!(cgb_odd_coupling(7, 6, 6, 8, 1000, 1).unwrap().estimate, 0.0);
    }

    #[test]
    fn parity_is_enforced() {
        assert!(cgb_even_coupling(7, 0, 1, 3, 10, 0).is_err());
        assert!(cgb_even_coupling(4, 0, 1, 3, 10, 0).is_err());
        assert!(cgb_odd_coupling(8, 0, 1, 3, 10, 0).is_err());
        assert!(cgb_odd_coupling(7, 0, 9, 3, 10, 0).is_err());
    }

    fn marginals_match(n: usize, i: usize, j: usize, trace: &CouplingTrace) {
        let p = complete_graph_bijection(n).unwrap();
        let exact_x = step(&Distribution::point(n, i).unwrap(), &p, trace.t).unwrap();
        let exact_y = step(&Distribution::point(n, j).unwrap(), &p, trace.t).unwrap();
        // Each cell is binomial; 5 sigma per cell summed gives a loose l1 band.
        let band: f64 = exact_x
            .probs()
            .iter()
            .map(|q| 5.0 * (q * (1.0 - q) / trace.trials as f64).sqrt())
            .sum();
        assert!(tv_slices(&trace.x_marginal(), exact_x.probs()) <= band);
        assert!(tv_slices(&trace.y_marginal(), exact_y.probs()) <= band);
    }

    #[test]
    fn marginals_are_the_chain() {
        let t = cgb_even_coupling(8, 0, 1, 3, 50_000, 9).unwrap();
        marginals_match(8, 0, 1, &t);
        let t = cgb_even_coupling(8, 0, 6, 4, 50_000, 9).unwrap();
        marginals_match(8, 0, 6, &t);
        let t = cgb_odd_coupling(9, 8, 2, 4, 50_000, 9).unwrap();
        marginals_match(9, 8, 2, &t);
        let t = cgb_odd_coupling(9, 1, 5, 3, 50_000, 9).unwrap();
        marginals_match(9, 1, 5, &t);
    }

    #[test]
    fn csv_rows() {
        let t = cgb_odd_coupling(5, 0, 1, 2, 100, 77).unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("t,estimate,std_err,trials,seed\n0,1.0,0.0,100,77\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
