//! Random test instances: irreducible chains, lazy reversible chains,
//! distributions and perturbations inside a row-distance ball.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::chain::{Distribution, StochasticMatrix};
use crate::error::{Error, Result};

fn exp1<R: Rng>(rng: &mut R) -> f64 {
    -(1.0 - rng.gen::<f64>()).ln()
}

fn normalize_rows(n: usize, mut w: Vec<f64>) -> StochasticMatrix {
    for row in w.chunks_exact_mut(n) {
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= s);
    }
    StochasticMatrix::from_flat_unchecked(n, w)
}

/// A flat Dirichlet(1, ..., 1) draw.
pub fn random_distribution<R: Rng>(n: usize, rng: &mut R) -> Result<Distribution> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let w: Vec<f64> = (0..n).map(|_| exp1(rng)).collect();
    let s: f64 = w.iter().sum();
    Ok(Distribution::from_vec_unchecked(w.into_iter().map(|v| v / s).collect()))
}

/// A random irreducible aperiodic chain. Each entry is present with
/// probability `density`; a random Hamiltonian cycle and a positive diagonal
/// guarantee irreducibility and aperiodicity.
pub fn random_irreducible_chain<R: Rng>(n: usize, density: f64, rng: &mut R) -> Result<StochasticMatrix> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut w = vec![0.0; n * n];
    for v in w.iter_mut() {
        if rng.gen::<f64>() < density {
            *v = exp1(rng);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 0..n {
        let (a, b) = (order[k], order[(k + 1) % n]);
        w[a * n + b] += exp1(rng);
        w[a * n + a] += 0.1 * exp1(rng);
    }
    Ok(normalize_rows(n, w))
}

/// A lazy random walk on a random connected weighted graph, with its
/// stationary law (proportional to weighted degree).
pub fn random_lazy_reversible<R: Rng>(
    n: usize,
    extra_edge_prob: f64,
    rng: &mut R,
) -> Result<(StochasticMatrix, Distribution)> {
    if n == 0 {
        return Err(Error::Empty);
    }
    if n == 1 {
        return Ok((StochasticMatrix::identity(1)?, Distribution::uniform(1)?));
    }
    let mut w = vec![0.0; n * n];
    let add = |w: &mut Vec<f64>, a: usize, b: usize, v: f64| {
        w[a * n + b] += v;
        w[b * n + a] += v;
    };
    // Random spanning tree: attach each new state to an earlier one.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        let v = exp1(rng);
        add(&mut w, order[k], parent, v);
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen::<f64>() < extra_edge_prob {
                let v = exp1(rng);
                add(&mut w, a, b, v);
            }
        }
    }
    let degree: Vec<f64> = w.chunks_exact(n).map(|r| r.iter().sum()).collect();
    let total: f64 = degree.iter().sum();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = if i == j { 0.5 } else { w[i * n + j] / (2.0 * degree[i]) };
        }
    }
    let pi = Distribution::from_vec_unchecked(degree.iter().map(|d| d / total).collect());
    Ok((normalize_rows(n, entries), pi))
}

/// Moves each row of `P` a fraction `alpha` toward its own random law, so
/// every row stays within distance `alpha`.
pub fn random_ball_perturbation<R: Rng>(
    p: &StochasticMatrix,
    alpha: f64,
    rng: &mut R,
) -> Result<StochasticMatrix> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", alpha, "must lie in (0, 1)"));
    }
    let n = p.n();
    let mut entries = Vec::with_capacity(n * n);
    for row in p.rows() {
        let nu = random_distribution(n, rng)?;
        entries.extend(row.iter().zip(nu.probs()).map(|(&a, &b)| (1.0 - alpha) * a + alpha * b));
    }
    Ok(normalize_rows(n, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{classify, stationary, BALANCE_TOL, STATIONARY_TOL};
    use crate::coupling::trial_rng;

    #[test]
    fn generated_chains_have_claimed_properties() {
        let mut rng = trial_rng(1, 0);
        for n in [1, 2, 5, 12] {
            let p = random_irreducible_chain(n, 0.3, &mut rng).unwrap();
            let pi = stationary(&p, STATIONARY_TOL).unwrap();
            assert!(classify(&p, &pi, BALANCE_TOL).unwrap().is_ergodic());

            let (q, rho) = random_lazy_reversible(n, 0.2, &mut rng).unwrap();
            let props = classify(&q, &rho, BALANCE_TOL).unwrap();
            assert!(props.lazy && props.reversible && props.is_ergodic(), "n={n}");
            let solved = stationary(&q, STATIONARY_TOL).unwrap();
            for k in 0..n {
                assert!((solved.get(k) - rho.get(k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ball_perturbation_stays_in_ball() {
        let mut rng = trial_rng(2, 0);
        let p = random_irreducible_chain(8, 0.5, &mut rng).unwrap();
        let q = random_ball_perturbation(&p, 0.2, &mut rng).unwrap();
        assert!(crate::perturbation::radius(&p, &q).unwrap() <= 0.2 + 1e-15);
    }
}
