use serde::Serialize;

use crate::chain::{stationary, total_variation, tv_slices, Distribution, StochasticMatrix, STATIONARY_TOL};
use crate::error::{Error, Result};

/// Restart with probability `alpha` at a state drawn from `sigma`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartPerturbation {
    alpha: f64,
    sigma: Distribution,
}

impl RestartPerturbation {
    pub fn new(alpha: f64, sigma: Distribution) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::param("alpha", alpha, "must lie in (0, 1)"));
        }
        Ok(Self { alpha, sigma })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma(&self) -> &Distribution {
        &self.sigma
    }
}

fn same_n(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

/// `(1 - alpha) P + alpha 1^T sigma`.
pub fn restart_matrix(p: &StochasticMatrix, pert: &RestartPerturbation) -> Result<StochasticMatrix> {
    let n = p.n();
    same_n(n, pert.sigma.n())?;
    let a = pert.alpha;
    let sigma = pert.sigma.probs();
    let mut entries = Vec::with_capacity(n * n);
    for row in p.rows() {
        entries.extend(row.iter().zip(sigma).map(|(&v, &s)| (1.0 - a) * v + a * s));
    }
    Ok(StochasticMatrix::from_flat_unchecked(n, entries))
}

/// `max_i ||e_i P - e_i P~||`; `P~` lies in the ball of radius `alpha`
/// around `P` iff this is at most `alpha`.
pub fn radius(p: &StochasticMatrix, ptilde: &StochasticMatrix) -> Result<f64> {
    same_n(p.n(), ptilde.n())?;
    Ok(p.rows()
        .zip(ptilde.rows())
        .map(|(a, b)| tv_slices(a, b))
        .fold(0.0, f64::max)
        .min(1.0))
}

/// Number of series terms needed for `(1 - alpha)^T <= tol`.
pub fn series_horizon(alpha: f64, tol: f64) -> usize {
    (tol.ln() / (1.0 - alpha).ln()).ceil().max(0.0) as usize
}

/// `alpha sum_{t >= 0} (1 - alpha)^t sigma P^t`, truncated once the
/// neglected mass `(1 - alpha)^T` is at most `tol`. The truncated sum is not
/// renormalized.
pub fn restart_stationary_series(
    p: &StochasticMatrix,
    pert: &RestartPerturbation,
    tol: f64,
) -> Result<Distribution> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::param("tol", tol, "must lie in (0, 1)"));
    }
    same_n(p.n(), pert.sigma.n())?;
    let horizon = series_horizon(pert.alpha, tol);
    let mut term = pert.sigma.probs().to_vec();
    let mut next = vec![0.0; p.n()];
    let mut acc = vec![0.0; p.n()];
    let mut weight = pert.alpha;
    for _ in 0..horizon {
        for (a, &v) in acc.iter_mut().zip(&term) {
            *a += weight * v;
        }
        p.left_multiply_into(&term, &mut next);
        std::mem::swap(&mut term, &mut next);
        weight *= 1.0 - pert.alpha;
    }
    Ok(Distribution::from_vec_unchecked(acc))
}

/// `||pi - pi~||` for the stationary laws of `P` and `P~`.
pub fn perturbation_error(p: &StochasticMatrix, ptilde: &StochasticMatrix) -> Result<f64> {
    same_n(p.n(), ptilde.n())?;
    let pi = stationary(p, STATIONARY_TOL)?;
    perturbation_error_from(&pi, ptilde)
}

/// Like [`perturbation_error`] with `pi` already known.
pub fn perturbation_error_from(pi: &Distribution, ptilde: &StochasticMatrix) -> Result<f64> {
    let pi_tilde = stationary(ptilde, STATIONARY_TOL)?;
    total_variation(pi, &pi_tilde)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{winning_streak_reversal, wsr_stationary};

    fn l1(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
    }

    #[test]
    fn restart_rows() {
        let id = StochasticMatrix::identity(2).unwrap();
        let sigma = Distribution::from_vec(vec![0.25, 0.75]).unwrap();
        let r = restart_matrix(&id, &RestartPerturbation::new(0.5, sigma).unwrap()).unwrap();
        assert_eq!(r.to_rows(), vec![vec![0.625, 0.375], vec![0.125, 0.875]]);
        assert!(RestartPerturbation::new(1.0, Distribution::uniform(2).unwrap()).is_err());
        assert!(RestartPerturbation::new(0.0, Distribution::uniform(2).unwrap()).is_err());
    }

    #[test]
    fn wsr_restart_at_first_state() {
        let p = winning_streak_reversal(4).unwrap();
        let pert = RestartPerturbation::new(0.25, Distribution::point(4, 0).unwrap()).unwrap();
        let r = restart_matrix(&p, &pert).unwrap();
        assert_eq!(r.row(1), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(r.row(0), &[0.625, 0.1875, 0.09375, 0.09375]);
    }

    #[test]
    fn restart_at_pi_keeps_pi() {
        let p = winning_streak_reversal(6).unwrap();
        let pi = wsr_stationary(6).unwrap();
        let pert = RestartPerturbation::new(0.3, pi.clone()).unwrap();
        let solved = stationary(&restart_matrix(&p, &pert).unwrap(), STATIONARY_TOL).unwrap();
        assert!(l1(solved.probs(), pi.probs()) < 1e-12);
        let series = restart_stationary_series(&p, &pert, 1e-13).unwrap();
        assert!(l1(series.probs(), pi.probs()) < 1e-12);
    }

    #[test]
    fn radius_examples() {
        let p = winning_streak_reversal(4).unwrap();
        assert_eq!(radius(&p, &p).unwrap(), 0.0);
        let pert = RestartPerturbation::new(0.3, Distribution::point(4, 3).unwrap()).unwrap();
        let r = radius(&p, &restart_matrix(&p, &pert).unwrap()).unwrap();
        // Rows 2 and 3 are point masses away from state 4: they move by 0.3.
        assert!((r - 0.3).abs() < 1e-15);
    }

    #[test]
    fn series_two_state_by_hand() {
        // sigma P^t = (1/2, 1/2) for t >= 1, so the sum is
        // 1/2 e_1 + 1/2 (1/2, 1/2) = (3/4, 1/4).
        let p = StochasticMatrix::from_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let pert = RestartPerturbation::new(0.5, Distribution::point(2, 0).unwrap()).unwrap();
        let s = restart_stationary_series(&p, &pert, 1e-14).unwrap();
        assert!(l1(s.probs(), &[0.75, 0.25]) < 1e-13);
        let d = stationary(&restart_matrix(&p, &pert).unwrap(), STATIONARY_TOL).unwrap();
        assert!(l1(d.probs(), &[0.75, 0.25]) < 1e-14);
        assert!(restart_stationary_series(&p, &pert, 0.0).is_err());
    }

    #[test]
    fn series_matches_solve_near_one() {
        let p = winning_streak_reversal(7).unwrap();
        let pert = RestartPerturbation::new(0.99, Distribution::point(7, 6).unwrap()).unwrap();
        let s = restart_stationary_series(&p, &pert, 1e-12).unwrap();
        let d = stationary(&restart_matrix(&p, &pert).unwrap(), STATIONARY_TOL).unwrap();
        assert!(l1(s.probs(), d.probs()) <= 1e-10);
    }

    #[test]
    fn error_zero_for_identical_chains() {
        let p = winning_streak_reversal(5).unwrap();
        assert!(perturbation_error(&p, &p).unwrap() < 1e-14);
    }
}
