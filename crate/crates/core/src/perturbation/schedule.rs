//! Restart schedules indexed by `(n, eps)`: the bound obtained from
//! `alpha = 1 / (2 t_mix(1 - eps))`, and the finite-grid check that a
//! schedule scales like the mixing times.

use serde::Serialize;

use crate::chain::{Distribution, StochasticMatrix};
use crate::error::{Error, Result};
use crate::mixing::profile::profile_until;
use crate::perturbation::restart::{perturbation_error_from, restart_matrix, RestartPerturbation};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition61Report {
    pub eps: f64,
    /// `t_mix(1 - eps)`.
    pub t_mix_late: usize,
    /// `1 / (2 t_mix(1 - eps))`.
    pub alpha: f64,
    /// `1 - eps (1 - alpha)^{t_mix(1 - eps)}`.
    pub bound: f64,
    /// Whether `bound <= 1 - eps / 2`.
    pub within_half_eps: bool,
    /// `alpha sum_t (1 - alpha)^t d(t)`, with the tail beyond the computed
    /// profile bounded by `(1 - alpha)^T d(T)`.
    pub convexity_series: f64,
    /// Exact errors of the restarts tested at this `alpha`.
    pub errors: Vec<f64>,
    /// Every error is at most the series and the series at most the bound.
    pub all_within: bool,
}

/// Slack for comparisons between quantities computed by different routes.
const CMP_TOL: f64 = 1e-12;

/// The bound `1 - eps (1 - alpha)^{t_mix(1 - eps)}` at
/// `alpha = 1 / (2 t_mix(1 - eps))`, checked against the restarts at each
/// `sigma` in `sigmas`.
pub fn condition61_check(
    p: &StochasticMatrix,
    pi: &Distribution,
    eps: f64,
    sigmas: &[Distribution],
    t_cap: usize,
) -> Result<Condition61Report> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::param("eps", eps, "must lie in (0, 1/2)"));
    }
    let late = profile_until(p, pi, 1.0 - eps, t_cap)?;
    let t_mix_late = late.mixing_time(1.0 - eps)?;
    if t_mix_late == 0 {
        return Err(Error::param(
            "eps",
            eps,
            "t_mix(1 - eps) = 0, so alpha = 1/(2 t_mix(1 - eps)) is undefined",
        ));
    }
    let alpha = 1.0 / (2.0 * t_mix_late as f64);
    let bound = 1.0 - eps * (1.0 - alpha).powi(t_mix_late as i32);

    // Run the curve down far enough that the truncated tail is negligible.
    let full = profile_until(p, pi, 1e-13, t_cap)?;
    let mut series = 0.0;
    let mut weight = 1.0;
    for &d in full.d() {
        series += alpha * weight * d;
        weight *= 1.0 - alpha;
    }
    series += weight * full.last();

    let errors = sigmas
        .iter()
        .map(|sigma| {
            let pert = RestartPerturbation::new(alpha, sigma.clone())?;
            perturbation_error_from(pi, &restart_matrix(p, &pert)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    let all_within =
        series <= bound + CMP_TOL && errors.iter().all(|&e| e <= series + CMP_TOL);
    Ok(Condition61Report {
        eps,
        t_mix_late,
        alpha,
        bound,
        within_half_eps: bound <= 1.0 - eps / 2.0,
        convexity_series: series,
        errors,
        all_within,
    })
}

/// Restart probabilities `alpha[n][eps]` on a finite grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationSchedule {
    n_list: Vec<usize>,
    eps_list: Vec<f64>,
    alpha: Vec<Vec<f64>>,
}

impl PerturbationSchedule {
    pub fn new(n_list: Vec<usize>, eps_list: Vec<f64>, alpha: Vec<Vec<f64>>) -> Result<Self> {
        if alpha.len() != n_list.len() {
            return Err(Error::GridMismatch(format!(
                "{} rows of alpha for {} values of n",
                alpha.len(),
                n_list.len()
            )));
        }
        for row in &alpha {
            if row.len() != eps_list.len() {
                return Err(Error::GridMismatch(format!(
                    "{} alphas for {} values of eps",
                    row.len(),
                    eps_list.len()
                )));
            }
            if let Some(&a) = row.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
                return Err(Error::param("alpha", a, "must lie in (0, 1)"));
            }
        }
        if let Some(&e) = eps_list.iter().find(|e| !(**e > 0.0 && **e < 0.5)) {
            return Err(Error::param("eps", e, "must lie in (0, 1/2)"));
        }
        Ok(Self {
            n_list,
            eps_list,
            alpha,
        })
    }

    /// Builds `alpha[n][eps] = f(i, j)` for grid indices `i`, `j`.
    pub fn from_fn(
        n_list: Vec<usize>,
        eps_list: Vec<f64>,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let alpha = (0..n_list.len())
            .map(|i| (0..eps_list.len()).map(|j| f(i, j)).collect())
            .collect();
        Self::new(n_list, eps_list, alpha)
    }

    pub fn n_list(&self) -> &[usize] {
        &self.n_list
    }

    pub fn eps_list(&self) -> &[f64] {
        &self.eps_list
    }

    pub fn alpha(&self, i: usize, j: usize) -> f64 {
        self.alpha[i][j]
    }
}

/// `t_mix(eps)` and `t_mix(1 - eps)` on the same grid as a schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TmixGrid {
    pub n_list: Vec<usize>,
    pub eps_list: Vec<f64>,
    pub tmix: Vec<Vec<usize>>,
    pub tmix_late: Vec<Vec<usize>>,
}

impl TmixGrid {
    /// Computes the grid from one chain per `n`.
    pub fn compute(
        chains: &[(usize, StochasticMatrix, Distribution)],
        eps_list: &[f64],
        t_cap: usize,
    ) -> Result<Self> {
        let min_eps = eps_list.iter().copied().fold(1.0, f64::min);
        let mut tmix = Vec::with_capacity(chains.len());
        let mut tmix_late = Vec::with_capacity(chains.len());
        for (_, p, pi) in chains {
            let prof = profile_until(p, pi, min_eps, t_cap)?;
            tmix.push(
                eps_list
                    .iter()
                    .map(|&e| prof.mixing_time(e))
                    .collect::<Result<Vec<_>>>()?,
            );
            tmix_late.push(
                eps_list
                    .iter()
                    .map(|&e| prof.mixing_time(1.0 - e))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Ok(Self {
            n_list: chains.iter().map(|c| c.0).collect(),
            eps_list: eps_list.to_vec(),
            tmix,
            tmix_late,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoincidencePair {
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    /// `alpha[n][eps] / alpha[n][delta]`.
    pub ratio: f64,
    /// `t_mix(1 - delta) / t_mix(1 - eps)`.
    pub lower: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoincidenceReport {
    pub pairs: Vec<CoincidencePair>,
    pub holds: bool,
    /// `alpha[n][eps] * t_mix(eps)` per grid cell; the limiting behaviour as
    /// `n` grows can only be read off, not certified.
    pub products: Vec<Vec<f64>>,
}

/// Checks `alpha[n][eps] / alpha[n][delta]` lies in
/// `[t_mix(1 - delta) / t_mix(1 - eps), 1]` for every `n` and `eps >= delta`.
///
/// Comparisons are cross-multiplied with a relative slack of `1e-12`.
pub fn coincidence_check(schedule: &PerturbationSchedule, grid: &TmixGrid) -> Result<CoincidenceReport> {
    if schedule.n_list != grid.n_list || schedule.eps_list != grid.eps_list {
        return Err(Error::GridMismatch(
            "schedule and mixing-time grid index different (n, eps) values".into(),
        ));
    }
    let rel = 1e-12;
    let mut pairs = Vec::new();
    for (i, &n) in schedule.n_list.iter().enumerate() {
        for (j, &eps) in schedule.eps_list.iter().enumerate() {
            for (k, &delta) in schedule.eps_list.iter().enumerate() {
                if eps < delta {
                    continue;
                }
                let (a_eps, a_delta) = (schedule.alpha[i][j], schedule.alpha[i][k]);
                let (late_eps, late_delta) =
                    (grid.tmix_late[i][j] as f64, grid.tmix_late[i][k] as f64);
                let upper_ok = a_eps <= a_delta * (1.0 + rel);
                let lower_ok = a_eps * late_eps >= a_delta * late_delta * (1.0 - rel);
                pairs.push(CoincidencePair {
                    n,
                    eps,
                    delta,
                    ratio: a_eps / a_delta,
                    lower: late_delta / late_eps,
                    holds: upper_ok && lower_ok,
                });
            }
        }
    }
    let products = (0..schedule.n_list.len())
        .map(|i| {
            (0..schedule.eps_list.len())
                .map(|j| schedule.alpha[i][j] * grid.tmix[i][j] as f64)
                .collect()
        })
        .collect();
    Ok(CoincidenceReport {
        holds: pairs.iter().all(|p| p.holds),
        pairs,
        products,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::lazify;
    use crate::families::{cgb_stationary, complete_graph_bijection, winning_streak_reversal, wsr_stationary};

    #[test]
    fn condition61_equality_case() {
        // t_mix(1 - eps) = 1 gives alpha = 1/2 and bound 1 - eps/2.
        let p = complete_graph_bijection(64).unwrap();
        let pi = cgb_stationary(64).unwrap();
        let sigmas: Vec<Distribution> = (0..4).map(|i| Distribution::point(64, i * 9).unwrap()).collect();
        let r = condition61_check(&p, &pi, 0.25, &sigmas, 100_000).unwrap();
        assert_eq!(r.t_mix_late, 1);
        assert_eq!(r.alpha, 0.5);
        assert_eq!(r.bound, 0.875);
        assert!(r.within_half_eps && r.all_within, "{r:?}");
    }

    #[test]
    fn condition61_bound_tends_to_one() {
        let p = lazify(&winning_streak_reversal(10).unwrap());
        let pi = wsr_stationary(10).unwrap();
        let a = condition61_check(&p, &pi, 0.2, &[], 10_000).unwrap();
        let b = condition61_check(&p, &pi, 0.01, &[], 10_000).unwrap();
        assert!(b.bound > a.bound && b.bound > 0.99);
    }

    fn cgb_grid(eps_list: &[f64]) -> TmixGrid {
        let chains: Vec<_> = [8, 12, 16]
            .iter()
            .map(|&n| (n, complete_graph_bijection(n).unwrap(), cgb_stationary(n).unwrap()))
            .collect();
        TmixGrid::compute(&chains, eps_list, 100_000).unwrap()
    }

    #[test]
    fn constant_and_matched_schedules() {
        let eps_list = vec![0.15, 0.25, 0.4];
        let grid = cgb_grid(&eps_list);
        let constant = PerturbationSchedule::from_fn(vec![8, 12, 16], eps_list.clone(), |_, _| 0.1).unwrap();
        assert!(coincidence_check(&constant, &grid).unwrap().holds);

        let matched = PerturbationSchedule::from_fn(vec![8, 12, 16], eps_list.clone(), |i, j| {
            1.0 / (2.0 * grid.tmix_late[i][j] as f64)
        })
        .unwrap();
        let r = coincidence_check(&matched, &grid).unwrap();
        assert!(r.holds);
        for pair in &r.pairs {
            assert!((pair.ratio - pair.lower).abs() < 1e-12);
            if pair.eps == pair.delta {
                assert_eq!(pair.ratio, 1.0);
            }
        }
    }

    #[test]
    fn mismatched_grids() {
        let grid = cgb_grid(&[0.1, 0.2]);
        let s = PerturbationSchedule::from_fn(vec![8, 12, 16], vec![0.1, 0.3], |_, _| 0.1).unwrap();
        assert!(matches!(coincidence_check(&s, &grid), Err(Error::GridMismatch(_))));
        assert!(PerturbationSchedule::new(vec![8], vec![0.1], vec![vec![1.5]]).is_err());
    }
}
