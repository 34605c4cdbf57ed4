//! Checks of two mixing-time inequalities: the hitting-time bound on
//! `t_mix` for lazy reversible chains, and submultiplicativity of `d`.

use serde::Serialize;

use crate::chain::{Distribution, StochasticMatrix, BALANCE_TOL};
use crate::error::{Error, Result};
use crate::mixing::hitting::{t_hit, SearchMode};
use crate::mixing::profile::{distance_profile, profile_until};
use crate::mixing::spectrum::spectrum;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasuReport {
    /// `t_mix(min(eta1 + eta2, 1))`.
    pub lhs: usize,
    /// `t_hit(1 - eta3, eta1) + ceil((t_rel / 2) * max(log(2 (1-eta1)^2 / (eta1 eta2 eta3)), 0))`.
    pub rhs: usize,
    pub holds: bool,
    pub t_hit: usize,
    pub t_rel: f64,
    /// False when `t_hit` came from the greedy search. That value is a lower
    /// bound, so `holds` remains a valid confirmation.
    pub exhaustive: bool,
}

/// Compares `t_mix((eta1 + eta2) ^ 1)` against the hitting-time bound for a
/// lazy reversible chain. `t_max` caps both the profile and the hitting-time
/// search.
pub fn basu_check(
    p: &StochasticMatrix,
    pi: &Distribution,
    eta1: f64,
    eta2: f64,
    eta3: f64,
    t_max: usize,
) -> Result<BasuReport> {
    for (name, v) in [("eta1", eta1), ("eta2", eta2), ("eta3", eta3)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::param(name, v, "must lie in (0, 1)"));
        }
    }
    let min_diagonal = p.min_diagonal();
    if min_diagonal < 0.5 - BALANCE_TOL {
        return Err(Error::NotLazy { min_diagonal });
    }
    let spec = spectrum(p, pi)?;
    let target = eta1 + eta2;
    // d(0) < 1, so t_mix(1) = 0.
    let lhs = if target >= 1.0 {
        0
    } else {
        profile_until(p, pi, target, t_max)?.mixing_time(target)?
    };
    let cert = t_hit(p, pi, eta3, eta1, SearchMode::Auto, t_max)?;
    let log_term = (2.0 * (1.0 - eta1).powi(2) / (eta1 * eta2 * eta3)).ln().max(0.0);
    let spectral = (spec.t_rel / 2.0 * log_term).ceil();
    let rhs = if spectral.is_finite() {
        cert.t_hit + spectral as usize
    } else {
        usize::MAX
    };
    Ok(BasuReport {
        lhs,
        rhs,
        holds: lhs <= rhs,
        t_hit: cert.t_hit,
        t_rel: spec.t_rel,
        exhaustive: cert.exhaustive,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubmultiplicativityRow {
    pub k: usize,
    pub t: usize,
    pub d: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubmultiplicativityReport {
    pub eps: f64,
    pub t_mix: usize,
    pub rows: Vec<SubmultiplicativityRow>,
    pub holds: bool,
}

/// Verifies `d(k t_mix(eps)) <= (2 eps)^k` for `k = 1..=k_max`.
///
/// `t_cap` bounds the search for `t_mix(eps)`.
pub fn submultiplicativity_check(
    p: &StochasticMatrix,
    pi: &Distribution,
    eps: f64,
    k_max: usize,
    t_cap: usize,
) -> Result<SubmultiplicativityReport> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::param("eps", eps, "must lie in (0, 1/2)"));
    }
    let t_mix = profile_until(p, pi, eps, t_cap)?.mixing_time(eps)?;
    let profile = distance_profile(p, pi, k_max * t_mix)?;
    let rows: Vec<SubmultiplicativityRow> = (1..=k_max)
        .map(|k| {
            let t = k * t_mix;
            let d = profile.d()[t];
            let bound = (2.0 * eps).powi(k as i32);
            SubmultiplicativityRow {
                k,
                t,
                d,
                bound,
                holds: d <= bound,
            }
        })
        .collect();
    Ok(SubmultiplicativityReport {
        eps,
        t_mix,
        holds: rows.iter().all(|r| r.holds),
        rows,
    })
}
