//! Upper and lower bounds on the perturbation error in terms of the
//! unperturbed chain's distance curve and hitting times.

use serde::Serialize;

use crate::chain::{stationary, total_variation, Distribution, StochasticMatrix, STATIONARY_TOL};
use crate::error::{Error, Result};
use crate::mixing::hitting::{hitting_profile, t_hit_with_limit, HittingTimeCertificate, SearchMode, BRUTE_FORCE_LIMIT};
use crate::mixing::profile::{distance_profile, DistanceEvolver, MixingProfile};
use crate::perturbation::restart::{radius, restart_matrix, RestartPerturbation};

/// `min_t [1 - (1 - alpha)^t + d(t)]` and its smallest minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperBound {
    pub bound: f64,
    pub argmin_t: usize,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", alpha, "must lie in (0, 1)"))
    }
}

/// The coupling bound on `||pi - pi~||` over every `P~` within row distance
/// `alpha` of `P`, minimized over `t <= t_max`.
pub fn upper_bound(
    p: &StochasticMatrix,
    pi: &Distribution,
    alpha: f64,
    t_max: usize,
) -> Result<UpperBound> {
    check_alpha(alpha)?;
    upper_bound_from_profile(&distance_profile(p, pi, t_max)?, alpha)
}

pub fn upper_bound_from_profile(profile: &MixingProfile, alpha: f64) -> Result<UpperBound> {
    check_alpha(alpha)?;
    let mut best = UpperBound {
        bound: f64::INFINITY,
        argmin_t: 0,
    };
    let mut keep = 1.0;
    for (t, &d) in profile.d().iter().enumerate() {
        let v = 1.0 - keep + d;
        if v < best.bound {
            best = UpperBound { bound: v, argmin_t: t };
        }
        keep *= 1.0 - alpha;
    }
    Ok(best)
}

/// Knobs shared by the report builders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundOptions {
    /// The `eps` in the reported `alpha * t_mix(eps)`.
    pub eps: f64,
    /// Cap on profile length and hitting-time search.
    pub t_cap: usize,
    /// How the hitting-time witness is found. Any witness gives a sound
    /// lower bound once its defining properties are verified, which is done
    /// for every mode.
    pub witness: SearchMode,
    pub brute_force_limit: usize,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            eps: 0.25,
            t_cap: 100_000,
            witness: SearchMode::Auto,
            brute_force_limit: BRUTE_FORCE_LIMIT,
        }
    }
}

/// One row of a perturbation study.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationReport {
    pub n: usize,
    pub alpha: f64,
    pub eps: f64,
    pub t_mix: usize,
    pub alpha_tmix: f64,
    /// `max_i ||e_i P - e_i P~||`.
    pub radius: f64,
    /// `||pi - pi~||`.
    pub error: f64,
    pub upper_bound: f64,
    pub upper_argmin_t: usize,
    /// Certified lower bound, when a hitting-time witness was used.
    pub lower_bound: Option<f64>,
    /// `pi(A) - pi~(A)` for the witness set.
    pub set_gap: Option<f64>,
    pub certificate: Option<HittingTimeCertificate>,
}

/// Distance curve long enough to read `t_mix(eps)` and to be sure the
/// coupling bound's minimum has been seen: once `1 - (1 - alpha)^t` alone
/// reaches the best value so far, no later `t` can do better.
fn bound_profile(
    p: &StochasticMatrix,
    pi: &Distribution,
    alpha: f64,
    eps: f64,
    t_cap: usize,
) -> Result<MixingProfile> {
    let starts: Vec<usize> = (0..p.n()).collect();
    let mut ev = DistanceEvolver::new(p, pi, &starts)?;
    let mut d = vec![ev.distance()];
    let mut best = d[0];
    let mut keep = 1.0;
    loop {
        let t = ev.t();
        best = best.min(1.0 - keep + d[t]);
        if d[t] <= eps && 1.0 - keep >= best {
            break;
        }
        if t >= t_cap {
            return Err(Error::CapExceeded { cap: t_cap });
        }
        ev.advance();
        keep *= 1.0 - alpha;
        d.push(ev.distance());
    }
    MixingProfile::from_values(d, true)
}

/// Builds the report for an arbitrary `P~`. The upper bound is the one for
/// the ball of radius `alpha`, so it only applies when `radius <= alpha`.
pub fn perturbation_report(
    p: &StochasticMatrix,
    pi: &Distribution,
    ptilde: &StochasticMatrix,
    alpha: f64,
    opts: &BoundOptions,
) -> Result<PerturbationReport> {
    check_alpha(alpha)?;
    let profile = bound_profile(p, pi, alpha, opts.eps, opts.t_cap)?;
    let t_mix = profile.mixing_time(opts.eps)?;
    let ub = upper_bound_from_profile(&profile, alpha)?;
    let pi_tilde = stationary(ptilde, STATIONARY_TOL)?;
    Ok(PerturbationReport {
        n: p.n(),
        alpha,
        eps: opts.eps,
        t_mix,
        alpha_tmix: alpha * t_mix as f64,
        radius: radius(p, ptilde)?,
        error: total_variation(pi, &pi_tilde)?,
        upper_bound: ub.bound,
        upper_argmin_t: ub.argmin_t,
        lower_bound: None,
        set_gap: None,
        certificate: None,
    })
}

/// The restart from a hard-to-leave state together with its certified
/// error lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversarialRestart {
    pub pert: RestartPerturbation,
    /// `1 - 3 delta - exp(-alpha t_n)`; may be vacuous (nonpositive).
    pub certified_lower: f64,
    pub report: PerturbationReport,
}

/// Restarts at the witness state `x` of `t_hit(1 - delta, 1 - 2 delta)`.
///
/// With `t_n` that hitting time, the witness set `A` satisfies
/// `pi(A) >= 1 - delta` and `P_x(T_A > t_n - 1) > 1 - 2 delta`, which forces
/// `||pi - pi~|| >= pi(A) - pi~(A) > 1 - 3 delta - exp(-alpha t_n)`. Both
/// witness properties are re-verified here, so the bound is only reported
/// when they hold.
pub fn adversarial_restart(
    p: &StochasticMatrix,
    pi: &Distribution,
    delta: f64,
    alpha: f64,
    opts: &BoundOptions,
) -> Result<AdversarialRestart> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::param("delta", delta, "must lie in (0, 1/2)"));
    }
    check_alpha(alpha)?;
    let n = p.n();
    let cert = t_hit_with_limit(
        p,
        pi,
        delta,
        1.0 - 2.0 * delta,
        opts.witness,
        opts.t_cap,
        opts.brute_force_limit,
    )?;
    let pert = RestartPerturbation::new(alpha, Distribution::point(n, cert.witness_x)?)?;
    let ptilde = restart_matrix(p, &pert)?;
    let mut report = perturbation_report(p, pi, &ptilde, alpha, opts)?;
    let t_n = cert.t_hit;
    let certified_lower = 1.0 - 3.0 * delta - (-alpha * t_n as f64).exp();

    let verified = t_n >= 1
        && pi.mass(&cert.witness_a) >= 1.0 - delta
        && hitting_profile(p, cert.witness_x, &cert.witness_a, t_n - 1)?[t_n - 1]
            > 1.0 - 2.0 * delta;
    if verified {
        let pi_tilde = stationary(&ptilde, STATIONARY_TOL)?;
        report.set_gap = Some(pi.mass(&cert.witness_a) - pi_tilde.mass(&cert.witness_a));
        report.lower_bound = Some(certified_lower);
    }
    report.certificate = Some(cert);
    Ok(AdversarialRestart {
        pert,
        certified_lower,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::lazify;
    use crate::families::{winning_streak_reversal, wsr_stationary};

    #[test]
    fn wsr8_small_alpha_bound() {
        let p = winning_streak_reversal(8).unwrap();
        let pi = wsr_stationary(8).unwrap();
        let ub = upper_bound(&p, &pi, 0.01, 7).unwrap();
        assert_eq!(ub.argmin_t, 7);
        assert!((ub.bound - (1.0 - 0.99f64.powi(7))).abs() < 1e-14);
        let tiny = upper_bound(&p, &pi, 1e-9, 7).unwrap();
        assert!(tiny.bound < 1e-7);
    }

    #[test]
    fn bound_never_exceeds_d0() {
        let p = winning_streak_reversal(6).unwrap();
        let pi = wsr_stationary(6).unwrap();
        let ub = upper_bound(&p, &pi, 0.9, 20).unwrap();
        assert!(ub.bound <= 1.0 - pi.min());
    }

    #[test]
    fn wsr12_adversarial_certificate() {
        let p = winning_streak_reversal(12).unwrap();
        let pi = wsr_stationary(12).unwrap();
        let adv = adversarial_restart(&p, &pi, 0.1, 0.5, &BoundOptions::default()).unwrap();
        let cert = adv.report.certificate.as_ref().unwrap();
        assert!(cert.exhaustive);
        let expected = 0.7 - (-0.5 * cert.t_hit as f64).exp();
        assert!((adv.certified_lower - expected).abs() < 1e-15);
        let r = &adv.report;
        assert!(r.error >= r.set_gap.unwrap() - 1e-12);
        assert!(r.set_gap.unwrap() > adv.certified_lower);
        assert!(r.error <= r.upper_bound + 1e-12);
        assert!(r.radius <= 0.5 + 1e-15);
    }

    #[test]
    fn vacuous_lower_bound_still_returns_construction() {
        let p = lazify(&winning_streak_reversal(8).unwrap());
        let pi = wsr_stationary(8).unwrap();
        let adv = adversarial_restart(&p, &pi, 0.4, 0.3, &BoundOptions::default()).unwrap();
        assert!(adv.certified_lower <= 0.0);
        assert!(adv.report.error > 0.0);
    }

    #[test]
    fn bound_profile_reaches_minimum() {
        let p = winning_streak_reversal(10).unwrap();
        let pi = wsr_stationary(10).unwrap();
        let prof = bound_profile(&p, &pi, 0.05, 0.25, 1000).unwrap();
        let long = distance_profile(&p, &pi, 200).unwrap();
        let a = upper_bound_from_profile(&prof, 0.05).unwrap();
        let b = upper_bound_from_profile(&long, 0.05).unwrap();
        assert_eq!(a, b);
    }
}
