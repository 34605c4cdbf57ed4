//! Perturbation error across a family of chains as `n` grows, with the
//! restart probability tied to `n` or to the mixing time.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::Distribution;
use crate::error::{Error, Result};
use crate::families::Family;
use crate::mixing::profile::profile_until;
use crate::perturbation::bounds::{adversarial_restart, perturbation_report, BoundOptions, PerturbationReport};
use crate::perturbation::restart::{restart_matrix, RestartPerturbation};

/// How `alpha_n` is chosen.
#[derive(Debug, Clone, Copy)]
pub enum AlphaRule {
    /// `c / t_mix(eps)`, so that `alpha t_mix` stays at `c`.
    COverTmix(f64),
    /// `n^-gamma`.
    Power(f64),
    Const(f64),
    /// Arbitrary function of `(n, t_mix(eps))`.
    Custom(fn(usize, usize) -> f64),
}

impl AlphaRule {
    pub fn alpha(&self, n: usize, t_mix: usize) -> Result<f64> {
        let a = match *self {
            AlphaRule::COverTmix(c) => {
                if t_mix == 0 {
                    return Err(Error::param("t_mix", 0.0, "c/t_mix needs a positive mixing time"));
                }
                c / t_mix as f64
            }
            AlphaRule::Power(g) => (n as f64).powf(-g),
            AlphaRule::Const(a) => a,
            AlphaRule::Custom(f) => f(n, t_mix),
        };
        if a > 0.0 && a < 1.0 {
            Ok(a)
        } else {
            Err(Error::param("alpha", a, "rule produced a value outside (0, 1)"))
        }
    }
}

impl fmt::Display for AlphaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaRule::COverTmix(c) => write!(f, "c-over-tmix:{c}"),
            AlphaRule::Power(g) => write!(f, "power:{g}"),
            AlphaRule::Const(a) => write!(f, "const:{a}"),
            AlphaRule::Custom(_) => f.write_str("custom"),
        }
    }
}

impl FromStr for AlphaRule {
    type Err = String;

    /// Parses `c-over-tmix:<c>`, `power:<gamma>` or `const:<a>`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| format!("expected <rule>:<value>, got {s:?}"))?;
        let v: f64 = value
            .parse()
            .map_err(|_| format!("not a number: {value:?}"))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(format!("rule parameter must be positive, got {v}"));
        }
        match kind {
            "c-over-tmix" => Ok(AlphaRule::COverTmix(v)),
            "power" => Ok(AlphaRule::Power(v)),
            "const" if v < 1.0 => Ok(AlphaRule::Const(v)),
            "const" => Err(format!("constant alpha must lie in (0, 1), got {v}")),
            _ => Err(format!("unknown alpha rule {kind:?}")),
        }
    }
}

/// Which restart distribution each row of a sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RestartKind {
    /// Restart at the hitting-time witness for `t_hit(1 - delta, 1 - 2 delta)`.
    Adversarial { delta: f64 },
    Uniform,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: Family,
    pub n_list: Vec<usize>,
    pub rule: AlphaRule,
    pub restart: RestartKind,
    pub opts: BoundOptions,
}

/// One report per `n`, in the order of `n_list`.
pub fn trichotomy_sweep(cfg: &SweepConfig) -> Result<Vec<PerturbationReport>> {
    if cfg.n_list.is_empty() {
        return Err(Error::EmptySet);
    }
    cfg.n_list.par_iter().map(|&n| sweep_row(cfg, n)).collect()
}

fn sweep_row(cfg: &SweepConfig, n: usize) -> Result<PerturbationReport> {
    let p = cfg.family.build(n)?;
    let pi = cfg.family.stationary(n)?;
    let eps = cfg.opts.eps;
    let t_mix = profile_until(&p, &pi, eps, cfg.opts.t_cap)?.mixing_time(eps)?;
    let alpha = cfg.rule.alpha(n, t_mix)?;
    match cfg.restart {
        RestartKind::Adversarial { delta } => {
            Ok(adversarial_restart(&p, &pi, delta, alpha, &cfg.opts)?.report)
        }
        RestartKind::Uniform => {
            let pert = RestartPerturbation::new(alpha, Distribution::uniform(n)?)?;
            perturbation_report(&p, &pi, &restart_matrix(&p, &pert)?, alpha, &cfg.opts)
        }
    }
}

/// CSV with columns `n,alpha,alpha_tmix,error,upper_bound,lower_bound,t_hit,witness_x`.
/// Missing values are left empty; `witness_x` is 1-based.
pub fn sweep_csv(reports: &[PerturbationReport]) -> String {
    let mut out = String::from("n,alpha,alpha_tmix,error,upper_bound,lower_bound,t_hit,witness_x\n");
    for r in reports {
        let lower = r.lower_bound.map(|v| format!("{v:?}")).unwrap_or_default();
        let (t_hit, x) = match &r.certificate {
            Some(c) => (c.t_hit.to_string(), (c.witness_x + 1).to_string()),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{},{:?},{:?},{:?},{:?},{},{},{}",
            r.n, r.alpha, r.alpha_tmix, r.error, r.upper_bound, lower, t_hit, x
        );
    }
    out
}
