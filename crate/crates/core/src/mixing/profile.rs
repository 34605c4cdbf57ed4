//! The worst-case distance curve `d(t) = max_i ||e_i P^t - pi||` and the
//! mixing times read off it.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{tv_slices, Distribution, StochasticMatrix};
use crate::error::{Error, Result};

/// Below this many tracked rows a step is cheaper than a rayon dispatch.
const PAR_ROWS: usize = 48;

/// `d(t)` for `t = 0..=t_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingProfile {
    d: Vec<f64>,
    t_max: usize,
    /// True when the maximum ranges over every starting state.
    exact: bool,
}

impl MixingProfile {
    /// Wraps precomputed values, which must lie in `[0, 1]`.
    pub fn from_values(d: Vec<f64>, exact: bool) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(&bad) = d.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::param("d", bad, "distances must lie in [0, 1]"));
        }
        Ok(Self {
            t_max: d.len() - 1,
            d,
            exact,
        })
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn exact(&self) -> bool {
        self.exact
    }

    /// `d(t)`, or `None` past the computed horizon.
    pub fn get(&self, t: usize) -> Option<f64> {
        self.d.get(t).copied()
    }

    pub fn last(&self) -> f64 {
        self.d[self.t_max]
    }

    /// `min { t : d(t) <= eps }`.
    pub fn mixing_time(&self, eps: f64) -> Result<usize> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::param("eps", eps, "must lie in (0, 1)"));
        }
        self.d
            .iter()
            .position(|&v| v <= eps)
            .ok_or(Error::ProfileTooShort {
                t_max: self.t_max,
                last: self.last(),
                eps,
            })
    }

    /// CSV with columns `t,d_t`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,d_t\n");
        for (t, v) in self.d.iter().enumerate() {
            let _ = writeln!(out, "{t},{v:?}");
        }
        out
    }
}

/// Free-function form of [`MixingProfile::mixing_time`].
pub fn mixing_time(profile: &MixingProfile, eps: f64) -> Result<usize> {
    profile.mixing_time(eps)
}

/// Steps the distributions `e_i P^t` of a set of starting states forward in
/// lockstep.
#[derive(Debug, Clone)]
pub struct DistanceEvolver<'a> {
    p: &'a StochasticMatrix,
    pi: &'a [f64],
    rows: Vec<Vec<f64>>,
    scratch: Vec<Vec<f64>>,
    t: usize,
}

impl<'a> DistanceEvolver<'a> {
    pub fn new(p: &'a StochasticMatrix, pi: &'a Distribution, starts: &[usize]) -> Result<Self> {
        let n = p.n();
        if pi.n() != n {
            return Err(Error::DimensionMismatch {
                left: pi.n(),
                right: n,
            });
        }
        if starts.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut rows = Vec::with_capacity(starts.len());
        for &s in starts {
            rows.push(Distribution::point(n, s)?.into_vec());
        }
        Ok(Self {
            p,
            pi: pi.probs(),
            scratch: vec![vec![0.0; n]; rows.len()],
            rows,
            t: 0,
        })
    }

    /// Current time.
    pub fn t(&self) -> usize {
        self.t
    }

    /// The tracked distributions at the current time.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Worst distance to `pi` at the current time.
    pub fn distance(&self) -> f64 {
        let pi = self.pi;
        let worst = if self.rows.len() >= PAR_ROWS {
            self.rows
                .par_iter()
                .map(|r| tv_slices(r, pi))
                .reduce(|| 0.0, f64::max)
        } else {
            self.rows.iter().map(|r| tv_slices(r, pi)).fold(0.0, f64::max)
        };
        worst.min(1.0)
    }

    /// Largest pairwise distance `max_{i,j} ||e_i P^t - e_j P^t||` over the
    /// tracked rows.
    pub fn pairwise_distance(&self) -> f64 {
        let rows = &self.rows;
        (0..rows.len())
            .into_par_iter()
            .map(|i| {
                rows[i + 1..]
                    .iter()
                    .map(|r| tv_slices(&rows[i], r))
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
            .min(1.0)
    }

    /// Advances one step.
    pub fn advance(&mut self) {
        let p = self.p;
        if self.rows.len() >= PAR_ROWS {
            self.rows
                .par_iter()
                .zip(self.scratch.par_iter_mut())
                .for_each(|(r, out)| p.left_multiply_into(r, out));
        } else {
            for (r, out) in self.rows.iter().zip(self.scratch.iter_mut()) {
                p.left_multiply_into(r, out);
            }
        }
        std::mem::swap(&mut self.rows, &mut self.scratch);
        self.t += 1;
    }
}

fn all_states(n: usize) -> Vec<usize> {
    (0..n).collect()
}

/// `d(t)` for `t = 0..=t_max`, maximizing over every starting state.
pub fn distance_profile(
    p: &StochasticMatrix,
    pi: &Distribution,
    t_max: usize,
) -> Result<MixingProfile> {
    let mut profile = distance_profile_from(p, pi, &all_states(p.n()), t_max)?;
    profile.exact = true;
    Ok(profile)
}

/// Like [`distance_profile`] but maximizing only over `starts`. The result
/// is a lower envelope of the true curve and is marked inexact.
pub fn distance_profile_from(
    p: &StochasticMatrix,
    pi: &Distribution,
    starts: &[usize],
    t_max: usize,
) -> Result<MixingProfile> {
    let mut ev = DistanceEvolver::new(p, pi, starts)?;
    let mut d = Vec::with_capacity(t_max + 1);
    d.push(ev.distance());
    for _ in 0..t_max {
        ev.advance();
        d.push(ev.distance());
    }
    Ok(MixingProfile {
        d,
        t_max,
        exact: starts.len() == p.n(),
    })
}

/// Computes `d(t)` until it first drops to `target` or below, failing once
/// `t_cap` steps have not sufficed.
pub fn profile_until(
    p: &StochasticMatrix,
    pi: &Distribution,
    target: f64,
    t_cap: usize,
) -> Result<MixingProfile> {
    let mut ev = DistanceEvolver::new(p, pi, &all_states(p.n()))?;
    let mut d = vec![ev.distance()];
    while d[ev.t()] > target {
        if ev.t() >= t_cap {
            return Err(Error::CapExceeded { cap: t_cap });
        }
        ev.advance();
        d.push(ev.distance());
    }
    Ok(MixingProfile {
        t_max: d.len() - 1,
        d,
        exact: true,
    })
}

/// `max_{i,j} ||e_i P^t - e_j P^t||` for `t = 0..=t_max`.
pub fn pairwise_profile(p: &StochasticMatrix, t_max: usize) -> Result<Vec<f64>> {
    let uniform = Distribution::uniform(p.n())?;
    let mut ev = DistanceEvolver::new(p, &uniform, &all_states(p.n()))?;
    let mut out = vec![ev.pairwise_distance()];
    for _ in 0..t_max {
        ev.advance();
        out.push(ev.pairwise_distance());
    }
    Ok(out)
}

/// `t_mix(eps) / t_mix(1 - eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffRatio {
    pub ratio: f64,
    pub t_mix_eps: usize,
    pub t_mix_one_minus_eps: usize,
    /// Set when `t_mix(1 - eps) = 0`, in which case `ratio` is `+inf`.
    pub infinite: bool,
}

pub fn cutoff_ratio(
    p: &StochasticMatrix,
    pi: &Distribution,
    eps: f64,
    t_max: usize,
) -> Result<CutoffRatio> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::param("eps", eps, "must lie in (0, 1/2)"));
    }
    let profile = distance_profile(p, pi, t_max)?;
    let t_eps = profile.mixing_time(eps)?;
    let t_late = profile.mixing_time(1.0 - eps)?;
    let infinite = t_late == 0;
    Ok(CutoffRatio {
        ratio: if infinite {
            f64::INFINITY
        } else {
            t_eps as f64 / t_late as f64
        },
        t_mix_eps: t_eps,
        t_mix_one_minus_eps: t_late,
        infinite,
    })
}
