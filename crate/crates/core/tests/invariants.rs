//! Property tests over randomly generated chains and distributions.

use chainmix::chain::{detailed_balance_residual, stationarity_residual};
use chainmix::coupling::trial_rng;
use chainmix::mixing::pairwise_profile;
use chainmix::perturbation::restart_stationary_series;
use chainmix::random::{
    random_ball_perturbation, random_distribution, random_irreducible_chain,
    random_lazy_reversible,
};
use chainmix::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn chain(seed: u64, n: usize) -> StochasticMatrix {
    random_irreducible_chain(n, 0.3, &mut trial_rng(seed, 1)).unwrap()
}

fn dist(seed: u64, stream: u64, n: usize) -> Distribution {
    random_distribution(n, &mut trial_rng(seed, stream)).unwrap()
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tv_is_a_metric(seed in any::<u64>(), n in 1usize..40) {
        let (a, b, c) = (dist(seed, 1, n), dist(seed, 2, n), dist(seed, 3, n));
        let ab = total_variation(&a, &b).unwrap();
        prop_assert!((ab - total_variation(&b, &a).unwrap()).abs() <= 1e-15);
        prop_assert!(total_variation(&a, &a).unwrap() == 0.0);
        prop_assert!((0.0..=1.0).contains(&ab));
        let ac = total_variation(&a, &c).unwrap();
        let cb = total_variation(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-15);
    }

    #[test]
    fn tv_is_convex(seed in any::<u64>(), n in 1usize..40, gamma in 0.001f64..0.999) {
        let (mu, nu, eta) = (dist(seed, 1, n), dist(seed, 2, n), dist(seed, 3, n));
        let mix: Vec<f64> = mu.probs().iter().zip(nu.probs()).map(|(a, b)| gamma * a + (1.0 - gamma) * b).collect();
        let mix = Distribution::from_vec(mix).unwrap();
        let lhs = total_variation(&mix, &eta).unwrap();
        let rhs = gamma * total_variation(&mu, &eta).unwrap() + (1.0 - gamma) * total_variation(&nu, &eta).unwrap();
        prop_assert!(lhs <= rhs + 1e-15);
    }

    #[test]
    fn stationary_residual_small(seed in any::<u64>(), n in 1usize..=200) {
        let p = chain(seed, n);
        let pi = stationary(&p, STATIONARY_TOL).unwrap();
        prop_assert!(stationarity_residual(&p, pi.probs()) <= 1e-10);
    }

    #[test]
    fn step_composes(seed in any::<u64>(), n in 1usize..30, s in 0usize..20, t in 0usize..20) {
        let p = chain(seed, n);
        let mu = dist(seed, 2, n);
        let direct = step(&mu, &p, s + t).unwrap();
        let split = step(&step(&mu, &p, s).unwrap(), &p, t).unwrap();
        prop_assert!(l1(direct.probs(), split.probs()) <= 1e-12 * (t.max(1)) as f64);
    }

    #[test]
    fn lazify_keeps_stationary(seed in any::<u64>(), n in 1usize..60) {
        let p = chain(seed, n);
        let a = stationary(&p, STATIONARY_TOL).unwrap();
        let b = stationary(&lazify(&p), STATIONARY_TOL).unwrap();
        prop_assert!(l1(a.probs(), b.probs()) <= 1e-10);
    }

    #[test]
    fn distance_curve_monotone_and_below_pairwise(seed in any::<u64>(), n in 2usize..25) {
        let p = chain(seed, n);
        let pi = stationary(&p, STATIONARY_TOL).unwrap();
        let d = distance_profile(&p, &pi, 40).unwrap();
        let pair = pairwise_profile(&p, 40).unwrap();
        for w in d.d().windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        for (a, b) in d.d().iter().zip(&pair) {
            prop_assert!(*a <= b + 1e-12);
        }
        prop_assert!((d.d()[0] - (1.0 - pi.min())).abs() <= 1e-12);
    }

    #[test]
    fn mixing_time_monotone_in_eps(seed in any::<u64>(), n in 2usize..25, e1 in 0.01f64..0.99, e2 in 0.01f64..0.99) {
        let p = lazify(&chain(seed, n));
        let pi = stationary(&p, STATIONARY_TOL).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let prof = chainmix::mixing::profile_until(&p, &pi, lo, 100_000).unwrap();
        prop_assert!(prof.mixing_time(lo).unwrap() >= prof.mixing_time(hi).unwrap());
    }

    #[test]
    fn reversible_relaxation_lower_bound(seed in any::<u64>(), n in 2usize..30, eps in 0.01f64..0.49) {
        let (p, pi) = random_lazy_reversible(n, 0.3, &mut trial_rng(seed, 0)).unwrap();
        prop_assert!(detailed_balance_residual(&p, &pi) <= 1e-12);
        let spec = spectrum(&p, &pi).unwrap();
        prop_assert!(spec.lambda_star >= 0.0 && spec.lambda_star < 1.0 && spec.t_rel >= 1.0);
        let t = chainmix::mixing::profile_until(&p, &pi, eps, 1_000_000).unwrap().mixing_time(eps).unwrap();
        prop_assert!(t as f64 >= (spec.t_rel - 1.0) * (1.0 / (2.0 * eps)).ln() - 1e-9);
    }

    #[test]
    fn series_matches_solve(seed in any::<u64>(), n in 1usize..40, alpha in 0.02f64..0.98) {
        let p = chain(seed, n);
        let pert = RestartPerturbation::new(alpha, dist(seed, 2, n)).unwrap();
        let s = restart_stationary_series(&p, &pert, 1e-13).unwrap();
        let d = stationary(&restart_matrix(&p, &pert).unwrap(), STATIONARY_TOL).unwrap();
        prop_assert!(l1(s.probs(), d.probs()) <= 1e-10);
    }

    #[test]
    fn restart_radius_at_most_alpha(seed in any::<u64>(), n in 1usize..40, alpha in 0.001f64..0.999) {
        let p = chain(seed, n);
        let pert = RestartPerturbation::new(alpha, dist(seed, 2, n)).unwrap();
        prop_assert!(radius(&p, &restart_matrix(&p, &pert).unwrap()).unwrap() <= alpha + 1e-15);
        let ball = random_ball_perturbation(&p, alpha, &mut trial_rng(seed, 3)).unwrap();
        prop_assert!(radius(&p, &ball).unwrap() <= alpha + 1e-12);
    }

    #[test]
    fn error_below_coupling_bound(seed in any::<u64>(), n in 2usize..25, alpha in 0.001f64..0.9) {
        let p = chain(seed, n);
        let pi = stationary(&p, STATIONARY_TOL).unwrap();
        let pt = random_ball_perturbation(&p, alpha, &mut trial_rng(seed, 3)).unwrap();
        let err = perturbation_error(&p, &pt).unwrap();
        let ub = upper_bound(&p, &pi, alpha, 2_000).unwrap();
        prop_assert!(err <= ub.bound + 1e-12);
    }

    #[test]
    fn error_invariant_under_relabeling(seed in any::<u64>(), n in 1usize..30, alpha in 0.01f64..0.9) {
        let p = chain(seed, n);
        let pert = RestartPerturbation::new(alpha, dist(seed, 2, n)).unwrap();
        let pt = restart_matrix(&p, &pert).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut trial_rng(seed, 4));
        let a = perturbation_error(&p, &pt).unwrap();
        let b = perturbation_error(&p.permuted(&perm).unwrap(), &pt.permuted(&perm).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn hitting_profile_monotone(seed in any::<u64>(), n in 2usize..15, mask in 1u32..) {
        let p = chain(seed, n);
        let a: Vec<usize> = (0..n).filter(|&i| mask >> (i % 32) & 1 == 1).collect();
        prop_assume!(!a.is_empty());
        let x = (seed % n as u64) as usize;
        let h = hitting_profile(&p, x, &a, 30).unwrap();
        prop_assert!(h.iter().all(|v| (0.0..=1.0).contains(v)));
        for w in h.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-15);
        }
        if a.contains(&x) {
            prop_assert!(h.iter().all(|&v| v == 0.0));
        }
    }
}

/// `t_hit` by enumerating every qualifying set, minimal or not.
fn brute_t_hit(p: &StochasticMatrix, pi: &Distribution, eta3: f64, eta1: f64) -> usize {
    let n = p.n();
    let sets: Vec<Vec<usize>> = (1u32..1 << n)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|a| pi.mass(a) >= 1.0 - eta3)
        .collect();
    let t_max = 5_000;
    let mut worst = vec![0.0f64; t_max + 1];
    for a in &sets {
        for x in 0..n {
            for (w, v) in worst.iter_mut().zip(hitting_profile(p, x, a, t_max).unwrap()) {
                *w = w.max(v);
            }
        }
    }
    worst.iter().position(|&v| v <= eta1).expect("cap")
}

#[test]
fn exact_t_hit_matches_full_enumeration() {
    for seed in 0..40u64 {
        let mut rng = trial_rng(seed, 7);
        let n = rng.gen_range(2..=10);
        let p = random_irreducible_chain(n, 0.2, &mut rng).unwrap();
        let pi = stationary(&p, STATIONARY_TOL).unwrap();
        for (eta3, eta1) in [(0.25, 0.25), (0.1, 0.8), (0.4, 0.05)] {
            let cert = t_hit(&p, &pi, eta3, eta1, SearchMode::Exact, 5_000).unwrap();
            assert!(cert.exhaustive);
            assert_eq!(cert.t_hit, brute_t_hit(&p, &pi, eta3, eta1), "seed {seed} n {n}");
            assert!(pi.mass(&cert.witness_a) >= 1.0 - eta3);
            if cert.t_hit >= 1 {
                assert!(cert.witness_prob > eta1);
            }
        }
    }
}

#[test]
fn greedy_t_hit_is_a_lower_bound() {
    for seed in 0..20u64 {
        let mut rng = trial_rng(seed, 8);
        let n = rng.gen_range(2..=10);
        let p = random_irreducible_chain(n, 0.2, &mut rng).unwrap();
        let pi = stationary(&p, STATIONARY_TOL).unwrap();
        let exact = t_hit(&p, &pi, 0.2, 0.3, SearchMode::Exact, 5_000).unwrap();
        let greedy = t_hit(&p, &pi, 0.2, 0.3, SearchMode::Greedy, 5_000).unwrap();
        assert!(!greedy.exhaustive);
        assert!(greedy.t_hit <= exact.t_hit);
    }
}

#[test]
fn stationary_on_builtin_families() {
    for n in [2usize, 3, 10, 64, 200] {
        for p in [winning_streak(n).unwrap(), winning_streak_reversal(n).unwrap()] {
            let pi = stationary(&p, STATIONARY_TOL).unwrap();
            assert!(stationarity_residual(&p, pi.probs()) <= 1e-10);
            assert!(l1(pi.probs(), wsr_stationary(n).unwrap().probs()) <= 1e-10);
        }
        if n >= 4 {
            let p = complete_graph_bijection(n).unwrap();
            let pi = stationary(&p, STATIONARY_TOL).unwrap();
            assert!(l1(pi.probs(), cgb_stationary(n).unwrap().probs()) <= 1e-10);
        }
    }
}
