use chainmix::{
    adversarial_restart, cgb_even_coupling, distance_profile, restart_matrix, restart_stationary_series, stationary,
    t_hit, BoundOptions, Distribution, Family, RestartPerturbation, SearchMode, STATIONARY_TOL,
};
use chainmix_bench::{family, random_chain};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn profiles(c: &mut Criterion) {
    let mut g = c.benchmark_group("distance_profile");
    for n in [32, 128] {
        let f = family(Family::Wsr, n);
        g.bench_with_input(BenchmarkId::new("wsr", n), &f, |b, f| {
            b.iter(|| distance_profile(&f.p, &f.pi, n).unwrap())
        });
    }
    let f = random_chain(128, 1);
    g.bench_function("random/128", |b| b.iter(|| distance_profile(&f.p, &f.pi, 64).unwrap()));
    g.finish();
}

fn stationary_laws(c: &mut Criterion) {
    let mut g = c.benchmark_group("stationary");
    for n in [64, 256] {
        let f = random_chain(n, 2);
        g.bench_with_input(BenchmarkId::new("solve", n), &f, |b, f| {
            b.iter(|| stationary(&f.p, STATIONARY_TOL).unwrap())
        });
    }
    let f = family(Family::Wsr, 64);
    let pert = RestartPerturbation::new(0.05, Distribution::uniform(64).unwrap()).unwrap();
    let pt = restart_matrix(&f.p, &pert).unwrap();
    g.bench_function("restart_series/64", |b| {
        b.iter(|| restart_stationary_series(&f.p, &pert, 1e-12).unwrap())
    });
    g.bench_function("restart_solve/64", |b| b.iter(|| stationary(&pt, STATIONARY_TOL).unwrap()));
    g.finish();
}

fn hitting(c: &mut Criterion) {
    let mut g = c.benchmark_group("t_hit");
    g.sample_size(10);
    for n in [10, 14] {
        let f = family(Family::Wsr, n);
        g.bench_with_input(BenchmarkId::new("exact/wsr", n), &f, |b, f| {
            b.iter(|| t_hit(&f.p, &f.pi, 0.9, 0.8, SearchMode::Exact, 10_000).unwrap())
        });
    }
    let f = family(Family::Cgb, 64);
    g.bench_function("greedy/cgb/64", |b| {
        b.iter(|| t_hit(&f.p, &f.pi, 0.9, 0.8, SearchMode::Greedy, 10_000).unwrap())
    });
    let f = family(Family::Wsr, 12);
    g.bench_function("adversarial_restart/wsr/12", |b| {
        b.iter(|| adversarial_restart(&f.p, &f.pi, 0.1, 0.1, &BoundOptions::default()).unwrap())
    });
    g.finish();
}

fn couplings(c: &mut Criterion) {
    let mut g = c.benchmark_group("coupling");
    g.sample_size(10);
    g.bench_function("cgb_even/32/10k", |b| {
        b.iter(|| cgb_even_coupling(black_box(32), 0, 31, 20, 10_000, 7).unwrap())
    });
    g.finish();
}

criterion_group!(benches, profiles, stationary_laws, hitting, couplings);
criterion_main!(benches);
