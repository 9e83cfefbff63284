use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mbmp_core::acs::{self, AcsConfig};
use mbmp_core::cm::{self, Root};
use mbmp_core::ga::{self, GaConfig};
use mbmp_core::local_search::{hill_climb, DEFAULT_MAX_PASSES};
use mbmp_core::{bandwidth, generate, Instance, Labeling};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grids() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    [(5, 5), (10, 10), (16, 16)]
        .into_iter()
        .map(|(r, c)| {
            let mut g = generate::scramble(&generate::grid(r, c, true), &mut rng);
            g.set_name(format!("grid{r}x{c}"));
            g
        })
        .collect()
}

fn core_ops(c: &mut Criterion) {
    let mut group = c.benchmark_group("core");
    for g in grids() {
        let id = Labeling::identity(g.n());
        group.bench_with_input(BenchmarkId::new("bandwidth", g.name()), &g, |b, g| b.iter(|| bandwidth(g, &id).unwrap()));
        group.bench_with_input(BenchmarkId::new("cuthill_mckee", g.name()), &g, |b, g| {
            b.iter(|| cm::cuthill_mckee(g, Root::Auto).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("hill_climb", g.name()), &g, |b, g| {
            b.iter(|| hill_climb(g, id.clone(), DEFAULT_MAX_PASSES))
        });
    }
    group.finish();
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solvers");
    group.sample_size(10);
    for g in grids().into_iter().take(2) {
        let one_gen = GaConfig {
            generations: 1,
            ..GaConfig::ga1(1)
        };
        group.bench_with_input(BenchmarkId::new("ga_generation", g.name()), &g, |b, g| {
            b.iter(|| ga::evolve(g, &one_gen).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("hacs", g.name()), &g, |b, g| {
            b.iter(|| acs::solve(g, &AcsConfig::hacs(1)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("hmacs", g.name()), &g, |b, g| {
            b.iter(|| acs::solve(g, &AcsConfig::hmacs(1)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, core_ops, solvers);
criterion_main!(benches);
