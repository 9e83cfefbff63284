//! Hybrid genetic algorithm: BFS-seeded population, middle-point crossover,
//! k-swap mutation and hill-climbing refinement with elitist survival.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_from, NeighborOrder};
use crate::instance::Instance;
use crate::labeling::Labeling;
use crate::local_search::{hill_climb_tracked, BandTracker, DEFAULT_MAX_PASSES};
use crate::RunResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub generations: usize,
    /// Probability that an offspring receives the k-swap mutation.
    pub mutation_rate: f64,
    /// Swaps per k-swap mutation; `None` means `max(1, n / 10)`.
    pub k: Option<usize>,
    /// `None` means one individual per vertex.
    pub population_size: Option<usize>,
    pub hill_climb_passes: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            generations: 50,
            mutation_rate: 0.10,
            k: None,
            population_size: None,
            hill_climb_passes: DEFAULT_MAX_PASSES,
            seed: 0,
        }
    }
}

impl GaConfig {
    /// 50 generations.
    pub fn ga1(seed: u64) -> Self {
        GaConfig { seed, ..Default::default() }
    }

    /// 100 generations.
    pub fn ga2(seed: u64) -> Self {
        GaConfig {
            generations: 100,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.generations == 0 {
            return Err(Error::Config("generations must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::Config(format!(
                "mutation rate {} outside [0, 1]",
                self.mutation_rate
            )));
        }
        if self.k == Some(0) {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.population_size == Some(0) {
            return Err(Error::Config("population size must be at least 1".into()));
        }
        Ok(())
    }

    pub fn swaps_for(&self, n: usize) -> usize {
        self.k.unwrap_or((n / 10).max(1))
    }
}

#[derive(Debug, Clone)]
struct Individual {
    lab: Labeling,
    beta: usize,
    critical: usize,
}

impl Individual {
    fn refine(inst: &Instance, lab: Labeling, passes: usize) -> Self {
        let (lab, _) = hill_climb_tracked(inst, lab, passes);
        let t = BandTracker::new(inst, lab);
        let (beta, critical) = (t.bandwidth(), t.critical_count());
        Individual {
            lab: t.into_labeling(),
            beta,
            critical,
        }
    }

    fn key(&self) -> (usize, usize) {
        (self.beta, self.critical)
    }
}

/// BFS visit order from `start` with lowest-index tie-break; remaining
/// components follow, each from its smallest vertex.
pub fn bfs_labeling(inst: &Instance, start: usize) -> Labeling {
    let mut seen = vec![false; inst.n()];
    let mut order = Vec::with_capacity(inst.n());
    order.extend(bfs_from(inst, start, NeighborOrder::Index, &mut seen).visit_order());
    for s in 0..inst.n() {
        if !seen[s] {
            order.extend(bfs_from(inst, s, NeighborOrder::Index, &mut seen).visit_order());
        }
    }
    Labeling::from_order(order).expect("BFS visits every vertex once")
}

/// One BFS labeling per vertex, each hill-climbed.
pub fn initial_population(inst: &Instance) -> Vec<Labeling> {
    (0..inst.n())
        .into_par_iter()
        .map(|v| hill_climb_tracked(inst, bfs_labeling(inst, v), DEFAULT_MAX_PASSES).0)
        .collect()
}

/// Keeps the first `ceil(n/2)` positions of `a` and fills the rest with the
/// missing vertices in the order they appear in `b`.
pub fn middle_point_crossover(a: &Labeling, b: &Labeling) -> Result<Labeling> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    let cut = n.div_ceil(2);
    let mut taken = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &v in &a.order()[..cut] {
        taken[v] = true;
        order.push(v);
    }
    order.extend(b.order().iter().copied().filter(|&v| !taken[v]));
    Ok(Labeling::from_order(order).expect("prefix plus repair is a permutation"))
}

/// `k` uniformly random position swaps.
pub fn k_swap_mutation<R: Rng + ?Sized>(mut lab: Labeling, k: usize, rng: &mut R) -> Labeling {
    let n = lab.len();
    if n < 2 {
        return lab;
    }
    for _ in 0..k {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        lab.swap_positions(i, j);
    }
    lab
}

fn sort_population(pop: &mut [Individual]) {
    pop.sort_by_key(Individual::key);
}

/// Runs the hybrid GA and returns the best labeling found. `history[0]` is
/// the best bandwidth of the initial population, `history[g]` the best after
/// generation `g`.
///
/// Each generation pairs the population at random, produces two middle-point
/// children per pair, mutates each child with probability `mutation_rate`,
/// hill-climbs it, and keeps the fittest `population_size` of parents and
/// children. Every survivor but the best then gets one random swap and
/// another hill climb. Offspring draw their own random streams from the
/// master seed, so results do not depend on thread scheduling.
pub fn evolve(inst: &Instance, cfg: &GaConfig) -> Result<RunResult> {
    cfg.validate()?;
    let n = inst.n();
    if n == 0 {
        return Ok(RunResult::new(Labeling::identity(0), 0, vec![0]));
    }
    let size = cfg.population_size.unwrap_or(n);
    let k = cfg.swaps_for(n);
    let passes = cfg.hill_climb_passes;
    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);

    let seeds: Vec<u64> = (0..size).map(|_| master.random()).collect();
    let mut pop: Vec<Individual> = seeds
        .into_par_iter()
        .enumerate()
        .map(|(i, seed)| {
            let mut lab = bfs_labeling(inst, i % n);
            if i >= n {
                lab = k_swap_mutation(lab, k, &mut ChaCha8Rng::seed_from_u64(seed));
            }
            Individual::refine(inst, lab, passes)
        })
        .collect();
    sort_population(&mut pop);
    let mut history = vec![pop[0].beta];

    for _ in 0..cfg.generations {
        let mut idx: Vec<usize> = (0..pop.len()).collect();
        idx.shuffle(&mut master);
        let mut pairs: Vec<(usize, usize)> = idx.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        if idx.len() % 2 == 1 && idx.len() > 1 {
            let last = *idx.last().unwrap();
            let mate = idx[master.random_range(0..idx.len() - 1)];
            pairs.push((last, mate));
        }
        let jobs: Vec<(usize, usize, u64)> = pairs
            .iter()
            .flat_map(|&(a, b)| [(a, b), (b, a)])
            .map(|(a, b)| (a, b, master.random()))
            .collect();

        let children: Vec<Individual> = jobs
            .into_par_iter()
            .map(|(a, b, seed)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut child = middle_point_crossover(&pop[a].lab, &pop[b].lab).expect("equal lengths");
                if rng.random_bool(cfg.mutation_rate) {
                    child = k_swap_mutation(child, k, &mut rng);
                }
                Individual::refine(inst, child, passes)
            })
            .collect();

        pop.extend(children);
        sort_population(&mut pop);
        pop.truncate(size);

        let seeds: Vec<u64> = (1..pop.len()).map(|_| master.random()).collect();
        pop[1..]
            .par_iter_mut()
            .zip(seeds)
            .for_each(|(ind, seed)| {
                let lab = k_swap_mutation(ind.lab.clone(), 1, &mut ChaCha8Rng::seed_from_u64(seed));
                *ind = Individual::refine(inst, lab, passes);
            });

        let best = pop.iter().map(|i| i.beta).min().unwrap();
        history.push(best);
    }

    sort_population(&mut pop);
    let best = pop.swap_remove(0);
    Ok(RunResult::new(best.lab, best.beta, history))
}
