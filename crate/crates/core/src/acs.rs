//! Hybrid Ant Colony System over the Cuthill-McKee level structure, with
//! PSwap (hACS) or MPSwap (hMACS) local search.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cm::{cm_level_structures, Root};
use crate::error::{Error, Result};
use crate::graph::{bandwidth_unchecked, LevelStructure};
use crate::instance::Instance;
use crate::labeling::Labeling;
use crate::local_search::{mpswap_tracked, pswap};
use crate::RunResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalSearch {
    /// hACS
    PSwap,
    /// hMACS
    MPSwap,
}

impl LocalSearch {
    pub fn apply<R: Rng + ?Sized>(self, inst: &Instance, lab: Labeling, rng: &mut R) -> (Labeling, usize) {
        match self {
            LocalSearch::PSwap => {
                let out = pswap(inst, lab, rng);
                let bw = bandwidth_unchecked(inst, &out);
                (out, bw)
            }
            LocalSearch::MPSwap => mpswap_tracked(inst, lab, rng),
        }
    }
}

impl fmt::Display for LocalSearch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalSearch::PSwap => "pswap",
            LocalSearch::MPSwap => "mpswap",
        })
    }
}

impl FromStr for LocalSearch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pswap" | "acs" | "hacs" => Ok(LocalSearch::PSwap),
            "mpswap" | "macs" | "hmacs" => Ok(LocalSearch::MPSwap),
            _ => Err(format!("unknown local search `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcsConfig {
    pub ants: usize,
    pub iterations: usize,
    /// Probability of taking the greedy choice.
    pub q0: f64,
    /// Exponent on the degree heuristic.
    pub beta: f64,
    /// Evaporation rate, shared by the local and global rules.
    pub rho: f64,
    pub tau0: f64,
    pub variant: LocalSearch,
    pub seed: u64,
}

impl AcsConfig {
    pub fn hacs(seed: u64) -> Self {
        AcsConfig {
            ants: 10,
            iterations: 10,
            q0: 0.95,
            beta: 2.0,
            rho: 0.001,
            tau0: 0.1,
            variant: LocalSearch::PSwap,
            seed,
        }
    }

    pub fn hmacs(seed: u64) -> Self {
        AcsConfig {
            variant: LocalSearch::MPSwap,
            ..Self::hacs(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.ants == 0 || self.iterations == 0 {
            return fail("ants and iterations must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.q0) {
            return fail(format!("q0 = {} outside [0, 1]", self.q0));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return fail(format!("rho = {} outside (0, 1)", self.rho));
        }
        if !(self.tau0 > 0.0 && self.tau0.is_finite()) {
            return fail(format!("tau0 = {} must be positive", self.tau0));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return fail(format!("beta = {} must be non-negative", self.beta));
        }
        Ok(())
    }
}

impl Default for AcsConfig {
    fn default() -> Self {
        Self::hacs(0)
    }
}

/// Pheromone on ordered vertex pairs, dense `n x n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneTable {
    n: usize,
    tau: Vec<f64>,
}

impl PheromoneTable {
    pub fn new(n: usize, tau0: f64) -> Self {
        PheromoneTable {
            n,
            tau: vec![tau0; n * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.tau[i * self.n + j] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.tau
    }

    pub fn min_value(&self) -> f64 {
        self.tau.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `tau(i, j) <- (1 - rho) tau(i, j) + rho tau0`
pub fn local_update(pher: &mut PheromoneTable, i: usize, j: usize, cfg: &AcsConfig) {
    let t = pher.get(i, j);
    pher.set(i, j, (1.0 - cfg.rho) * t + cfg.rho * cfg.tau0);
}

/// Evaporates every pair by `(1 - rho)` and deposits `rho / best_beta` on the
/// consecutive pairs of `best`. Nothing is deposited when `best_beta == 0`.
pub fn global_update(pher: &mut PheromoneTable, best: &Labeling, best_beta: usize, cfg: &AcsConfig) {
    for t in pher.tau.iter_mut() {
        *t *= 1.0 - cfg.rho;
    }
    if best_beta == 0 {
        return;
    }
    let deposit = cfg.rho / best_beta as f64;
    for w in best.order().windows(2) {
        let t = pher.get(w[0], w[1]);
        pher.set(w[0], w[1], t + deposit);
    }
}

/// Low degree is attractive, mirroring Cuthill-McKee's degree order.
#[inline]
fn heuristic(inst: &Instance, j: usize) -> f64 {
    1.0 / (1.0 + inst.deg(j) as f64)
}

/// One ant's labeling.
///
/// The ant starts at the root of the first level structure and fills the
/// levels in order: the candidates at every step are the unplaced vertices
/// of the lowest level that still has any. With probability `q0` it takes
/// the candidate maximizing `tau(cur, j) * eta(j)^beta` (lowest index on
/// ties), otherwise it samples proportionally to that product. Each move
/// applies [`local_update`] to the pair it traversed.
pub fn construct_solution<R: Rng + ?Sized>(
    inst: &Instance,
    levels: &[LevelStructure],
    pher: &mut PheromoneTable,
    cfg: &AcsConfig,
    rng: &mut R,
) -> Labeling {
    let n = inst.n();
    let mut order = Vec::with_capacity(n);
    let eta: Vec<f64> = (0..n).map(|j| heuristic(inst, j).powf(cfg.beta)).collect();
    let mut cur: Option<usize> = None;
    let mut cands: Vec<usize> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();

    for level in levels.iter().flat_map(|ls| ls.levels.iter()) {
        cands.clear();
        cands.extend_from_slice(level);
        cands.sort_unstable();
        while !cands.is_empty() {
            let pick = match cur {
                None => 0,
                Some(c) => {
                    weights.clear();
                    weights.extend(cands.iter().map(|&j| pher.get(c, j) * eta[j]));
                    choose(&weights, cfg.q0, rng)
                }
            };
            let j = cands.remove(pick);
            if let Some(c) = cur {
                local_update(pher, c, j, cfg);
            }
            order.push(j);
            cur = Some(j);
        }
    }
    Labeling::from_order(order).expect("levels partition the vertices")
}

/// Pseudo-random-proportional choice over `weights`.
fn choose<R: Rng + ?Sized>(weights: &[f64], q0: f64, rng: &mut R) -> usize {
    if weights.len() == 1 {
        return 0;
    }
    let q: f64 = rng.random();
    if q < q0 {
        let mut best = 0;
        for (i, &w) in weights.iter().enumerate().skip(1) {
            if w > weights[best] {
                best = i;
            }
        }
        return best;
    }
    let total: f64 = weights.iter().sum();
    let mut r = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if r < w {
            return i;
        }
        r -= w;
    }
    weights.len() - 1
}

/// Runs the hybrid ant system. `history[0]` is the identity bandwidth and
/// `history[t]` the best bandwidth after iteration `t`.
///
/// Every iteration first applies the local search to the best labeling so
/// far, then lets each ant construct a solution and refines it with the
/// local search, and finally applies the global pheromone update along the
/// best labeling. An ant keeps the better of its constructed and refined
/// labelings, since PSwap may worsen a solution.
pub fn solve(inst: &Instance, cfg: &AcsConfig) -> Result<RunResult> {
    cfg.validate()?;
    let n = inst.n();
    if n == 0 {
        return Ok(RunResult::new(Labeling::identity(0), 0, vec![0]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let levels = cm_level_structures(inst, Root::Auto)?;
    let mut pher = PheromoneTable::new(n, cfg.tau0);

    let mut best = Labeling::identity(n);
    let mut best_beta = bandwidth_unchecked(inst, &best);
    let mut history = vec![best_beta];

    let offer = |lab: Labeling, bw: usize, best: &mut Labeling, best_beta: &mut usize| {
        if bw < *best_beta {
            *best = lab;
            *best_beta = bw;
        }
    };

    for _ in 0..cfg.iterations {
        let (lab, bw) = cfg.variant.apply(inst, best.clone(), &mut rng);
        offer(lab, bw, &mut best, &mut best_beta);

        for _ in 0..cfg.ants {
            let built = construct_solution(inst, &levels, &mut pher, cfg, &mut rng);
            let built_bw = bandwidth_unchecked(inst, &built);
            let (refined, refined_bw) = cfg.variant.apply(inst, built.clone(), &mut rng);
            if refined_bw <= built_bw {
                offer(refined, refined_bw, &mut best, &mut best_beta);
            } else {
                offer(built, built_bw, &mut best, &mut best_beta);
            }
        }

        global_update(&mut pher, &best, best_beta, cfg);
        history.push(best_beta);
    }

    Ok(RunResult::new(best, best_beta, history))
}
