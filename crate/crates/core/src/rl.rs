//! Tabular reinforcement-learning model of the bandwidth problem.
//!
//! States are the vertices plus a start state `s0`; from any state the
//! agent may move to any vertex it has not yet visited, so a complete
//! episode spells out a permutation. A partial path is completed to a full
//! labeling (see [`complete_permutation`]), and the reward for a step is the
//! drop in bandwidth between the completions before and after it. Episode
//! returns therefore telescope to `beta(first completion) - beta(final)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::bandwidth_unchecked;
use crate::instance::Instance;
use crate::labeling::Labeling;

/// Above this size training is allowed but slow: each step costs `O(|E|)`.
pub const RL_SOFT_LIMIT: usize = 300;

/// A sequence of distinct vertices visited after `s0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpisodePath {
    n: usize,
    visited: Vec<usize>,
    used: Vec<bool>,
}

impl EpisodePath {
    pub fn new(n: usize) -> Self {
        EpisodePath {
            n,
            visited: Vec::with_capacity(n),
            used: vec![false; n],
        }
    }

    pub fn from_vertices(n: usize, vs: &[usize]) -> Result<Self> {
        let mut p = Self::new(n);
        for &v in vs {
            p.push(v)?;
        }
        Ok(p)
    }

    pub fn push(&mut self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::InvalidPath(format!("vertex {v} out of range for n = {}", self.n)));
        }
        if self.used[v] {
            return Err(Error::InvalidPath(format!("vertex {v} visited twice")));
        }
        self.used[v] = true;
        self.visited.push(v);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of visited vertices, excluding `s0`.
    pub fn len(&self) -> usize {
        self.visited.len()
    }

    pub fn is_empty(&self) -> bool {
        self.visited.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.visited
    }

    pub fn last(&self) -> Option<usize> {
        self.visited.last().copied()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.used[v]
    }

    pub fn is_terminal(&self) -> bool {
        self.visited.len() == self.n
    }

    pub fn unvisited(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(|&v| !self.used[v])
    }
}

/// Extends a partial path to a full labeling.
///
/// Position `j < k` takes the `j`-th visited vertex; a later position keeps
/// its own index when that vertex is still unvisited. The remaining
/// positions, whose own index was already visited, receive the leftover
/// vertices, both taken in increasing order.
///
/// Following the chain `j = pi[i1], i1 = pi[i2], ...` out of the prefix is
/// not well defined for every prefix, so conflicted positions are paired in
/// sorted order. The result is a bijection, agrees with the path on the first
/// `k` positions, and is the path itself once the path is complete.
pub fn complete_permutation(path: &EpisodePath) -> Labeling {
    let n = path.n();
    let k = path.len();
    let mut order = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for (j, &v) in path.vertices().iter().enumerate() {
        order[j] = v;
        taken[v] = true;
    }
    let mut conflicted = Vec::new();
    for j in k..n {
        if taken[j] {
            conflicted.push(j);
        } else {
            order[j] = j;
        }
    }
    for j in k..n {
        if order[j] == j {
            taken[j] = true;
        }
    }
    let leftovers = (0..n).filter(|&v| !taken[v]);
    for (j, v) in conflicted.into_iter().zip(leftovers) {
        order[j] = v;
    }
    Labeling::from_order(order).expect("completion is a bijection")
}

/// Reward for extending `prev` by one vertex to `now`: zero on the first
/// step, otherwise the bandwidth of `prev`'s completion minus that of `now`'s.
pub fn reward(inst: &Instance, prev: &EpisodePath, now: &EpisodePath) -> Result<f64> {
    let consistent = prev.n() == inst.n()
        && now.n() == inst.n()
        && now.len() == prev.len() + 1
        && now.vertices()[..prev.len()] == *prev.vertices();
    if !consistent {
        return Err(Error::InvalidPath(
            "second path must extend the first by exactly one vertex".into(),
        ));
    }
    if now.len() == 1 {
        return Ok(0.0);
    }
    let before = bandwidth_unchecked(inst, &complete_permutation(prev));
    let after = bandwidth_unchecked(inst, &complete_permutation(now));
    Ok(before as f64 - after as f64)
}

/// Action values over `(state, action)` with states `s0, 0, .., n-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QTable {
    n: usize,
    q: Vec<f64>,
}

impl QTable {
    pub fn new(n: usize, init: f64) -> Self {
        QTable {
            n,
            q: vec![init; (n + 1) * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    #[inline]
    fn idx(&self, from: Option<usize>, action: usize) -> usize {
        let s = from.map_or(0, |v| v + 1);
        s * self.n + action
    }

    /// `from = None` is the start state `s0`.
    #[inline]
    pub fn get(&self, from: Option<usize>, action: usize) -> f64 {
        self.q[self.idx(from, action)]
    }

    #[inline]
    pub fn set(&mut self, from: Option<usize>, action: usize, value: f64) {
        let i = self.idx(from, action);
        self.q[i] = value;
    }

    /// Unvisited action with the largest value, lowest index on ties.
    /// Non-finite values never beat a finite one.
    pub fn greedy_action(&self, from: Option<usize>, path: &EpisodePath) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for a in path.unvisited() {
            let v = self.get(from, a);
            let v = if v.is_nan() { f64::NEG_INFINITY } else { v };
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((a, v));
            }
        }
        best.map(|(a, _)| a)
    }

    /// State-independent utility of a vertex: `max_s q(s, v)`.
    pub fn utility(&self, v: usize) -> f64 {
        (0..=self.n)
            .map(|s| self.q[s * self.n + v])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RlConfig {
    /// `None` means `200 * n`.
    pub episodes: Option<usize>,
    pub alpha: f64,
    pub gamma: f64,
    pub eps_start: f64,
    pub eps_end: f64,
    pub initial_q: f64,
    pub seed: u64,
}

impl Default for RlConfig {
    fn default() -> Self {
        RlConfig {
            episodes: None,
            alpha: 0.1,
            gamma: 1.0,
            eps_start: 0.9,
            eps_end: 0.05,
            initial_q: 0.0,
            seed: 0,
        }
    }
}

impl RlConfig {
    pub fn with_seed(seed: u64) -> Self {
        RlConfig { seed, ..Default::default() }
    }

    pub fn episodes_for(&self, n: usize) -> usize {
        self.episodes.unwrap_or(200 * n)
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |x: f64| (0.0..=1.0).contains(&x);
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("alpha = {} outside (0, 1]", self.alpha)));
        }
        if !prob(self.gamma) {
            return Err(Error::Config(format!("gamma = {} outside [0, 1]", self.gamma)));
        }
        if !prob(self.eps_start) || !prob(self.eps_end) {
            return Err(Error::Config("epsilon schedule must lie in [0, 1]".into()));
        }
        if !self.initial_q.is_finite() {
            return Err(Error::Config("initial q must be finite".into()));
        }
        if self.episodes == Some(0) {
            return Err(Error::Config("episodes must be at least 1".into()));
        }
        Ok(())
    }

    /// Linear decay from `eps_start` at the first episode to `eps_end` at the last.
    pub fn epsilon(&self, episode: usize, total: usize) -> f64 {
        if total <= 1 {
            return self.eps_start;
        }
        let t = episode as f64 / (total - 1) as f64;
        self.eps_start + (self.eps_end - self.eps_start) * t
    }
}

fn epsilon_greedy<R: Rng + ?Sized>(
    q: &QTable,
    from: Option<usize>,
    path: &EpisodePath,
    eps: f64,
    rng: &mut R,
) -> usize {
    if eps > 0.0 && rng.random_bool(eps) {
        let left = path.n() - path.len();
        path.unvisited().nth(rng.random_range(0..left)).unwrap()
    } else {
        q.greedy_action(from, path).unwrap()
    }
}

/// Output of [`train_sarsa_logged`]: the table and one return per episode.
#[derive(Debug, Clone)]
pub struct Training {
    pub q: QTable,
    pub returns: Vec<f64>,
    pub final_bandwidths: Vec<usize>,
}

/// Tabular SARSA with an epsilon-greedy behavior policy.
pub fn train_sarsa(inst: &Instance, cfg: &RlConfig) -> Result<QTable> {
    Ok(train_sarsa_logged(inst, cfg)?.q)
}

pub fn train_sarsa_logged(inst: &Instance, cfg: &RlConfig) -> Result<Training> {
    cfg.validate()?;
    let n = inst.n();
    let mut q = QTable::new(n, cfg.initial_q);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let total = cfg.episodes_for(n);
    let mut returns = Vec::with_capacity(total);
    let mut finals = Vec::with_capacity(total);
    if n == 0 {
        return Ok(Training { q, returns, final_bandwidths: finals });
    }

    for e in 0..total {
        let eps = cfg.epsilon(e, total);
        let mut path = EpisodePath::new(n);
        let mut state: Option<usize> = None;
        let mut action = epsilon_greedy(&q, state, &path, eps, &mut rng);
        let mut prev_beta = 0usize;
        let mut ret = 0.0;
        loop {
            path.push(action).expect("policy picks unvisited actions");
            let beta = bandwidth_unchecked(inst, &complete_permutation(&path));
            let r = if path.len() == 1 {
                0.0
            } else {
                prev_beta as f64 - beta as f64
            };
            prev_beta = beta;
            ret += r;

            let old = q.get(state, action);
            if path.is_terminal() {
                q.set(state, action, old + cfg.alpha * (r - old));
                break;
            }
            let next = epsilon_greedy(&q, Some(action), &path, eps, &mut rng);
            let target = r + cfg.gamma * q.get(Some(action), next);
            q.set(state, action, old + cfg.alpha * (target - old));
            state = Some(action);
            action = next;
        }
        returns.push(ret);
        finals.push(prev_beta);
    }
    Ok(Training {
        q,
        returns,
        final_bandwidths: finals,
    })
}

/// Follows the greedy policy from `s0`: always the unvisited vertex with the
/// highest value from the current state, lowest index on ties.
pub fn extract_greedy(q: &QTable, n: usize) -> Labeling {
    assert_eq!(q.n(), n, "table size must match n");
    let mut path = EpisodePath::new(n);
    let mut state = None;
    while let Some(a) = q.greedy_action(state, &path) {
        path.push(a).expect("greedy picks unvisited actions");
        state = Some(a);
    }
    Labeling::from_order(path.vertices().to_vec()).expect("walk visits every vertex once")
}

/// Vertices sorted by decreasing [`QTable::utility`], lowest index on ties.
pub fn utility_ordering(q: &QTable) -> Labeling {
    let mut vs: Vec<(usize, f64)> = (0..q.n()).map(|v| (v, q.utility(v))).collect();
    vs.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Labeling::from_order(vs.into_iter().map(|(v, _)| v).collect()).expect("sorting keeps a bijection")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn path_of(n: usize, one_based: &[usize]) -> EpisodePath {
        let vs: Vec<usize> = one_based.iter().map(|v| v - 1).collect();
        EpisodePath::from_vertices(n, &vs).unwrap()
    }

    #[test]
    fn completion_examples() {
        assert_eq!(complete_permutation(&EpisodePath::new(5)), Labeling::identity(5));
        let full = path_of(4, &[2, 4, 1, 3]);
        assert_eq!(complete_permutation(&full).to_one_based(), vec![2, 4, 1, 3]);
        assert_eq!(complete_permutation(&path_of(4, &[3, 1])).to_one_based(), vec![3, 1, 2, 4]);
    }

    #[test]
    fn completion_with_several_conflicts() {
        // prefix (5, 4): positions 3 keeps 3; positions 4, 5 are conflicted
        // and receive the leftovers 1, 2
        assert_eq!(complete_permutation(&path_of(5, &[5, 4])).to_one_based(), vec![5, 4, 3, 1, 2]);
    }

    #[test]
    fn invalid_paths() {
        assert!(EpisodePath::from_vertices(3, &[0, 0]).is_err());
        assert!(EpisodePath::from_vertices(3, &[3]).is_err());
    }

    #[test]
    fn reward_cases() {
        let g = generate::path(4);
        let empty = EpisodePath::new(4);
        let one = path_of(4, &[3]);
        assert_eq!(reward(&g, &empty, &one).unwrap(), 0.0);
        let two = path_of(4, &[3, 1]);
        // sigma(3) = (3, 2, 1, 4) and sigma(3, 1) = (3, 1, 2, 4) both have beta 3
        assert_eq!(reward(&g, &one, &two).unwrap(), 0.0);
        let bad = path_of(4, &[1, 2]);
        assert!(reward(&g, &one, &bad).is_err());
    }

    #[test]
    fn greedy_extraction() {
        let q = QTable::new(4, 0.0);
        assert_eq!(extract_greedy(&q, 4), Labeling::identity(4));

        let mut q = QTable::new(4, 0.0);
        q.set(None, 3, 1.0);
        for v in 1..4 {
            q.set(Some(v), v - 1, 1.0);
        }
        assert_eq!(extract_greedy(&q, 4).to_one_based(), vec![4, 3, 2, 1]);
        assert_eq!(utility_ordering(&q).to_one_based(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn nan_values_do_not_break_extraction() {
        let mut q = QTable::new(3, f64::NAN);
        q.set(None, 2, 0.5);
        assert!(extract_greedy(&q, 3).is_valid());
    }

    #[test]
    fn single_vertex() {
        let g = Instance::from_edges("one", 1, []).unwrap();
        let q = train_sarsa(&g, &RlConfig::with_seed(1)).unwrap();
        assert_eq!(q.values().len(), 2);
        assert_eq!(extract_greedy(&q, 1), Labeling::identity(1));
    }

    #[test]
    fn greedy_zero_table_on_path() {
        let g = generate::path(6);
        let cfg = RlConfig {
            eps_start: 0.0,
            eps_end: 0.0,
            episodes: Some(50),
            ..Default::default()
        };
        let q = train_sarsa(&g, &cfg).unwrap();
        assert_eq!(bandwidth_unchecked(&g, &extract_greedy(&q, 6)), 1);
    }

    #[test]
    fn epsilon_schedule() {
        let cfg = RlConfig::default();
        assert_eq!(cfg.epsilon(0, 11), 0.9);
        assert!((cfg.epsilon(10, 11) - 0.05).abs() < 1e-12);
        assert!((cfg.epsilon(5, 11) - 0.475).abs() < 1e-12);
        assert_eq!(cfg.episodes_for(7), 1400);
        assert!(RlConfig { alpha: 0.0, ..Default::default() }.validate().is_err());
    }
}
