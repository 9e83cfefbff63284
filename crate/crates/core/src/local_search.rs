//! Swap-based refinement: hill climbing for the genetic algorithm, PSwap and
//! MPSwap for the ant systems.

use rand::Rng;

use crate::graph::bandwidth_unchecked;
use crate::instance::Instance;
use crate::labeling::Labeling;

pub const DEFAULT_MAX_PASSES: usize = 50;

/// A labeling together with the histogram of its edge lengths, so that a
/// vertex swap re-evaluates the bandwidth in `O(deg u + deg v)` instead of
/// `O(|E|)`.
#[derive(Debug, Clone)]
pub struct BandTracker<'a> {
    inst: &'a Instance,
    lab: Labeling,
    hist: Vec<usize>,
    beta: usize,
}

impl<'a> BandTracker<'a> {
    pub fn new(inst: &'a Instance, lab: Labeling) -> Self {
        assert_eq!(lab.len(), inst.n(), "labeling length must match instance");
        let mut hist = vec![0usize; inst.n().max(1)];
        let mut beta = 0;
        for &(u, v) in inst.edges() {
            let d = lab.position(u).abs_diff(lab.position(v));
            hist[d] += 1;
            beta = beta.max(d);
        }
        BandTracker { inst, lab, hist, beta }
    }

    #[inline]
    pub fn bandwidth(&self) -> usize {
        self.beta
    }

    /// Number of edges whose length equals the bandwidth.
    #[inline]
    pub fn critical_count(&self) -> usize {
        if self.inst.edge_count() == 0 {
            0
        } else {
            self.hist[self.beta]
        }
    }

    pub fn labeling(&self) -> &Labeling {
        &self.lab
    }

    pub fn into_labeling(self) -> Labeling {
        self.lab
    }

    fn edge_len(&self, u: usize, w: usize) -> usize {
        self.lab.position(u).abs_diff(self.lab.position(w))
    }

    fn tally(&mut self, u: usize, v: usize, add: bool) {
        for (a, b) in [(u, v), (v, u)] {
            for &w in self.inst.neighbors(a) {
                if w == b {
                    continue;
                }
                let d = self.edge_len(a, w);
                if add {
                    self.hist[d] += 1;
                    self.beta = self.beta.max(d);
                } else {
                    self.hist[d] -= 1;
                }
            }
        }
    }

    /// Swaps the positions of `u` and `v`, keeping the histogram in sync.
    pub fn swap(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        // the u-v edge keeps its length
        self.tally(u, v, false);
        self.lab.swap_vertices(u, v);
        self.tally(u, v, true);
        while self.beta > 0 && self.hist[self.beta] == 0 {
            self.beta -= 1;
        }
    }

    /// Vertices on at least one edge of maximum length, in edge order.
    pub fn critical_vertices(&self) -> Vec<usize> {
        if self.beta == 0 {
            return Vec::new();
        }
        let mut mark = vec![false; self.inst.n()];
        let mut out = Vec::new();
        for &(u, v) in self.inst.edges() {
            if self.edge_len(u, v) == self.beta {
                for w in [u, v] {
                    if !mark[w] {
                        mark[w] = true;
                        out.push(w);
                    }
                }
            }
        }
        out
    }

    fn is_critical(&self, u: usize) -> bool {
        self.beta > 0 && self.inst.neighbors(u).iter().any(|&w| self.edge_len(u, w) == self.beta)
    }
}

/// Critical-edge-guided hill climbing.
///
/// Each pass visits the endpoints of the maximum-length edges. For such a
/// vertex `u`, partners are tried in order of increasing distance from the
/// median position of `u`'s neighbors, and the first swap that improves
/// `(bandwidth, number of maximum-length edges)` lexicographically is kept.
/// Stops after a pass without improvement or after `max_passes` passes.
pub fn hill_climb(inst: &Instance, lab: Labeling, max_passes: usize) -> Labeling {
    hill_climb_tracked(inst, lab, max_passes).0
}

/// [`hill_climb`] that also returns the final bandwidth.
pub fn hill_climb_tracked(inst: &Instance, lab: Labeling, max_passes: usize) -> (Labeling, usize) {
    let n = inst.n();
    let mut t = BandTracker::new(inst, lab);
    let mut neighbor_pos = Vec::new();
    for _ in 0..max_passes {
        if t.bandwidth() == 0 {
            break;
        }
        let mut improved = false;
        for u in t.critical_vertices() {
            if !t.is_critical(u) {
                continue;
            }
            neighbor_pos.clear();
            neighbor_pos.extend(inst.neighbors(u).iter().map(|&w| t.lab.position(w)));
            neighbor_pos.sort_unstable();
            let median = neighbor_pos[(neighbor_pos.len() - 1) / 2];
            let pu = t.lab.position(u);
            let score = (t.bandwidth(), t.critical_count());
            // Outside [last - beta, first + beta] some neighbor other than the
            // swap partner ends up farther than beta, so no swap there can win.
            let beta = t.bandwidth();
            let lo = neighbor_pos[neighbor_pos.len() - 1].saturating_sub(beta);
            let hi = (neighbor_pos[0] + beta).min(n - 1);
            let reach = median.saturating_sub(lo).max(hi.saturating_sub(median));

            for q in outward(median, n) {
                if median.abs_diff(q) > reach {
                    break;
                }
                if q < lo || q > hi {
                    continue;
                }
                if q == pu {
                    continue;
                }
                let v = t.lab.vertex_at(q);
                t.swap(u, v);
                if (t.bandwidth(), t.critical_count()) < score {
                    improved = true;
                    break;
                }
                t.swap(u, v);
            }
        }
        if !improved {
            break;
        }
    }
    let beta = t.bandwidth();
    (t.into_labeling(), beta)
}

/// Positions `c, c-1, c+1, c-2, c+2, ...` clipped to `0..n`.
fn outward(c: usize, n: usize) -> impl Iterator<Item = usize> {
    (0..n).flat_map(move |d| {
        let lo = c.checked_sub(d);
        let hi = if d > 0 && c + d < n { Some(c + d) } else { None };
        lo.into_iter().chain(hi)
    })
}

fn degree_classes(inst: &Instance) -> (Vec<usize>, Vec<usize>) {
    let (maxd, mind) = (inst.max_degree(), inst.min_degree());
    let max_vs = (0..inst.n()).filter(|&v| inst.deg(v) == maxd).collect();
    let min_vs = (0..inst.n()).filter(|&v| inst.deg(v) == mind).collect();
    (max_vs, min_vs)
}

/// PSwap: every maximum-degree vertex, in index order, swaps positions with a
/// uniformly chosen minimum-degree vertex not yet used in this call. Swaps are
/// unconditional, so the bandwidth may go up.
pub fn pswap<R: Rng + ?Sized>(inst: &Instance, mut lab: Labeling, rng: &mut R) -> Labeling {
    if inst.n() < 2 {
        return lab;
    }
    let (max_vs, mut pool) = degree_classes(inst);
    for x in max_vs {
        if pool.is_empty() {
            break;
        }
        let y = pool.swap_remove(rng.random_range(0..pool.len()));
        lab.swap_vertices(x, y);
    }
    lab
}

/// MPSwap: like [`pswap`], but for each maximum-degree vertex the unused
/// minimum-degree partners are drawn without replacement until one whose
/// swap strictly lowers the bandwidth turns up; if none does the vertex is
/// skipped. Never increases the bandwidth.
pub fn mpswap<R: Rng + ?Sized>(inst: &Instance, lab: Labeling, rng: &mut R) -> Labeling {
    mpswap_tracked(inst, lab, rng).0
}

pub fn mpswap_tracked<R: Rng + ?Sized>(inst: &Instance, lab: Labeling, rng: &mut R) -> (Labeling, usize) {
    if inst.n() < 2 {
        let bw = bandwidth_unchecked(inst, &lab);
        return (lab, bw);
    }
    let (max_vs, mut pool) = degree_classes(inst);
    let mut t = BandTracker::new(inst, lab);
    for x in max_vs {
        if pool.is_empty() {
            break;
        }
        let before = t.bandwidth();
        for tried in 0..pool.len() {
            let j = rng.random_range(tried..pool.len());
            pool.swap(tried, j);
            let y = pool[tried];
            t.swap(x, y);
            if t.bandwidth() < before {
                pool.swap_remove(tried);
                break;
            }
            t.swap(x, y);
        }
    }
    let beta = t.bandwidth();
    (t.into_labeling(), beta)
}
