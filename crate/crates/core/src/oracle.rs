//! Exact minimum bandwidth by exhaustive search, for cross-checking heuristics.

use crate::error::{Error, Result};
use crate::graph::bandwidth_unchecked;
use crate::instance::Instance;
use crate::labeling::Labeling;

pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Returns a minimum-bandwidth labeling and its bandwidth.
///
/// Depth-first over all placements, pruning any partial layout whose
/// placed edges already reach the best bandwidth found so far.
pub fn brute_force_optimum(inst: &Instance) -> Result<(Labeling, usize)> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    let identity = Labeling::identity(n);
    let mut best = bandwidth_unchecked(inst, &identity);
    let mut best_order: Vec<usize> = identity.into_order();

    let mut order = Vec::with_capacity(n);
    let mut pos = vec![usize::MAX; n];
    search(inst, &mut order, &mut pos, &mut best, &mut best_order);

    let lab = Labeling::from_order(best_order).expect("search yields permutations");
    Ok((lab, best))
}

fn search(
    inst: &Instance,
    order: &mut Vec<usize>,
    pos: &mut [usize],
    best: &mut usize,
    best_order: &mut Vec<usize>,
) {
    let n = inst.n();
    let p = order.len();
    if *best == 0 {
        return;
    }
    if p == n {
        // The prefix was pruned against the incumbent at the time it was
        // placed; the incumbent may have improved since.
        let bw = inst
            .edges()
            .iter()
            .map(|&(u, v)| pos[u].abs_diff(pos[v]))
            .max()
            .unwrap_or(0);
        if bw < *best {
            *best = bw;
            best_order.clone_from(order);
        }
        return;
    }
    for v in 0..n {
        if pos[v] != usize::MAX {
            continue;
        }
        let ok = inst
            .neighbors(v)
            .iter()
            .all(|&w| pos[w] == usize::MAX || p - pos[w] < *best);
        if !ok {
            continue;
        }
        pos[v] = p;
        order.push(v);
        if frontier_ok(inst, order, pos, *best) {
            search(inst, order, pos, best, best_order);
        }
        order.pop();
        pos[v] = usize::MAX;
    }
}

/// Every placed vertex with an unplaced neighbor needs that neighbor at
/// position `p + 1` or later, so it must sit above `p + 1 - best`.
fn frontier_ok(inst: &Instance, order: &[usize], pos: &[usize], best: usize) -> bool {
    let next = order.len();
    if next == inst.n() {
        return true;
    }
    order.iter().all(|&u| {
        next - pos[u] < best || inst.neighbors(u).iter().all(|&w| pos[w] != usize::MAX)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn small_families() {
        assert_eq!(brute_force_optimum(&generate::path(4)).unwrap().1, 1);
        for k in 1..=6 {
            assert_eq!(brute_force_optimum(&generate::complete(k)).unwrap().1, k.saturating_sub(1));
        }
        let (lab, bw) = brute_force_optimum(&generate::cycle(5)).unwrap();
        assert_eq!(bw, 2);
        assert_eq!(bandwidth_unchecked(&generate::cycle(5), &lab), 2);
    }

    #[test]
    fn guard() {
        assert!(matches!(
            brute_force_optimum(&generate::path(11)),
            Err(Error::TooLarge { n: 11, .. })
        ));
    }

    #[test]
    fn edgeless() {
        let inst = Instance::from_edges("e", 3, []).unwrap();
        assert_eq!(brute_force_optimum(&inst).unwrap().1, 0);
    }
}
