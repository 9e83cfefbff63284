//! Bandwidth evaluation, BFS level structures and root selection.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::labeling::Labeling;

/// Maximum `|pos(u) - pos(v)|` over all edges; 0 for an edgeless graph.
pub fn bandwidth(inst: &Instance, lab: &Labeling) -> Result<usize> {
    if lab.len() != inst.n() {
        return Err(Error::LabelingLength {
            expected: inst.n(),
            found: lab.len(),
        });
    }
    Ok(bandwidth_unchecked(inst, lab))
}

#[inline]
pub(crate) fn bandwidth_unchecked(inst: &Instance, lab: &Labeling) -> usize {
    inst.edges()
        .iter()
        .map(|&(u, v)| lab.position(u).abs_diff(lab.position(v)))
        .max()
        .unwrap_or(0)
}

/// Lower bound `ceil(max_degree / 2)`: the neighbors of a vertex occupy distinct
/// positions, so at least half of them lie that far to one side.
pub fn degree_lower_bound(inst: &Instance) -> usize {
    inst.max_degree().div_ceil(2)
}

/// How a BFS orders the newly discovered neighbors of each vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborOrder {
    /// Increasing original index.
    #[default]
    Index,
    /// Increasing degree, ties by index (the Cuthill-McKee rule).
    Degree,
}

impl NeighborOrder {
    fn sort(self, inst: &Instance, vs: &mut [usize]) {
        match self {
            // adjacency lists are already index-sorted
            NeighborOrder::Index => vs.sort_unstable(),
            NeighborOrder::Degree => vs.sort_unstable_by_key(|&v| (inst.deg(v), v)),
        }
    }
}

/// BFS layering from a root: `levels[d]` holds the vertices at distance `d`,
/// in discovery order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStructure {
    pub root: usize,
    pub levels: Vec<Vec<usize>>,
}

impl LevelStructure {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Eccentricity of the root within its component.
    pub fn eccentricity(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }

    pub fn width(&self) -> usize {
        self.levels.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn last_level(&self) -> &[usize] {
        self.levels.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// All reached vertices in discovery order.
    pub fn visit_order(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.iter().flatten().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }
}

pub fn bfs_level_structure(inst: &Instance, root: usize, order: NeighborOrder) -> Result<LevelStructure> {
    if root >= inst.n() {
        return Err(Error::VertexOutOfRange {
            vertex: root,
            n: inst.n(),
        });
    }
    let mut seen = vec![false; inst.n()];
    Ok(bfs_from(inst, root, order, &mut seen))
}

/// BFS that marks `seen` and never enters vertices already marked.
pub(crate) fn bfs_from(inst: &Instance, root: usize, order: NeighborOrder, seen: &mut [bool]) -> LevelStructure {
    seen[root] = true;
    let mut levels = vec![vec![root]];
    let mut fresh = Vec::new();
    loop {
        let mut next = Vec::new();
        for &u in levels.last().unwrap() {
            fresh.clear();
            fresh.extend(inst.neighbors(u).iter().copied().filter(|&w| !seen[w]));
            order.sort(inst, &mut fresh);
            for &w in &fresh {
                seen[w] = true;
                next.push(w);
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    LevelStructure { root, levels }
}

/// Plain BFS distances from `root`; `usize::MAX` marks unreachable vertices.
pub fn bfs_distances(inst: &Instance, root: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; inst.n()];
    let mut queue = VecDeque::from([root]);
    dist[root] = 0;
    while let Some(u) = queue.pop_front() {
        for &w in inst.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Connected components, each sorted by index, ordered by their smallest vertex.
pub fn components(inst: &Instance) -> Vec<Vec<usize>> {
    let mut seen = vec![false; inst.n()];
    let mut out = Vec::new();
    for s in 0..inst.n() {
        if seen[s] {
            continue;
        }
        let mut comp: Vec<usize> = bfs_from(inst, s, NeighborOrder::Index, &mut seen)
            .visit_order()
            .collect();
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(inst: &Instance) -> bool {
    inst.n() <= 1 || components(inst).len() == 1
}

fn min_degree_vertex(inst: &Instance, vs: impl IntoIterator<Item = usize>) -> usize {
    vs.into_iter()
        .min_by_key(|&v| (inst.deg(v), v))
        .expect("non-empty vertex set")
}

/// Iterated-BFS pseudo-peripheral vertex of the component containing `start`.
///
/// Begins at the minimum-degree vertex of that component and keeps jumping
/// to the minimum-degree vertex of the last level while the eccentricity
/// grows. Ties go to the lowest index.
pub fn pseudo_peripheral_root_in(inst: &Instance, start: usize) -> Result<usize> {
    if start >= inst.n() {
        return Err(Error::VertexOutOfRange {
            vertex: start,
            n: inst.n(),
        });
    }
    let mut seen = vec![false; inst.n()];
    let comp: Vec<usize> = bfs_from(inst, start, NeighborOrder::Index, &mut seen)
        .visit_order()
        .collect();
    let mut root = min_degree_vertex(inst, comp);
    let mut ls = bfs_level_structure(inst, root, NeighborOrder::Index)?;
    loop {
        let candidate = min_degree_vertex(inst, ls.last_level().iter().copied());
        let next = bfs_level_structure(inst, candidate, NeighborOrder::Index)?;
        if next.eccentricity() <= ls.eccentricity() {
            return Ok(root);
        }
        root = candidate;
        ls = next;
    }
}

/// Pseudo-peripheral vertex of the component holding the graph's
/// minimum-degree vertex.
pub fn pseudo_peripheral_root(inst: &Instance) -> Result<usize> {
    if inst.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    pseudo_peripheral_root_in(inst, min_degree_vertex(inst, 0..inst.n()))
}
