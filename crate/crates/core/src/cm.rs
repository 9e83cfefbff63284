//! Cuthill-McKee and reverse Cuthill-McKee orderings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{self, bandwidth_unchecked, bfs_from, LevelStructure, NeighborOrder};
use crate::instance::Instance;
use crate::labeling::Labeling;

/// Starting vertex for the ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Root {
    /// Pseudo-peripheral vertex of each component.
    #[default]
    Auto,
    /// Start the component containing this vertex here; every other
    /// component still uses its pseudo-peripheral vertex.
    Vertex(usize),
}

impl FromStr for Root {
    type Err = String;

    /// `auto` or a 1-based vertex number.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Root::Auto);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Root::Vertex(k - 1)),
            _ => Err(format!("root must be `auto` or a vertex number >= 1, got `{s}`")),
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Auto => f.write_str("auto"),
            Root::Vertex(v) => write!(f, "{}", v + 1),
        }
    }
}

/// Degree-ordered BFS level structures, one per component, components in
/// order of their smallest vertex.
pub fn cm_level_structures(inst: &Instance, root: Root) -> Result<Vec<LevelStructure>> {
    if let Root::Vertex(r) = root {
        if r >= inst.n() {
            return Err(Error::VertexOutOfRange { vertex: r, n: inst.n() });
        }
    }
    let mut seen = vec![false; inst.n()];
    let mut out = Vec::new();
    for comp in graph::components(inst) {
        let start = match root {
            Root::Vertex(r) if comp.binary_search(&r).is_ok() => r,
            _ => graph::pseudo_peripheral_root_in(inst, comp[0])?,
        };
        out.push(bfs_from(inst, start, NeighborOrder::Degree, &mut seen));
    }
    Ok(out)
}

/// Numbers the root first, then repeatedly appends the unnumbered neighbors
/// of each numbered vertex, lowest degree first, ties by lowest index.
pub fn cuthill_mckee(inst: &Instance, root: Root) -> Result<Labeling> {
    let order: Vec<usize> = cm_level_structures(inst, root)?
        .iter()
        .flat_map(|ls| ls.visit_order().collect::<Vec<_>>())
        .collect();
    Ok(Labeling::from_order(order).expect("BFS visits every vertex once"))
}

pub fn reverse_cuthill_mckee(inst: &Instance, root: Root) -> Result<Labeling> {
    Ok(cuthill_mckee(inst, root)?.reversed())
}

/// Cuthill-McKee from every possible root, keeping the lowest bandwidth
/// (first root wins ties). Costs `n` orderings.
pub fn best_root_cuthill_mckee(inst: &Instance) -> Result<(Labeling, usize, Root)> {
    if inst.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut best: Option<(Labeling, usize, Root)> = None;
    for r in 0..inst.n() {
        let root = Root::Vertex(r);
        let lab = cuthill_mckee(inst, root)?;
        let bw = bandwidth_unchecked(inst, &lab);
        if best.as_ref().is_none_or(|b| bw < b.1) {
            best = Some((lab, bw, root));
        }
    }
    Ok(best.unwrap())
}
