//! Synthetic instances for tests, benchmarks and smoke runs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::Instance;

fn build(name: String, n: usize, edges: Vec<(usize, usize)>) -> Instance {
    Instance::from_edges(name, n, edges).expect("generator produced an out-of-range vertex")
}

pub fn path(n: usize) -> Instance {
    build(format!("path_{n}"), n, (1..n).map(|v| (v - 1, v)).collect())
}

pub fn cycle(n: usize) -> Instance {
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    if n > 2 {
        edges.push((0, n - 1));
    }
    build(format!("cycle_{n}"), n, edges)
}

/// Vertex 0 is the center.
pub fn star(n: usize) -> Instance {
    build(format!("star_{n}"), n, (1..n).map(|v| (0, v)).collect())
}

pub fn complete(n: usize) -> Instance {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    build(format!("complete_{n}"), n, edges)
}

/// `rows x cols` grid, row-major numbering. With `diagonals`, every cell is
/// also joined to its lower-right neighbor, giving a triangulated mesh.
pub fn grid(rows: usize, cols: usize, diagonals: bool) -> Instance {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
            if diagonals && r + 1 < rows && c + 1 < cols {
                edges.push((id(r, c), id(r + 1, c + 1)));
            }
        }
    }
    build(format!("grid_{rows}x{cols}"), rows * cols, edges)
}

/// Random spanning tree plus each remaining pair with probability `p`.
/// Always connected.
pub fn random_connected<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Instance {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((parent, order[i]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    build(format!("random_{n}"), n, edges)
}

/// Applies a random relabeling, hiding any structure in the vertex numbering.
pub fn scramble<R: Rng + ?Sized>(inst: &Instance, rng: &mut R) -> Instance {
    let mut map: Vec<usize> = (0..inst.n()).collect();
    map.shuffle(rng);
    let edges = inst.edges().iter().map(|&(u, v)| (map[u], map[v])).collect();
    build(format!("{}_scrambled", inst.name()), inst.n(), edges)
}
