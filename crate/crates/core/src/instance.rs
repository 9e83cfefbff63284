//! The sparsity pattern of a symmetric matrix, viewed as an undirected graph.

use crate::error::{Error, Result};

/// An `n x n` symmetric zero/nonzero pattern.
///
/// Vertices are `0..n` in the library API; file formats and the CLI use the
/// 1-based row numbers of the source matrix. Row `i` of the matrix is vertex
/// `i - 1`, and an off-diagonal nonzero `a_ij` is the edge `{i - 1, j - 1}`.
///
/// Edges are stored once each as `(u, v)` with `u < v`, sorted, with no
/// self-loops or duplicates. Adjacency lists are sorted by vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    n: usize,
    nnz_reported: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    warnings: Vec<String>,
}

impl Instance {
    /// Builds an instance from arbitrary vertex pairs. Self-loops are dropped,
    /// `(u, v)` and `(v, u)` are merged. `nnz_reported` is set to the number of
    /// distinct edges.
    pub fn from_edges<I>(name: impl Into<String>, n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u != v {
                edges.push((u.min(v), u.max(v)));
            }
        }
        let mut inst = Self::from_normalized(name.into(), n, edges);
        inst.nnz_reported = inst.edges.len();
        Ok(inst)
    }

    pub(crate) fn from_normalized(name: String, n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();

        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; offsets[n]];
        for &(u, v) in &edges {
            neighbors[fill[u]] = v;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            neighbors[offsets[v]..offsets[v + 1]].sort_unstable();
        }

        Instance {
            name,
            n,
            nnz_reported: 0,
            edges,
            offsets,
            neighbors,
            warnings: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Number of vertices (matrix rows).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry count stated in the source file's size line.
    pub fn nnz_reported(&self) -> usize {
        self.nnz_reported
    }

    pub(crate) fn set_nnz_reported(&mut self, nnz: usize) {
        self.nnz_reported = nnz;
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbors of `v`. Panics if `v >= n`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Degree of `v`, without range checking.
    #[inline]
    pub fn deg(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(self.deg(v))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.deg(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.deg(v)).min().unwrap_or(0)
    }

    /// Non-fatal notes collected while loading, e.g. a symmetrized `general` file.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub(crate) fn push_warning(&mut self, w: String) {
        self.warnings.push(w);
    }

    /// Same edge set and vertex count, ignoring name and header metadata.
    pub fn same_pattern(&self, other: &Instance) -> bool {
        self.n == other.n && self.edges == other.edges
    }

    /// The pattern of `P A P^T`: vertex `v` becomes vertex `lab.position(v)`.
    /// Its identity bandwidth equals the bandwidth of `lab` on `self`.
    pub fn permuted(&self, lab: &crate::Labeling) -> Result<Instance> {
        if lab.len() != self.n {
            return Err(Error::LabelingLength {
                expected: self.n,
                found: lab.len(),
            });
        }
        let edges = self.edges.iter().map(|&(u, v)| (lab.position(u), lab.position(v)));
        Instance::from_edges(self.name.clone(), self.n, edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loops_and_duplicates_are_dropped() {
        let inst = Instance::from_edges("t", 3, [(0, 1), (1, 0), (2, 2), (1, 2), (2, 1)]).unwrap();
        assert_eq!(inst.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(inst.neighbors(1), &[0, 2]);
        assert_eq!(inst.deg(2), 1);
    }

    #[test]
    fn permuted_pattern_has_labeling_bandwidth() {
        let inst = Instance::from_edges("t", 4, [(0, 3), (1, 2)]).unwrap();
        let lab = crate::Labeling::from_order(vec![0, 3, 1, 2]).unwrap();
        let p = inst.permuted(&lab).unwrap();
        assert_eq!(p.edges(), &[(0, 1), (2, 3)]);
        let id = crate::Labeling::identity(4);
        assert_eq!(crate::bandwidth(&p, &id).unwrap(), crate::bandwidth(&inst, &lab).unwrap());
    }

    #[test]
    fn out_of_range_endpoint() {
        let err = Instance::from_edges("t", 2, [(0, 2)]).unwrap_err();
        assert!(matches!(err, Error::VertexOutOfRange { vertex: 2, n: 2 }));
    }

    #[test]
    fn degree_checks_range() {
        let inst = Instance::from_edges("t", 3, [(0, 1)]).unwrap();
        assert_eq!(inst.degree(2).unwrap(), 0);
        assert!(inst.degree(3).is_err());
    }
}
