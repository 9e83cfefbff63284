use std::fmt;

use crate::error::{Error, Result};

/// A simultaneous row/column permutation, stored in both directions.
///
/// `order()[j]` is the original vertex placed at position `j`, and
/// `position(v)` is the inverse. Positions and vertices are 0-based;
/// [`Labeling::to_one_based`] and [`Labeling::from_one_based`] convert at the
/// file boundary.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    order: Vec<usize>,
    pos: Vec<usize>,
}

impl Labeling {
    pub fn identity(n: usize) -> Self {
        Labeling {
            order: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    /// Validates that `order` is a permutation of `0..order.len()`.
    pub fn from_order(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut pos = vec![usize::MAX; n];
        for (j, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("value {} out of range", v + 1),
                });
            }
            if pos[v] != usize::MAX {
                return Err(Error::NotAPermutation {
                    n,
                    reason: format!("value {} repeated", v + 1),
                });
            }
            pos[v] = j;
        }
        Ok(Labeling { order, pos })
    }

    pub fn from_one_based(values: &[usize]) -> Result<Self> {
        let n = values.len();
        let order = values
            .iter()
            .map(|&v| {
                v.checked_sub(1).ok_or_else(|| Error::NotAPermutation {
                    n,
                    reason: "value 0 in a 1-based permutation".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_order(order)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.order.iter().map(|v| v + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    pub fn positions(&self) -> &[usize] {
        &self.pos
    }

    #[inline]
    pub fn position(&self, v: usize) -> usize {
        self.pos[v]
    }

    #[inline]
    pub fn vertex_at(&self, j: usize) -> usize {
        self.order[j]
    }

    /// Exchanges the positions of vertices `u` and `v`.
    #[inline]
    pub fn swap_vertices(&mut self, u: usize, v: usize) {
        let (pu, pv) = (self.pos[u], self.pos[v]);
        self.order.swap(pu, pv);
        self.pos[u] = pv;
        self.pos[v] = pu;
    }

    /// Exchanges whatever vertices occupy positions `i` and `j`.
    #[inline]
    pub fn swap_positions(&mut self, i: usize, j: usize) {
        let (u, v) = (self.order[i], self.order[j]);
        self.swap_vertices(u, v);
    }

    /// Position `j` becomes position `n - 1 - j`.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let order: Vec<usize> = self.order.iter().rev().copied().collect();
        let pos = self.pos.iter().map(|&p| n - 1 - p).collect();
        Labeling { order, pos }
    }

    /// Number of positions holding a different vertex than in `other`.
    pub fn hamming(&self, other: &Labeling) -> usize {
        self.order
            .iter()
            .zip(&other.order)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Checks the `order`/`pos` pair is a consistent bijection.
    pub fn is_valid(&self) -> bool {
        let n = self.order.len();
        self.pos.len() == n
            && self
                .order
                .iter()
                .enumerate()
                .all(|(j, &v)| v < n && self.pos[v] == j)
    }
}

impl fmt::Debug for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Labeling").field(&self.to_one_based()).finish()
    }
}
