//! Matrix bandwidth minimization.
//!
//! A symmetric sparsity pattern is an undirected graph, and a simultaneous
//! row/column permutation is a [`Labeling`] of its vertices. The crate
//! provides Matrix Market I/O, exact and heuristic solvers (Cuthill-McKee,
//! a hybrid genetic algorithm, two hybrid ant colony systems and a tabular
//! SARSA model) and a seeded benchmark harness.

pub mod acs;
pub mod cm;
mod error;
pub mod fetch;
pub mod ga;
pub mod generate;
pub mod graph;
pub mod harness;
mod instance;
mod labeling;
pub mod local_search;
pub mod mtx;
pub mod oracle;
pub mod rl;

pub use error::{Error, ParseError, Result};
pub use graph::{bandwidth, LevelStructure};
pub use instance::Instance;
pub use labeling::Labeling;

/// Outcome of one solver run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub labeling: Labeling,
    pub bandwidth: usize,
    /// Best bandwidth so far after each generation or iteration; the first
    /// entry is the starting value.
    pub history: Vec<usize>,
}

impl RunResult {
    pub fn new(labeling: Labeling, bandwidth: usize, history: Vec<usize>) -> Self {
        RunResult {
            labeling,
            bandwidth,
            history,
        }
    }
}
