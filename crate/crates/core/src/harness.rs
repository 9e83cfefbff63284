//! Seeded multi-run benchmark suite and comparison with the published table.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acs::{self, AcsConfig};
use crate::cm::{self, Root};
use crate::error::Result;
use crate::ga::{self, GaConfig};
use crate::graph::bandwidth;
use crate::instance::Instance;
use crate::labeling::Labeling;
use crate::rl::{self, RlConfig};
use crate::RunResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Cm,
    Rcm,
    /// Cuthill-McKee from every root, best kept.
    CmBest,
    Acs,
    Macs,
    Ga1,
    Ga2,
    Rl,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Cm,
        Algorithm::Rcm,
        Algorithm::CmBest,
        Algorithm::Acs,
        Algorithm::Macs,
        Algorithm::Ga1,
        Algorithm::Ga2,
        Algorithm::Rl,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Cm => "cm",
            Algorithm::Rcm => "rcm",
            Algorithm::CmBest => "cm-best",
            Algorithm::Acs => "acs",
            Algorithm::Macs => "macs",
            Algorithm::Ga1 => "ga1",
            Algorithm::Ga2 => "ga2",
            Algorithm::Rl => "rl",
        }
    }

    pub fn is_deterministic(self) -> bool {
        matches!(self, Algorithm::Cm | Algorithm::Rcm | Algorithm::CmBest)
    }

    /// Runs per instance when the caller does not say: 20 for the ant
    /// systems, 10 for the GA and RL, 1 for the deterministic orderings.
    pub fn default_runs(self) -> usize {
        match self {
            Algorithm::Acs | Algorithm::Macs => 20,
            Algorithm::Ga1 | Algorithm::Ga2 | Algorithm::Rl => 10,
            Algorithm::Cm | Algorithm::Rcm | Algorithm::CmBest => 1,
        }
    }

    /// One run with default parameters.
    pub fn run(self, inst: &Instance, seed: u64) -> Result<RunResult> {
        let finish = |lab: Labeling| -> Result<RunResult> {
            let bw = bandwidth(inst, &lab)?;
            Ok(RunResult::new(lab, bw, vec![bw]))
        };
        match self {
            Algorithm::Cm => finish(cm::cuthill_mckee(inst, Root::Auto)?),
            Algorithm::Rcm => finish(cm::reverse_cuthill_mckee(inst, Root::Auto)?),
            Algorithm::CmBest => finish(cm::best_root_cuthill_mckee(inst)?.0),
            Algorithm::Acs => acs::solve(inst, &AcsConfig::hacs(seed)),
            Algorithm::Macs => acs::solve(inst, &AcsConfig::hmacs(seed)),
            Algorithm::Ga1 => ga::evolve(inst, &GaConfig::ga1(seed)),
            Algorithm::Ga2 => ga::evolve(inst, &GaConfig::ga2(seed)),
            Algorithm::Rl => {
                let q = rl::train_sarsa(inst, &RlConfig::with_seed(seed))?;
                finish(rl::extract_greedy(&q, inst.n()))
            }
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .or(match s.as_str() {
                "hacs" => Some(Algorithm::Acs),
                "hmacs" => Some(Algorithm::Macs),
                _ => None,
            })
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub beta: Option<usize>,
    pub wall_ms: f64,
    /// Best bandwidth after each generation or iteration.
    pub history: Vec<usize>,
    pub error: Option<String>,
}

/// All runs of one algorithm on one instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance: String,
    pub algorithm: Algorithm,
    /// Seed of the run that produced `best_labeling`.
    pub seed: Option<u64>,
    /// 1-based.
    pub best_labeling: Option<Vec<usize>>,
    pub best_beta: Option<usize>,
    pub runs: Vec<RunRecord>,
}

impl SolveReport {
    pub fn betas(&self) -> Vec<usize> {
        self.runs.iter().filter_map(|r| r.beta).collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.betas().into_iter().min()
    }

    pub fn max(&self) -> Option<usize> {
        self.betas().into_iter().max()
    }

    pub fn mean(&self) -> Option<f64> {
        let b = self.betas();
        (!b.is_empty()).then(|| b.iter().sum::<usize>() as f64 / b.len() as f64)
    }

    pub fn failures(&self) -> usize {
        self.runs.iter().filter(|r| r.error.is_some()).count()
    }

    /// Recomputes the bandwidth of the stored best labeling.
    pub fn revalidate(&self, inst: &Instance) -> Result<bool> {
        match (&self.best_labeling, self.best_beta) {
            (Some(lab), Some(beta)) => {
                let lab = Labeling::from_one_based(lab)?;
                Ok(bandwidth(inst, &lab)? == beta)
            }
            (None, None) => Ok(true),
            _ => Ok(false),
        }
    }
}

/// Runs `algo` on `inst` once per seed.
pub fn run_cell(inst: &Instance, algo: Algorithm, seeds: &[u64]) -> SolveReport {
    let mut runs = Vec::with_capacity(seeds.len());
    let mut best: Option<(usize, u64, Labeling)> = None;
    for &seed in seeds {
        let start = Instant::now();
        let out = algo.run(inst, seed);
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        match out {
            Ok(r) => {
                if best.as_ref().is_none_or(|b| r.bandwidth < b.0) {
                    best = Some((r.bandwidth, seed, r.labeling.clone()));
                }
                runs.push(RunRecord {
                    seed,
                    beta: Some(r.bandwidth),
                    wall_ms,
                    history: r.history,
                    error: None,
                });
            }
            Err(e) => runs.push(RunRecord {
                seed,
                beta: None,
                wall_ms,
                history: Vec::new(),
                error: Some(e.to_string()),
            }),
        }
    }
    SolveReport {
        instance: inst.name().to_string(),
        algorithm: algo,
        seed: best.as_ref().map(|b| b.1),
        best_beta: best.as_ref().map(|b| b.0),
        best_labeling: best.map(|b| b.2.to_one_based()),
        runs,
    }
}

/// Seeds for an algorithm: deterministic ones get a single run, the others
/// `runs` (or their default) drawn from the front of `seeds`, or `1..=runs`
/// when no seeds are given.
pub fn seeds_for(algo: Algorithm, runs: Option<usize>, seeds: &[u64]) -> Vec<u64> {
    let want = if algo.is_deterministic() {
        1
    } else {
        runs.unwrap_or_else(|| algo.default_runs()).max(1)
    };
    if seeds.is_empty() {
        (1..=want as u64).collect()
    } else {
        seeds.iter().copied().take(want).collect()
    }
}

/// Every `(instance, algorithm)` cell, in input order. Cells run in
/// parallel on the current rayon pool; each cell is sequential over its
/// seeds, so the output depends only on the inputs.
pub fn run_suite(
    instances: &[Instance],
    algorithms: &[Algorithm],
    runs_per_algo: Option<usize>,
    seeds: &[u64],
) -> Vec<SolveReport> {
    let cells: Vec<(&Instance, Algorithm)> = instances
        .iter()
        .flat_map(|i| algorithms.iter().map(move |&a| (i, a)))
        .collect();
    cells
        .into_par_iter()
        .map(|(inst, algo)| run_cell(inst, algo, &seeds_for(algo, runs_per_algo, seeds)))
        .collect()
}

/// Published best bandwidths per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub instance: &'static str,
    pub cm: usize,
    pub acs: usize,
    pub macs: usize,
    pub ga1: usize,
    pub ga2: usize,
}

impl ReferenceRow {
    pub fn get(&self, algo: Algorithm) -> Option<usize> {
        match algo {
            Algorithm::Cm => Some(self.cm),
            Algorithm::Acs => Some(self.acs),
            Algorithm::Macs => Some(self.macs),
            Algorithm::Ga1 => Some(self.ga1),
            Algorithm::Ga2 => Some(self.ga2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReferenceTable {
    pub rows: Vec<ReferenceRow>,
}

const fn row(instance: &'static str, cm: usize, acs: usize, macs: usize, ga1: usize, ga2: usize) -> ReferenceRow {
    ReferenceRow {
        instance,
        cm,
        acs,
        macs,
        ga1,
        ga2,
    }
}

impl ReferenceTable {
    /// CM, hACS, hMACS, GA1 and GA2 on the nine `can_*` instances.
    pub fn table2() -> Self {
        ReferenceTable {
            rows: vec![
                row("can_24", 8, 14, 11, 6, 6),
                row("can_61", 26, 43, 42, 19, 19),
                row("can_62", 9, 20, 12, 8, 8),
                row("can_73", 27, 28, 22, 22, 23),
                row("can_96", 23, 17, 17, 25, 25),
                row("can_187", 23, 63, 33, 53, 51),
                row("can_229", 49, 120, 120, 63, 63),
                row("can_256", 116, 148, 189, 91, 91),
                row("can_268", 134, 165, 210, 90, 90),
            ],
        }
    }

    pub fn row(&self, instance: &str) -> Option<&ReferenceRow> {
        self.rows.iter().find(|r| r.instance == instance)
    }

    pub fn get(&self, instance: &str, algo: Algorithm) -> Option<usize> {
        self.row(instance)?.get(algo)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellComparison {
    pub instance: String,
    pub algorithm: Algorithm,
    pub reference: usize,
    pub achieved: Option<usize>,
    pub ratio: Option<f64>,
    pub pass: bool,
    /// Strictly better than the published value.
    pub improves: bool,
    /// Whether the cell counts toward the exit status. Cuthill-McKee cells
    /// are informational.
    pub gating: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub passed: usize,
    pub compared: usize,
    pub missing: usize,
    pub improves: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub tolerance: f64,
    pub cells: Vec<CellComparison>,
    pub summary: Vec<AlgorithmSummary>,
    /// Reported `(instance, algorithm)` pairs with no reference value.
    pub unreferenced: Vec<(String, Algorithm)>,
}

impl Comparison {
    pub fn gating_failures(&self) -> usize {
        self.cells.iter().filter(|c| c.gating && !c.pass).count()
    }

    pub fn summary_for(&self, algo: Algorithm) -> Option<&AlgorithmSummary> {
        self.summary.iter().find(|s| s.algorithm == algo)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["instance", "algorithm", "reference", "achieved", "ratio", "pass", "improves", "gating"])?;
        for c in &self.cells {
            out.write_record([
                c.instance.clone(),
                c.algorithm.to_string(),
                c.reference.to_string(),
                c.achieved.map(|a| a.to_string()).unwrap_or_default(),
                c.ratio.map(|r| format!("{r:.4}")).unwrap_or_default(),
                c.pass.to_string(),
                c.improves.to_string(),
                c.gating.to_string(),
            ])?;
        }
        out.flush().map_err(|e| crate::Error::io("csv output", e))?;
        Ok(())
    }
}

/// Compares each report's best bandwidth with the reference cell for its
/// `(instance, algorithm)`. A cell passes when
/// `achieved <= reference * (1 + tolerance)`; Cuthill-McKee cells pass only
/// on an exact match or better and never gate. Reference cells without a
/// report are listed with `achieved = None` and fail.
pub fn compare_to_reference(reports: &[SolveReport], reference: &ReferenceTable, tolerance: f64) -> Comparison {
    let mut cells = Vec::new();
    let mut unreferenced = Vec::new();
    let mut algos: Vec<Algorithm> = reports.iter().map(|r| r.algorithm).collect();
    algos.sort();
    algos.dedup();
    let instances: Vec<&str> = {
        let mut seen: Vec<&str> = Vec::new();
        for r in reports {
            if !seen.contains(&r.instance.as_str()) {
                seen.push(&r.instance);
            }
        }
        seen
    };

    for r in reports {
        if reference.get(&r.instance, r.algorithm).is_none() {
            unreferenced.push((r.instance.clone(), r.algorithm));
        }
    }

    for &algo in &algos {
        for reference_row in &reference.rows {
            let Some(refv) = reference_row.get(algo) else { continue };
            let report = reports
                .iter()
                .find(|r| r.algorithm == algo && r.instance == reference_row.instance);
            if report.is_none() && !instances.contains(&reference_row.instance) {
                // instance not part of this suite at all
                continue;
            }
            let achieved = report.and_then(|r| r.best_beta);
            let gating = algo != Algorithm::Cm;
            let limit = if gating {
                refv as f64 * (1.0 + tolerance)
            } else {
                refv as f64
            };
            let pass = achieved.is_some_and(|a| a as f64 <= limit + 1e-9);
            cells.push(CellComparison {
                instance: reference_row.instance.to_string(),
                algorithm: algo,
                reference: refv,
                achieved,
                ratio: achieved.map(|a| a as f64 / refv as f64),
                pass,
                improves: achieved.is_some_and(|a| a < refv),
                gating,
            });
        }
    }

    let summary = algos
        .iter()
        .filter(|&&a| cells.iter().any(|c| c.algorithm == a))
        .map(|&a| {
            let cs: Vec<&CellComparison> = cells.iter().filter(|c| c.algorithm == a).collect();
            AlgorithmSummary {
                algorithm: a,
                passed: cs.iter().filter(|c| c.pass).count(),
                compared: cs.iter().filter(|c| c.achieved.is_some()).count(),
                missing: cs.iter().filter(|c| c.achieved.is_none()).count(),
                improves: cs.iter().filter(|c| c.improves).count(),
            }
        })
        .collect();

    Comparison {
        tolerance,
        cells,
        summary,
        unreferenced,
    }
}

/// One row per report: the data behind a bar chart of best bandwidths.
pub fn write_reports_csv<W: Write>(reports: &[SolveReport], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["instance", "algorithm", "runs", "failures", "best", "mean", "worst", "best_seed", "mean_wall_ms"])?;
    for r in reports {
        let wall = if r.runs.is_empty() {
            0.0
        } else {
            r.runs.iter().map(|x| x.wall_ms).sum::<f64>() / r.runs.len() as f64
        };
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        out.write_record([
            r.instance.clone(),
            r.algorithm.to_string(),
            r.runs.len().to_string(),
            r.failures().to_string(),
            opt(r.min()),
            r.mean().map(|m| format!("{m:.3}")).unwrap_or_default(),
            opt(r.max()),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            format!("{wall:.3}"),
        ])?;
    }
    out.flush().map_err(|e| crate::Error::io("csv output", e))?;
    Ok(())
}
