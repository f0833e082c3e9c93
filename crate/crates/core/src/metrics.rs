//! Front quality indicators and the multi-run comparison harness.

use std::fmt::Write;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::casedata::RunConfig;
use crate::model::DispatchCase;
use crate::optimizer::{dominates, optimize_case, OptimizerError, ParetoArchive};

#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("front needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("{algorithm} run with seed {seed} failed: {source}")]
    Run {
        algorithm: String,
        seed: u64,
        #[source]
        source: OptimizerError,
    },
}

fn distance(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Mean distance from each reference point to its nearest front point.
pub fn igd(reference: &[[f64; 2]], front: &[[f64; 2]]) -> Result<f64, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::Empty("reference set"));
    }
    if front.is_empty() {
        return Err(MetricError::Empty("front"));
    }
    let total: f64 = reference
        .iter()
        .map(|g| front.iter().map(|a| distance(g, a)).fold(f64::INFINITY, f64::min))
        .sum();
    Ok(total / reference.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpreadValue {
    pub value: f64,
    /// All consecutive gaps were zero; the value is defined as 0.
    pub degenerate: bool,
}

/// Spread of a front against two extreme points. The front is ordered by
/// the first objective before the consecutive gaps are taken.
pub fn spread(front: &[[f64; 2]], extremes: [[f64; 2]; 2]) -> Result<SpreadValue, MetricError> {
    if front.len() < 2 {
        return Err(MetricError::TooFewPoints(front.len()));
    }
    let mut sorted = front.to_vec();
    sorted.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let gaps: Vec<f64> = sorted.windows(2).map(|w| distance(&w[0], &w[1])).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    if mean == 0.0 {
        return Ok(SpreadValue { value: 0.0, degenerate: true });
    }
    let d1 = distance(&sorted[0], &extremes[0]);
    let d2 = distance(&sorted[sorted.len() - 1], &extremes[1]);
    let deviation: f64 = gaps.iter().map(|g| (g - mean).abs()).sum();
    let value = (d1 + d2 + deviation) / (d1 + d2 + (sorted.len() - 1) as f64 * mean);
    Ok(SpreadValue { value, degenerate: false })
}

/// Nondominated subset of the union of `fronts`, without duplicates, sorted
/// by the first objective.
pub fn pooled_reference_front(fronts: &[Vec<[f64; 2]>]) -> Vec<[f64; 2]> {
    let mut all: Vec<[f64; 2]> = fronts.iter().flatten().copied().collect();
    all.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    all.dedup();
    all.iter().filter(|p| !all.iter().any(|q| dominates(q, *p))).copied().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub average: f64,
    pub best: f64,
    pub worst: f64,
}

impl Summary {
    /// Aggregates of a minimized indicator (best = minimum).
    pub fn of(values: &[f64]) -> Self {
        let n = values.len().max(1) as f64;
        Self {
            average: values.iter().sum::<f64>() / n,
            best: values.iter().copied().fold(f64::INFINITY, f64::min),
            worst: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AlgorithmMetrics {
    pub algorithm: String,
    pub seeds: Vec<u64>,
    pub igd: Vec<f64>,
    pub spread: Vec<f64>,
    pub igd_summary: Summary,
    pub spread_summary: Summary,
    pub archives: Vec<ParetoArchive>,
}

#[derive(Debug, Clone)]
pub struct MetricReport {
    pub algorithms: Vec<AlgorithmMetrics>,
    pub reference_front: Vec<[f64; 2]>,
}

impl MetricReport {
    pub fn get(&self, algorithm: &str) -> Option<&AlgorithmMetrics> {
        self.algorithms.iter().find(|a| a.algorithm == algorithm)
    }

    /// `metric,statistic,<algorithm>...` with average, best and worst rows
    /// for IGD and Spread.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,statistic");
        for a in &self.algorithms {
            write!(out, ",{}", a.algorithm).unwrap();
        }
        out.push('\n');
        let rows: [(&str, &str, fn(&AlgorithmMetrics) -> f64); 6] = [
            ("igd", "average", |a| a.igd_summary.average),
            ("igd", "best", |a| a.igd_summary.best),
            ("igd", "worst", |a| a.igd_summary.worst),
            ("spread", "average", |a| a.spread_summary.average),
            ("spread", "best", |a| a.spread_summary.best),
            ("spread", "worst", |a| a.spread_summary.worst),
        ];
        for (metric, stat, f) in rows {
            write!(out, "{metric},{stat}").unwrap();
            for a in &self.algorithms {
                write!(out, ",{}", f(a)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// One row per run: `algorithm,run,seed,igd,spread,front_size`.
    pub fn runs_csv(&self) -> String {
        let mut out = String::from("algorithm,run,seed,igd,spread,front_size\n");
        for a in &self.algorithms {
            for (r, seed) in a.seeds.iter().enumerate() {
                writeln!(out, "{},{},{},{},{},{}", a.algorithm, r + 1, seed, a.igd[r], a.spread[r], a.archives[r].len())
                    .unwrap();
            }
        }
        out
    }
}

/// `n` run seeds derived from `master`.
pub fn derive_seeds(master: u64, n: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..n).map(|_| rng.next_u64()).collect()
}

/// Run every config `n_runs` times with paired seeds derived from
/// `master_seed`, then score each run's front against the pooled front.
pub fn multi_run_report(
    case: &DispatchCase,
    configs: &[RunConfig],
    n_runs: usize,
    master_seed: u64,
) -> Result<MetricReport, MetricError> {
    if configs.is_empty() {
        return Err(MetricError::Empty("configs"));
    }
    if n_runs == 0 {
        return Err(MetricError::Empty("runs"));
    }
    let seeds = derive_seeds(master_seed, n_runs);
    let jobs: Vec<(usize, u64)> = (0..configs.len()).flat_map(|c| seeds.iter().map(move |&s| (c, s))).collect();
    let archives: Vec<ParetoArchive> = jobs
        .par_iter()
        .map(|&(c, seed)| {
            optimize_case(case, &configs[c].clone().with_seed(seed)).map_err(|source| MetricError::Run {
                algorithm: configs[c].algorithm.label().to_string(),
                seed,
                source,
            })
        })
        .collect::<Result<_, _>>()?;

    let fronts: Vec<Vec<[f64; 2]>> = archives.iter().map(ParetoArchive::front).collect();
    let reference = pooled_reference_front(&fronts);
    let extremes = [reference[0], reference[reference.len() - 1]];

    let mut algorithms = Vec::with_capacity(configs.len());
    let mut archives = archives.into_iter();
    for (c, config) in configs.iter().enumerate() {
        let runs: Vec<ParetoArchive> = archives.by_ref().take(n_runs).collect();
        let mut igds = Vec::with_capacity(n_runs);
        let mut spreads = Vec::with_capacity(n_runs);
        for (r, archive) in runs.iter().enumerate() {
            let front = &fronts[c * n_runs + r];
            igds.push(igd(&reference, front)?);
            let s = if front.len() < 2 { SpreadValue { value: 1.0, degenerate: true } } else { spread(front, extremes)? };
            spreads.push(s.value);
            debug_assert_eq!(archive.len(), front.len());
        }
        algorithms.push(AlgorithmMetrics {
            algorithm: config.algorithm.label().to_string(),
            seeds: seeds.clone(),
            igd_summary: Summary::of(&igds),
            spread_summary: Summary::of(&spreads),
            igd: igds,
            spread: spreads,
            archives: runs,
        });
    }
    Ok(MetricReport { algorithms, reference_front: reference })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn igd_examples() {
        assert_eq!(igd(&[[0.0, 0.0], [1.0, 1.0]], &[[0.0, 0.0], [1.0, 1.0]]).unwrap(), 0.0);
        let v = igd(&[[0.0, 0.0], [1.0, 1.0]], &[[0.0, 0.0]]).unwrap();
        assert!((v - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-15);
        assert!(igd(&[], &[[0.0, 0.0]]).is_err());
    }

    #[test]
    fn spread_examples() {
        let even = [[0.0, 2.0], [1.0, 1.0], [2.0, 0.0]];
        assert_eq!(spread(&even, [[0.0, 2.0], [2.0, 0.0]]).unwrap().value, 0.0);
        let uneven = [[0.0, 0.0], [1.0, 0.0], [4.0, 0.0]];
        assert_eq!(spread(&uneven, [[0.0, 0.0], [4.0, 0.0]]).unwrap().value, 0.5);
        let same = [[1.0, 1.0], [1.0, 1.0]];
        assert!(spread(&same, [[0.0, 0.0], [2.0, 2.0]]).unwrap().degenerate);
    }

    #[test]
    fn pooled_front_drops_dominated() {
        let a = vec![[1.0, 3.0], [2.0, 2.0]];
        let b = vec![[3.0, 1.0], [2.5, 2.5], [1.0, 3.0]];
        assert_eq!(pooled_reference_front(&[a, b]), vec![[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]]);
    }

    #[test]
    fn summary_orders() {
        let s = Summary::of(&[3.0, 1.0, 2.0]);
        assert_eq!((s.best, s.average, s.worst), (1.0, 2.0, 3.0));
    }
}
