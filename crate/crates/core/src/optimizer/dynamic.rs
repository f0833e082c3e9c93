use super::{check_config, optimize, OptimizerError, ParetoArchive};
use crate::casedata::RunConfig;
use crate::decision::{select_bcs, BcsReport};
use crate::model::{check_ramp, Dispatch, DispatchCase, DispatchSolution, IntervalProblem, RampReport};

#[derive(Debug, Clone)]
pub struct IntervalResult {
    pub interval: usize,
    pub archive: ParetoArchive,
    pub report: BcsReport,
    /// Compromise solution carried into the next interval.
    pub chosen: DispatchSolution,
}

/// A time-ordered schedule that always follows compromise `label`.
#[derive(Debug, Clone)]
pub struct DynamicChain {
    pub label: usize,
    pub intervals: Vec<IntervalResult>,
    pub ramp: RampReport,
}

impl DynamicChain {
    pub fn schedule(&self) -> Vec<Dispatch> {
        self.intervals.iter().map(|r| r.chosen.dispatch.clone()).collect()
    }

    pub fn total_cost(&self) -> f64 {
        self.intervals.iter().map(|r| r.chosen.cost).sum()
    }

    pub fn total_emission(&self) -> f64 {
        self.intervals.iter().map(|r| r.chosen.emission).sum()
    }
}

#[derive(Debug, Clone)]
pub struct DynamicResult {
    pub chains: Vec<DynamicChain>,
}

fn interval_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_add((t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn solve_interval(
    problem: &IntervalProblem<'_>,
    config: &RunConfig,
    label: usize,
) -> Result<IntervalResult, OptimizerError> {
    let config = config.clone().with_seed(interval_seed(config.seed, problem.interval));
    let archive = optimize(problem, &config)?;
    let report = select_bcs(archive.solutions(), &config)?;
    let chosen = report.bcs(label).or_else(|| report.bcs(1)).expect("reports have a first cluster").clone();
    Ok(IntervalResult { interval: problem.interval, archive, report, chosen })
}

/// Solve every interval in time order, narrowing power-only bounds to the
/// ramp window around the previous interval's compromise. One chain is
/// produced per compromise label; the first interval is shared.
pub fn solve_dynamic(case: &DispatchCase, config: &RunConfig) -> Result<DynamicResult, OptimizerError> {
    check_config(config)?;
    let n_labels = config.fcm.n_clusters.max(1);
    let first = solve_interval(&IntervalProblem::new(case, 0)?, config, 1)?;
    let mut chains = Vec::with_capacity(n_labels);
    for label in 1..=n_labels {
        let mut start = first.clone();
        if let Some(c) = start.report.bcs(label) {
            start.chosen = c.clone();
        }
        let mut intervals = vec![start];
        for t in 1..case.n_intervals() {
            let previous = &intervals[t - 1].chosen.dispatch;
            let problem = IntervalProblem::new(case, t)?.with_ramp_window(previous);
            intervals.push(solve_interval(&problem, config, label)?);
        }
        let schedule: Vec<Dispatch> = intervals.iter().map(|r| r.chosen.dispatch.clone()).collect();
        let ramp = check_ramp(case, &schedule)?;
        chains.push(DynamicChain { label, intervals, ramp });
    }
    Ok(DynamicResult { chains })
}
