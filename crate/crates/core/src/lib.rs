//! Combined heat and power economic emission dispatch solved by a
//! reference-point evolutionary algorithm, with fuzzy clustering and grey
//! relational projection to pick best compromise solutions.

pub mod casedata;
pub mod decision;
pub mod metrics;
pub mod model;
pub mod optimizer;

pub use casedata::{load_case, parse_case, Algorithm, RunConfig};
pub use decision::{select_bcs, BcsReport};
pub use model::{Dispatch, DispatchCase, DispatchSolution};
pub use optimizer::{optimize, optimize_case, run_nsga2, run_theta_dea, solve_dynamic, ParetoArchive};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Case(#[from] casedata::CaseError),
    #[error(transparent)]
    Config(#[from] casedata::ConfigError),
    #[error(transparent)]
    Archive(#[from] casedata::ArchiveError),
    #[error(transparent)]
    Model(#[from] model::ModelError),
    #[error(transparent)]
    Optimizer(#[from] optimizer::OptimizerError),
    #[error(transparent)]
    Decision(#[from] decision::DecisionError),
    #[error(transparent)]
    Metric(#[from] metrics::MetricError),
}

/// Archive and compromise report of one static solve.
#[derive(Debug, Clone)]
pub struct Solved {
    pub archive: ParetoArchive,
    pub report: BcsReport,
}

/// Optimize the first interval and select the compromise solutions.
pub fn solve(case: &DispatchCase, config: &RunConfig) -> Result<Solved, Error> {
    let archive = optimize_case(case, config)?;
    let report = select_bcs(archive.solutions(), config)?;
    Ok(Solved { archive, report })
}
