//! Multi-objective search: θ-DEA with an NSGA-II baseline sharing the same
//! encoding, variation and repair.

mod dynamic;
mod nsga2;
mod reference;
mod sorting;
mod theta;
mod theta_dea;
mod variation;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use dynamic::{solve_dynamic, DynamicChain, DynamicResult, IntervalResult};
pub use nsga2::{nsga2_selection, run_nsga2};
pub use reference::{das_dennis_points, ReferencePointSet};
pub use sorting::{crowding_distance, dominates, fast_nondominated_sort};
pub use theta::{
    cluster_to_reference, direction_theta, line_distances, normalize, theta_dominates, theta_fitness, theta_levels,
    AXIS_THETA, MIN_SPAN,
};
pub use theta_dea::{environmental_selection, run_theta_dea};
pub use variation::{initial_population, polynomial_mutation, sbx_crossover, vary, Encoding};

use crate::casedata::{Algorithm, RunConfig};
use crate::decision::DecisionError;
use crate::model::{DispatchCase, DispatchSolution, IntervalProblem, ModelError};

#[derive(Debug, thiserror::Error)]
pub enum OptimizerError {
    #[error("invalid optimizer parameter: {0}")]
    Parameter(String),
    #[error("case cannot be satisfied: {}", .0.join("; "))]
    InfeasibleCase(Vec<String>),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Decision(#[from] DecisionError),
}

/// Ideal and nadir points used to normalize objectives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationAnchors {
    pub ideal: [f64; 2],
    pub nadir: [f64; 2],
}

impl NormalizationAnchors {
    pub fn empty() -> Self {
        Self { ideal: [f64::INFINITY; 2], nadir: [f64::NEG_INFINITY; 2] }
    }

    /// Lower the ideal to the componentwise minimum seen so far.
    pub fn update_ideal<'a>(&mut self, objectives: impl IntoIterator<Item = &'a [f64; 2]>) {
        for f in objectives {
            for k in 0..2 {
                self.ideal[k] = self.ideal[k].min(f[k]);
            }
        }
    }

    /// Re-estimate the nadir as the componentwise maximum over the first front.
    pub fn set_nadir<'a>(&mut self, first_front: impl IntoIterator<Item = &'a [f64; 2]>) {
        let mut nadir = [f64::NEG_INFINITY; 2];
        for f in first_front {
            for k in 0..2 {
                nadir[k] = nadir[k].max(f[k]);
            }
        }
        for k in 0..2 {
            self.nadir[k] = nadir[k].max(self.ideal[k]);
        }
    }
}

/// A population member: encoded variables plus its evaluated dispatch.
#[derive(Debug, Clone)]
pub struct Individual {
    pub genome: Vec<f64>,
    pub solution: DispatchSolution,
    /// Penalized `(cost, emission)`.
    pub objectives: [f64; 2],
    /// Selection level (θ-level or Pareto rank).
    pub rank: usize,
    /// Secondary selection key, lower is better.
    pub fitness: f64,
    /// Reference cluster when `fitness` is only comparable within a cluster.
    pub cluster: Option<usize>,
}

impl Individual {
    pub fn new(genome: Vec<f64>, solution: DispatchSolution) -> Self {
        let objectives = solution.objectives();
        Self { genome, solution, objectives, rank: 0, fitness: 0.0, cluster: None }
    }

    /// Order by rank, then by fitness when both share a cluster; `None` when incomparable.
    fn selection_order(&self, other: &Individual) -> Option<std::cmp::Ordering> {
        match self.rank.cmp(&other.rank) {
            std::cmp::Ordering::Equal if self.cluster == other.cluster => self.fitness.partial_cmp(&other.fitness),
            std::cmp::Ordering::Equal => None,
            order => Some(order),
        }
    }
}

/// Mutually nondominated solutions returned by a run.
#[derive(Debug, Clone)]
pub struct ParetoArchive {
    solutions: Vec<DispatchSolution>,
    pub anchors: NormalizationAnchors,
    pub iterations: usize,
    /// No feasible member existed, so the archive holds the least-violating front.
    pub infeasible: bool,
}

impl ParetoArchive {
    pub fn new(anchors: NormalizationAnchors, iterations: usize) -> Self {
        Self { solutions: Vec::new(), anchors, iterations, infeasible: false }
    }

    /// Archive of the nondominated feasible members (all members when none is feasible).
    pub fn from_population(population: &[Individual], anchors: NormalizationAnchors, iterations: usize) -> Self {
        let mut archive = Self::new(anchors, iterations);
        let feasible: Vec<&Individual> = population.iter().filter(|i| i.solution.is_feasible()).collect();
        archive.infeasible = feasible.is_empty();
        let pool: Vec<&Individual> = if feasible.is_empty() { population.iter().collect() } else { feasible };
        for ind in pool {
            archive.insert(ind.solution.clone());
        }
        archive
    }

    /// Insert unless dominated by (or equal to) a member; drops members the candidate dominates.
    pub fn insert(&mut self, candidate: DispatchSolution) -> bool {
        let f = candidate.objectives();
        if self.solutions.iter().any(|s| {
            let g = s.objectives();
            dominates(&g, &f) || g == f
        }) {
            return false;
        }
        self.solutions.retain(|s| !dominates(&f, &s.objectives()));
        self.solutions.push(candidate);
        true
    }

    pub fn solutions(&self) -> &[DispatchSolution] {
        &self.solutions
    }

    pub fn into_solutions(self) -> Vec<DispatchSolution> {
        self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Objective vectors sorted by ascending cost.
    pub fn front(&self) -> Vec<[f64; 2]> {
        let mut f: Vec<[f64; 2]> = self.solutions.iter().map(|s| [s.cost, s.emission]).collect();
        f.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        f
    }

    pub fn min_cost(&self) -> Option<&DispatchSolution> {
        self.solutions.iter().min_by(|a, b| a.cost.total_cmp(&b.cost))
    }

    pub fn min_emission(&self) -> Option<&DispatchSolution> {
        self.solutions.iter().min_by(|a, b| a.emission.total_cmp(&b.emission))
    }
}

pub(crate) fn check_config(config: &RunConfig) -> Result<(), OptimizerError> {
    config.validate().map_err(|e| OptimizerError::Parameter(e.to_string()))
}

pub(crate) fn check_problem(problem: &IntervalProblem<'_>) -> Result<(), OptimizerError> {
    let issues = problem.case.infeasibility_within(problem.interval, &problem.power_bounds);
    if issues.is_empty() {
        Ok(())
    } else {
        Err(OptimizerError::InfeasibleCase(issues))
    }
}

/// Observer called with the population after initialization (iteration 0)
/// and after every generation.
pub type Observer<'o> = &'o mut dyn FnMut(usize, &[Individual]);

/// Optimize one interval with the configured algorithm.
pub fn optimize(problem: &IntervalProblem<'_>, config: &RunConfig) -> Result<ParetoArchive, OptimizerError> {
    optimize_observed(problem, config, &mut |_, _| {})
}

pub fn optimize_observed(
    problem: &IntervalProblem<'_>,
    config: &RunConfig,
    observer: Observer<'_>,
) -> Result<ParetoArchive, OptimizerError> {
    check_config(config)?;
    check_problem(problem)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    match config.algorithm {
        Algorithm::ThetaDea => theta_dea::evolve(problem, config, &mut rng, observer),
        Algorithm::Nsga2 => nsga2::evolve(problem, config, &mut rng, observer),
    }
}

/// Optimize the first interval of `case` with the configured algorithm.
pub fn optimize_case(case: &DispatchCase, config: &RunConfig) -> Result<ParetoArchive, OptimizerError> {
    optimize(&IntervalProblem::new(case, 0)?, config)
}
