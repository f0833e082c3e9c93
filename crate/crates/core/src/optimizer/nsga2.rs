use rand::Rng;

use super::variation::{initial_population, vary};
use super::{
    crowding_distance, fast_nondominated_sort, optimize, Encoding, Individual, NormalizationAnchors, Observer,
    OptimizerError, ParetoArchive,
};
use crate::casedata::{Algorithm, RunConfig};
use crate::model::{DispatchCase, IntervalProblem};

/// Elitist selection by Pareto rank, breaking the last front by crowding
/// distance. Selected members carry their rank and negated crowding distance.
pub fn nsga2_selection(combined: Vec<Individual>, target: usize) -> Vec<Individual> {
    let objectives: Vec<[f64; 2]> = combined.iter().map(|i| i.objectives).collect();
    let fronts = fast_nondominated_sort(&objectives);
    let mut chosen: Vec<(usize, usize, f64)> = Vec::with_capacity(target);
    for (rank, front) in fronts.iter().enumerate() {
        if chosen.len() >= target {
            break;
        }
        let pts: Vec<[f64; 2]> = front.iter().map(|&i| objectives[i]).collect();
        let crowd = crowding_distance(&pts);
        let mut members: Vec<(usize, f64)> = front.iter().copied().zip(crowd).collect();
        if chosen.len() + members.len() > target {
            members.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            members.truncate(target - chosen.len());
        }
        chosen.extend(members.into_iter().map(|(i, c)| (i, rank, c)));
    }
    chosen.sort_unstable_by_key(|c| c.0);
    let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
    chosen
        .into_iter()
        .map(|(i, rank, crowd)| {
            let mut ind = slots[i].take().expect("each member is selected once");
            ind.rank = rank;
            ind.fitness = -crowd;
            ind
        })
        .collect()
}

pub(crate) fn evolve<R: Rng + ?Sized>(
    problem: &IntervalProblem<'_>,
    config: &RunConfig,
    rng: &mut R,
    observer: Observer<'_>,
) -> Result<ParetoArchive, OptimizerError> {
    let encoding = Encoding::new(problem);
    let n = config.population_size;
    let mut anchors = NormalizationAnchors::empty();
    let track = |anchors: &mut NormalizationAnchors, pop: &[Individual]| {
        let objectives: Vec<[f64; 2]> = pop.iter().map(|i| i.objectives).collect();
        anchors.update_ideal(&objectives);
        if let Some(first) = fast_nondominated_sort(&objectives).first() {
            anchors.set_nadir(first.iter().map(|&i| &objectives[i]));
        }
    };
    let initial = initial_population(&encoding, problem, n, rng)?;
    let mut population = nsga2_selection(initial, n);
    track(&mut anchors, &population);
    observer(0, &population);
    for iteration in 1..=config.max_iterations {
        let children = vary(&population, &encoding, problem, &config.variation, rng)?;
        population.extend(children);
        population = nsga2_selection(population, n);
        track(&mut anchors, &population);
        observer(iteration, &population);
    }
    Ok(ParetoArchive::from_population(&population, anchors, config.max_iterations))
}

/// Run the NSGA-II baseline on the first interval of `case`.
pub fn run_nsga2(case: &DispatchCase, config: &RunConfig) -> Result<ParetoArchive, OptimizerError> {
    let config = config.clone().with_algorithm(Algorithm::Nsga2);
    optimize(&IntervalProblem::new(case, 0)?, &config)
}
