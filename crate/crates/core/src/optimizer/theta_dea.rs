use rand::seq::SliceRandom;
use rand::Rng;

use super::variation::{initial_population, vary};
use super::{
    cluster_to_reference, das_dennis_points, direction_theta, fast_nondominated_sort, normalize, optimize,
    theta_fitness, theta_levels, Encoding, Individual, NormalizationAnchors, Observer, OptimizerError,
    ParetoArchive, ReferencePointSet,
};
use crate::casedata::{Algorithm, RunConfig};
use crate::model::{DispatchCase, IntervalProblem};

/// Select `target` members of `combined` by θ-non-domination levels.
///
/// Pareto levels are first accumulated until they hold at least `target`
/// members; the anchors are updated from that pool, members are clustered to
/// their nearest reference line and ranked by θ-fitness inside each cluster.
/// Whole θ-levels are then taken in order and the level that overflows is
/// shuffled and truncated. Selected members carry their θ-level and fitness.
pub fn environmental_selection<R: Rng + ?Sized>(
    combined: Vec<Individual>,
    refs: &ReferencePointSet,
    theta: f64,
    target: usize,
    anchors: &mut NormalizationAnchors,
    rng: &mut R,
) -> Vec<Individual> {
    let objectives: Vec<[f64; 2]> = combined.iter().map(|i| i.objectives).collect();
    let fronts = fast_nondominated_sort(&objectives);
    anchors.update_ideal(&objectives);
    if let Some(first) = fronts.first() {
        anchors.set_nadir(first.iter().map(|&i| &objectives[i]));
    }

    let mut pool: Vec<usize> = Vec::new();
    for front in &fronts {
        if pool.len() >= target {
            break;
        }
        pool.extend(front);
    }

    let normalized: Vec<[f64; 2]> = pool.iter().map(|&i| normalize(&objectives[i], anchors).0).collect();
    let clusters = cluster_to_reference(&normalized, refs);
    let fitness: Vec<f64> = normalized
        .iter()
        .zip(&clusters)
        .map(|(f, &c)| {
            let lambda = &refs.points()[c];
            theta_fitness(f, lambda, direction_theta(lambda, theta))
        })
        .collect();
    let levels = theta_levels(&clusters, &fitness);

    let max_level = levels.iter().copied().max().unwrap_or(0);
    let mut by_level: Vec<Vec<usize>> = vec![Vec::new(); max_level + 1];
    for (slot, &l) in levels.iter().enumerate() {
        by_level[l].push(slot);
    }

    let mut chosen: Vec<usize> = Vec::with_capacity(target);
    for mut members in by_level {
        if chosen.len() + members.len() < target {
            chosen.extend(members);
            continue;
        }
        members.shuffle(rng);
        chosen.extend(members.into_iter().take(target - chosen.len()));
        break;
    }
    chosen.sort_unstable();

    let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
    chosen
        .into_iter()
        .map(|slot| {
            let mut ind = slots[pool[slot]].take().expect("each member is selected once");
            ind.rank = levels[slot];
            ind.fitness = fitness[slot];
            ind.cluster = Some(clusters[slot]);
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
    let refs = das_dennis_points(config.divisions(), 2)?;
    let encoding = Encoding::new(problem);
    let n = config.population_size;
    let mut anchors = NormalizationAnchors::empty();
    let initial = initial_population(&encoding, problem, n, rng)?;
    let mut population = environmental_selection(initial, &refs, config.theta, n, &mut anchors, rng);
    observer(0, &population);
    for iteration in 1..=config.max_iterations {
        let children = vary(&population, &encoding, problem, &config.variation, rng)?;
        population.extend(children);
        population = environmental_selection(population, &refs, config.theta, n, &mut anchors, rng);
        observer(iteration, &population);
    }
    Ok(ParetoArchive::from_population(&population, anchors, config.max_iterations))
}

/// Run θ-DEA on the first interval of `case`.
pub fn run_theta_dea(case: &DispatchCase, config: &RunConfig) -> Result<ParetoArchive, OptimizerError> {
    let config = config.clone().with_algorithm(Algorithm::ThetaDea);
    optimize(&IntervalProblem::new(case, 0)?, &config)
}
