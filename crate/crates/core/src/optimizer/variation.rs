use rand::Rng;

use super::Individual;
use crate::casedata::VariationConfig;
use crate::model::{balance, Dispatch, HeatSlack, IntervalProblem, ModelError, OperatingPoint};

const SBX_EPS: f64 = 1e-14;
const INIT_REJECTION_TRIES: usize = 200;

/// Maps decision vectors to dispatches. The vector holds every output
/// except the power slack and the heat-only heat slack, which the repair
/// solves from the balances; layout is
/// `[free power-only | CHP power | CHP heat | free heat-only]`.
#[derive(Debug, Clone)]
pub struct Encoding {
    power_free: Vec<usize>,
    power_slack: Option<usize>,
    heat_free: Vec<usize>,
    heat_slack: Option<usize>,
    n_chp: usize,
    bounds: Vec<(f64, f64)>,
}

impl Encoding {
    pub fn new(problem: &IntervalProblem<'_>) -> Self {
        let case = problem.case;
        let power_slack = problem.power_slack();
        let heat_slack = match problem.heat_slack() {
            Some(HeatSlack::HeatOnly(k)) => Some(k),
            _ => None,
        };
        let power_free: Vec<usize> = (0..case.power_units.len()).filter(|&i| Some(i) != power_slack).collect();
        let heat_free: Vec<usize> = (0..case.heat_units.len()).filter(|&k| Some(k) != heat_slack).collect();
        let mut bounds: Vec<(f64, f64)> = power_free.iter().map(|&i| problem.power_bounds[i]).collect();
        let boxes: Vec<_> = case.chp_units.iter().map(|u| u.operating_region.bounding_box()).collect();
        bounds.extend(boxes.iter().map(|(lo, hi)| (lo.power, hi.power)));
        bounds.extend(boxes.iter().map(|(lo, hi)| (lo.heat, hi.heat)));
        bounds.extend(heat_free.iter().map(|&k| (case.heat_units[k].h_min_mwth, case.heat_units[k].h_max_mwth)));
        Self { power_free, power_slack, heat_free, heat_slack, n_chp: case.chp_units.len(), bounds }
    }

    pub fn len(&self) -> usize {
        self.bounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_empty()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Dispatch with slacks at the middle of their ranges, before repair.
    pub fn decode(&self, problem: &IntervalProblem<'_>, genome: &[f64]) -> Dispatch {
        let case = problem.case;
        let mut d = Dispatch::zeros(case);
        let mut it = genome.iter().copied();
        for &i in &self.power_free {
            d.power[i] = it.next().unwrap_or_default();
        }
        for j in 0..self.n_chp {
            d.chp_power[j] = it.next().unwrap_or_default();
        }
        for j in 0..self.n_chp {
            d.chp_heat[j] = it.next().unwrap_or_default();
        }
        for &k in &self.heat_free {
            d.heat[k] = it.next().unwrap_or_default();
        }
        if let Some(s) = self.power_slack {
            let (lo, hi) = problem.power_bounds[s];
            d.power[s] = 0.5 * (lo + hi);
        }
        if let Some(k) = self.heat_slack {
            let u = &case.heat_units[k];
            d.heat[k] = 0.5 * (u.h_min_mwth + u.h_max_mwth);
        }
        d
    }

    pub fn encode(&self, d: &Dispatch) -> Vec<f64> {
        let mut g = Vec::with_capacity(self.len());
        g.extend(self.power_free.iter().map(|&i| d.power[i]));
        g.extend_from_slice(&d.chp_power);
        g.extend_from_slice(&d.chp_heat);
        g.extend(self.heat_free.iter().map(|&k| d.heat[k]));
        g
    }

    /// Clip, repair and evaluate a decision vector; the repaired outputs are
    /// written back into the returned genome.
    pub fn evaluate(&self, problem: &IntervalProblem<'_>, genome: &[f64]) -> Result<Individual, ModelError> {
        let clipped: Vec<f64> = genome.iter().zip(&self.bounds).map(|(&x, &(lo, hi))| x.clamp(lo, hi)).collect();
        let raw = self.decode(problem, &clipped);
        let (repaired, ok) = match balance(problem, raw.clone()) {
            Ok(r) => r,
            Err(ModelError::RepairDiverged { .. }) => (raw, false),
            Err(e) => return Err(e),
        };
        let mut solution = problem.evaluate(repaired)?;
        solution.report.repair_failed = !ok && !solution.report.is_feasible();
        Ok(Individual::new(self.encode(&solution.dispatch), solution))
    }

    /// Uniform random decision vector; cogeneration pairs are drawn inside
    /// their operating regions by rejection from the bounding box.
    pub fn random_genome<R: Rng + ?Sized>(&self, problem: &IntervalProblem<'_>, rng: &mut R) -> Vec<f64> {
        let mut g: Vec<f64> = self.bounds.iter().map(|&(lo, hi)| uniform(rng, lo, hi)).collect();
        let off = self.power_free.len();
        for (j, u) in problem.case.chp_units.iter().enumerate() {
            let region = &u.operating_region;
            let (lo, hi) = region.bounding_box();
            let mut p = OperatingPoint::new(g[off + j], g[off + self.n_chp + j]);
            for _ in 0..INIT_REJECTION_TRIES {
                if region.contains(p) {
                    break;
                }
                p = OperatingPoint::new(uniform(rng, lo.power, hi.power), uniform(rng, lo.heat, hi.heat));
            }
            let p = region.project(p);
            g[off + j] = p.power;
            g[off + self.n_chp + j] = p.heat;
        }
        g
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        lo + (hi - lo) * rng.random::<f64>()
    } else {
        lo
    }
}

/// Bounded simulated binary crossover; each variable is recombined with
/// probability one half.
pub fn sbx_crossover<R: Rng + ?Sized>(
    a: &[f64],
    b: &[f64],
    bounds: &[(f64, f64)],
    eta: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = a.to_vec();
    let mut c2 = b.to_vec();
    for i in 0..a.len() {
        let (lo, hi) = bounds[i];
        if rng.random::<f64>() > 0.5 || (a[i] - b[i]).abs() <= SBX_EPS || hi <= lo {
            continue;
        }
        let (y1, y2) = if a[i] < b[i] { (a[i], b[i]) } else { (b[i], a[i]) };
        let u: f64 = rng.random();
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
        let bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
        let x1 = (0.5 * ((y1 + y2) - bq1 * (y2 - y1))).clamp(lo, hi);
        let x2 = (0.5 * ((y1 + y2) + bq2 * (y2 - y1))).clamp(lo, hi);
        if rng.random::<f64>() <= 0.5 {
            c1[i] = x2;
            c2[i] = x1;
        } else {
            c1[i] = x1;
            c2[i] = x2;
        }
    }
    (c1, c2)
}

/// Bounded polynomial mutation with per-variable probability `probability`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &mut [f64],
    bounds: &[(f64, f64)],
    eta: f64,
    probability: f64,
    rng: &mut R,
) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        if rng.random::<f64>() >= probability || hi <= lo {
            continue;
        }
        let span = hi - lo;
        let d1 = (*v - lo) / span;
        let d2 = (hi - *v) / span;
        let r: f64 = rng.random();
        let pow = 1.0 / (eta + 1.0);
        let dq = if r < 0.5 {
            let val = 2.0 * r + (1.0 - 2.0 * r) * (1.0 - d1).powf(eta + 1.0);
            val.powf(pow) - 1.0
        } else {
            let val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - val.powf(pow)
        };
        *v = (*v + dq * span).clamp(lo, hi);
    }
}

fn tournament<'p, R: Rng + ?Sized>(population: &'p [Individual], rng: &mut R) -> &'p Individual {
    let a = &population[rng.random_range(0..population.len())];
    let b = &population[rng.random_range(0..population.len())];
    match b.selection_order(a) {
        Some(std::cmp::Ordering::Less) => b,
        Some(_) => a,
        None if rng.random::<bool>() => b,
        None => a,
    }
}

/// `population.len()` offspring from binary tournaments, crossover and mutation.
pub fn vary<R: Rng + ?Sized>(
    population: &[Individual],
    encoding: &Encoding,
    problem: &IntervalProblem<'_>,
    variation: &VariationConfig,
    rng: &mut R,
) -> Result<Vec<Individual>, ModelError> {
    let n = population.len();
    let bounds = encoding.bounds();
    let pm = variation.mutation_probability.unwrap_or(1.0 / encoding.len().max(1) as f64);
    let mut genomes = Vec::with_capacity(n + 1);
    while genomes.len() < n {
        let p1 = tournament(population, rng);
        let p2 = tournament(population, rng);
        let (mut c1, mut c2) = if rng.random::<f64>() < variation.crossover_probability {
            sbx_crossover(&p1.genome, &p2.genome, bounds, variation.crossover_eta, rng)
        } else {
            (p1.genome.clone(), p2.genome.clone())
        };
        polynomial_mutation(&mut c1, bounds, variation.mutation_eta, pm, rng);
        polynomial_mutation(&mut c2, bounds, variation.mutation_eta, pm, rng);
        genomes.push(c1);
        genomes.push(c2);
    }
    genomes.truncate(n);
    genomes.iter().map(|g| encoding.evaluate(problem, g)).collect()
}

pub fn initial_population<R: Rng + ?Sized>(
    encoding: &Encoding,
    problem: &IntervalProblem<'_>,
    size: usize,
    rng: &mut R,
) -> Result<Vec<Individual>, ModelError> {
    let genomes: Vec<Vec<f64>> = (0..size).map(|_| encoding.random_genome(problem, rng)).collect();
    genomes.iter().map(|g| encoding.evaluate(problem, g)).collect()
}
