use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DecisionError;
use crate::casedata::FcmConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct FcmResult {
    /// `membership[i][j]`: degree of point `i` in cluster `j`.
    pub membership: Vec<Vec<f64>>,
    pub centers: Vec<Vec<f64>>,
    /// Final objective `J`.
    pub loss: f64,
    pub iterations: usize,
    /// `J` after each center update.
    pub loss_history: Vec<f64>,
}

impl FcmResult {
    /// Hard assignment by largest membership, ties to the lower cluster index.
    pub fn assignments(&self) -> Vec<usize> {
        self.membership
            .iter()
            .map(|row| {
                let mut best = 0;
                for (j, &u) in row.iter().enumerate() {
                    if u > row[best] {
                        best = j;
                    }
                }
                best
            })
            .collect()
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn centers_from(points: &[Vec<f64>], u: &[Vec<f64>], m: f64) -> Vec<Vec<f64>> {
    let c = u[0].len();
    let dim = points[0].len();
    (0..c)
        .map(|j| {
            let mut num = vec![0.0; dim];
            let mut den = 0.0;
            for (x, row) in points.iter().zip(u) {
                let w = row[j].powf(m);
                den += w;
                for (n, v) in num.iter_mut().zip(x) {
                    *n += w * v;
                }
            }
            if den > 0.0 {
                num.iter().map(|n| n / den).collect()
            } else {
                points[0].clone()
            }
        })
        .collect()
}

fn memberships_from(points: &[Vec<f64>], centers: &[Vec<f64>], m: f64) -> Vec<Vec<f64>> {
    let exponent = 1.0 / (m - 1.0);
    points
        .iter()
        .map(|x| {
            let d: Vec<f64> = centers.iter().map(|v| dist2(x, v)).collect();
            let zeros = d.iter().filter(|&&di| di == 0.0).count();
            if zeros > 0 {
                return d.iter().map(|&di| if di == 0.0 { 1.0 / zeros as f64 } else { 0.0 }).collect();
            }
            d.iter()
                .map(|&dj| 1.0 / d.iter().map(|&dk| (dj / dk).powf(exponent)).sum::<f64>())
                .collect()
        })
        .collect()
}

fn loss(points: &[Vec<f64>], u: &[Vec<f64>], centers: &[Vec<f64>], m: f64) -> f64 {
    points
        .iter()
        .zip(u)
        .map(|(x, row)| row.iter().zip(centers).map(|(&uij, v)| uij.powf(m) * dist2(x, v)).sum::<f64>())
        .sum()
}

fn iterate(points: &[Vec<f64>], mut u: Vec<Vec<f64>>, config: &FcmConfig) -> FcmResult {
    let m = config.fuzziness;
    let mut history = Vec::new();
    let mut centers = centers_from(points, &u, m);
    let mut iterations = 0;
    while iterations < config.max_iter.max(1) {
        iterations += 1;
        centers = centers_from(points, &u, m);
        let j = loss(points, &u, &centers, m);
        let previous = history.last().copied();
        history.push(j);
        u = memberships_from(points, &centers, m);
        if previous.is_some_and(|p: f64| (j - p).abs() < config.epsilon) {
            break;
        }
    }
    let final_loss = loss(points, &u, &centers, m);
    FcmResult { membership: u, centers, loss: final_loss, iterations, loss_history: history }
}

/// Fuzzy c-means on `points`. The best of a seeded random start and a start
/// from centers spread over the extremes of the first coordinate is kept.
pub fn fcm_cluster(points: &[Vec<f64>], config: &FcmConfig, seed: u64) -> Result<FcmResult, DecisionError> {
    let c = config.n_clusters;
    if c == 0 || points.len() < c {
        return Err(DecisionError::Degenerate(format!(
            "{} points cannot form {c} clusters",
            points.len()
        )));
    }
    if points.iter().any(|p| p.iter().any(|v| !v.is_finite())) {
        return Err(DecisionError::Degenerate("non-finite point".into()));
    }
    if !(config.fuzziness > 1.0) {
        return Err(DecisionError::Parameter("fuzziness must exceed 1".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_u: Vec<Vec<f64>> = points
        .iter()
        .map(|_| {
            let raw: Vec<f64> = (0..c).map(|_| rng.random::<f64>() + 1e-12).collect();
            let s: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / s).collect()
        })
        .collect();
    let first = iterate(points, random_u, config);

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]).then(a.cmp(&b)));
    let extreme_centers: Vec<Vec<f64>> = (0..c)
        .map(|j| {
            let pos = if c == 1 { 0 } else { j * (points.len() - 1) / (c - 1) };
            points[order[pos]].clone()
        })
        .collect();
    let second = iterate(points, memberships_from(points, &extreme_centers, config.fuzziness), config);

    Ok(if second.loss < first.loss { second } else { first })
}
