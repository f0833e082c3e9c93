//! θ-dominance machinery: normalization, reference-line clustering and the
//! penalized distance fitness.

use super::{NormalizationAnchors, ReferencePointSet};

/// Smallest anchor span used when the ideal and nadir coincide.
pub const MIN_SPAN: f64 = 1e-12;

/// Penalty used for axis directions, which keeps each objective's extreme
/// solution on its own level.
pub const AXIS_THETA: f64 = 1e6;

/// Normalized objectives and whether a degenerate span was substituted.
pub fn normalize(objectives: &[f64; 2], anchors: &NormalizationAnchors) -> ([f64; 2], bool) {
    let mut flagged = false;
    let mut out = [0.0; 2];
    for k in 0..2 {
        let mut span = anchors.nadir[k] - anchors.ideal[k];
        if !(span > MIN_SPAN) {
            span = MIN_SPAN;
            flagged = true;
        }
        out[k] = ((objectives[k] - anchors.ideal[k]) / span).max(0.0);
    }
    (out, flagged)
}

/// Distance along the reference line and perpendicular distance from it.
pub fn line_distances(f: &[f64], lambda: &[f64]) -> (f64, f64) {
    let norm = lambda.iter().map(|v| v * v).sum::<f64>().sqrt();
    let along: f64 = f.iter().zip(lambda).map(|(a, b)| a * b).sum::<f64>() / norm;
    let perp2: f64 = f
        .iter()
        .zip(lambda)
        .map(|(a, b)| {
            let d = a - along * b / norm;
            d * d
        })
        .sum();
    (along, perp2.sqrt())
}

/// `Dis₁ + θ·Dis₂` with respect to the line through the origin and `lambda`.
pub fn theta_fitness(f_norm: &[f64], lambda: &[f64], theta: f64) -> f64 {
    let (d1, d2) = line_distances(f_norm, lambda);
    d1 + theta * d2
}

/// Effective penalty for a direction: axis directions get [`AXIS_THETA`].
pub fn direction_theta(lambda: &[f64], theta: f64) -> f64 {
    if lambda.iter().filter(|&&v| v != 0.0).count() == 1 {
        AXIS_THETA
    } else {
        theta
    }
}

/// Index of the reference line with the smallest perpendicular distance
/// for each point; ties go to the lowest index.
pub fn cluster_to_reference(points: &[[f64; 2]], refs: &ReferencePointSet) -> Vec<usize> {
    points
        .iter()
        .map(|f| {
            let mut best = (0, f64::INFINITY);
            for (j, lambda) in refs.points().iter().enumerate() {
                let (_, d2) = line_distances(f, lambda);
                if d2 < best.1 {
                    best = (j, d2);
                }
            }
            best.0
        })
        .collect()
}

/// `x1` θ-dominates `x2` iff both sit in the same cluster and `x1` has the
/// strictly smaller fitness for that cluster.
pub fn theta_dominates(cluster1: usize, fitness1: f64, cluster2: usize, fitness2: f64) -> bool {
    cluster1 == cluster2 && fitness1 < fitness2
}

/// θ-non-domination level of each member: its rank by fitness inside its
/// cluster, with equal fitness sharing a level.
pub fn theta_levels(clusters: &[usize], fitness: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..clusters.len()).collect();
    order.sort_by(|&a, &b| clusters[a].cmp(&clusters[b]).then(fitness[a].total_cmp(&fitness[b])).then(a.cmp(&b)));
    let mut levels = vec![0; clusters.len()];
    let mut i = 0;
    while i < order.len() {
        let c = clusters[order[i]];
        let mut level = 0;
        let mut prev = fitness[order[i]];
        while i < order.len() && clusters[order[i]] == c {
            let idx = order[i];
            if fitness[idx] > prev {
                level += 1;
                prev = fitness[idx];
            }
            levels[idx] = level;
            i += 1;
        }
    }
    levels
}
