//! Second-stage decision making: fuzzy clustering of the Pareto archive into
//! preference groups and grey relational projection inside each group.

mod fcm;
mod grp;
mod report;

use serde::Serialize;

pub use fcm::{fcm_cluster, FcmResult};
pub use grp::{grey_relation_coefficients, relative_projection, standardize_matrix, Projection, StandardMatrix};

use crate::casedata::RunConfig;
use crate::model::DispatchSolution;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecisionError {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("need at least 2 schemes, got {0}")]
    TooFewSchemes(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("archive is empty")]
    EmptyArchive,
}

/// One scheme of a cluster with its grey relational scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedScheme {
    /// Index into the input solutions.
    pub index: usize,
    pub cost: f64,
    pub emission: f64,
    pub grc_plus: Vec<f64>,
    pub grc_minus: Vec<f64>,
    pub prj_plus: f64,
    pub prj_minus: f64,
    pub rp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterReport {
    /// 1-based compromise label, ordered by center cost.
    pub label: usize,
    /// Cluster center in raw `(cost, emission)` units.
    pub center: [f64; 2],
    /// Schemes in non-increasing relative projection.
    pub schemes: Vec<RankedScheme>,
    /// Indicator columns that were constant inside the cluster.
    pub constant_columns: Vec<bool>,
    pub best: DispatchSolution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BcsReport {
    pub clusters: Vec<ClusterReport>,
    pub fcm_loss: Option<f64>,
    pub fcm_iterations: usize,
}

impl BcsReport {
    /// Best compromise solution `label` (1-based).
    pub fn bcs(&self, label: usize) -> Option<&DispatchSolution> {
        self.clusters.iter().find(|c| c.label == label).map(|c| &c.best)
    }

    pub fn best_solutions(&self) -> Vec<&DispatchSolution> {
        self.clusters.iter().map(|c| &c.best).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

fn min_max_normalize(points: &[[f64; 2]]) -> Vec<Vec<f64>> {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    points
        .iter()
        .map(|p| {
            (0..2)
                .map(|k| {
                    let span = hi[k] - lo[k];
                    if span > 0.0 {
                        (p[k] - lo[k]) / span
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

fn rank_cluster(
    solutions: &[DispatchSolution],
    members: &[usize],
    config: &RunConfig,
) -> Result<(Vec<RankedScheme>, Vec<bool>), DecisionError> {
    if members.len() == 1 {
        let s = &solutions[members[0]];
        let scheme = RankedScheme {
            index: members[0],
            cost: s.cost,
            emission: s.emission,
            grc_plus: vec![1.0; 2],
            grc_minus: vec![1.0; 2],
            prj_plus: 1.0,
            prj_minus: 0.0,
            rp: 1.0,
        };
        return Ok((vec![scheme], vec![true; 2]));
    }
    let rows: Vec<Vec<f64>> = members.iter().map(|&i| vec![solutions[i].cost, solutions[i].emission]).collect();
    let std = standardize_matrix(&rows)?;
    let (plus, minus) = grey_relation_coefficients(&std, config.grp.resolution);
    let rp = relative_projection(&plus, &minus, &config.grp.weights)?;
    let mut schemes: Vec<RankedScheme> = members
        .iter()
        .enumerate()
        .map(|(l, &i)| RankedScheme {
            index: i,
            cost: solutions[i].cost,
            emission: solutions[i].emission,
            grc_plus: plus[l].clone(),
            grc_minus: minus[l].clone(),
            prj_plus: rp[l].prj_plus,
            prj_minus: rp[l].prj_minus,
            rp: rp[l].rp,
        })
        .collect();
    schemes.sort_by(|a, b| {
        b.rp.total_cmp(&a.rp)
            .then(a.cost.total_cmp(&b.cost))
            .then(a.emission.total_cmp(&b.emission))
            .then(a.index.cmp(&b.index))
    });
    Ok((schemes, std.constant))
}

/// Cluster `solutions` in normalized objective space and pick the scheme
/// with the highest relative projection in each cluster.
pub fn select_bcs(solutions: &[DispatchSolution], config: &RunConfig) -> Result<BcsReport, DecisionError> {
    if solutions.is_empty() {
        return Err(DecisionError::EmptyArchive);
    }
    let raw: Vec<[f64; 2]> = solutions.iter().map(|s| [s.cost, s.emission]).collect();
    let n_clusters = config.fcm.n_clusters.min(solutions.len());
    let (groups, fcm_loss, fcm_iterations) = if n_clusters < 2 {
        (vec![(0..solutions.len()).collect::<Vec<usize>>()], None, 0)
    } else {
        let normalized = min_max_normalize(&raw);
        let fcm_config = crate::casedata::FcmConfig { n_clusters, ..config.fcm.clone() };
        let result = fcm_cluster(&normalized, &fcm_config, config.seed)?;
        let mut groups = vec![Vec::new(); n_clusters];
        for (i, a) in result.assignments().into_iter().enumerate() {
            groups[a].push(i);
        }
        (groups, Some(result.loss), result.iterations)
    };

    let mut clusters = Vec::new();
    for members in groups.into_iter().filter(|g| !g.is_empty()) {
        let m = members.len() as f64;
        let center = [
            members.iter().map(|&i| raw[i][0]).sum::<f64>() / m,
            members.iter().map(|&i| raw[i][1]).sum::<f64>() / m,
        ];
        let (schemes, constant_columns) = rank_cluster(solutions, &members, config)?;
        let best = solutions[schemes[0].index].clone();
        clusters.push(ClusterReport { label: 0, center, schemes, constant_columns, best });
    }
    clusters.sort_by(|a, b| a.center[0].total_cmp(&b.center[0]).then(a.center[1].total_cmp(&b.center[1])));
    for (k, c) in clusters.iter_mut().enumerate() {
        c.label = k + 1;
    }
    Ok(BcsReport { clusters, fcm_loss, fcm_iterations })
}
