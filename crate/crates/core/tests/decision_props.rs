use chpeed::casedata::{FcmConfig, RunConfig};
use chpeed::decision::{
    fcm_cluster, grey_relation_coefficients, relative_projection, select_bcs, standardize_matrix, Projection,
};
use chpeed::model::{Dispatch, DispatchSolution, FeasibilityReport};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn solution(cost: f64, emission: f64) -> DispatchSolution {
    DispatchSolution {
        dispatch: Dispatch { power: vec![cost / 100.0], chp_power: vec![], chp_heat: vec![], heat: vec![] },
        cost,
        emission,
        loss: 0.0,
        report: FeasibilityReport::default(),
    }
}

/// Convex trade-off curve with `n` schemes between (13800, 11) and (17000, 1.2).
fn curve(n: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; 2]> {
    (0..n)
        .map(|_| {
            let t: f64 = rng.random();
            [13_800.0 + 3_200.0 * t, 1.2 + 9.8 * (1.0 - t).powi(2)]
        })
        .collect()
}

fn projections(points: &[[f64; 2]], weights: &[f64]) -> Vec<Projection> {
    let rows: Vec<Vec<f64>> = points.iter().map(|p| p.to_vec()).collect();
    let std = standardize_matrix(&rows).unwrap();
    let (plus, minus) = grey_relation_coefficients(&std, 0.5);
    relative_projection(&plus, &minus, weights).unwrap()
}

fn fcm_objective(points: &[Vec<f64>], centers: &[f64; 2], m: f64) -> f64 {
    points
        .iter()
        .map(|x| {
            let d: Vec<f64> = centers.iter().map(|c| (x[0] - c).powi(2).max(1e-300)).collect();
            let u: Vec<f64> = (0..2)
                .map(|i| 1.0 / (0..2).map(|j| (d[i] / d[j]).powf(1.0 / (m - 1.0))).sum::<f64>())
                .collect();
            (0..2).map(|i| u[i].powf(m) * d[i]).sum::<f64>()
        })
        .sum()
}

proptest! {
    #[test]
    fn membership_rows_sum_to_one_and_loss_decreases(seed in any::<u64>(), n in 2usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect();
        let result = fcm_cluster(&points, &FcmConfig::default(), seed).unwrap();
        for row in &result.membership {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(row.iter().all(|&u| (0.0..=1.0).contains(&u)));
        }
        for w in result.loss_history.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-15, "{:?}", result.loss_history);
        }
    }

    #[test]
    fn relative_projection_is_bounded_and_dominance_consistent(seed in any::<u64>(), n in 2usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<[f64; 2]> = (0..n).map(|_| [rng.random_range(1e4..2e4), rng.random_range(1.0..12.0)]).collect();
        let prj = projections(&points, &[0.5, 0.5]);
        for p in &prj {
            prop_assert!((0.0..=1.0).contains(&p.rp));
        }
        for i in 0..n {
            for j in 0..n {
                let a = points[i];
                let b = points[j];
                if a[0] <= b[0] && a[1] <= b[1] && a != b {
                    prop_assert!(prj[i].rp >= prj[j].rp - 1e-12);
                }
            }
        }
    }

    #[test]
    fn weight_scaling_preserves_ranking(seed in any::<u64>(), scale in 0.01f64..100.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = curve(15, &mut rng);
        let w = [rng.random_range(0.1..1.0), rng.random_range(0.1..1.0)];
        let base = projections(&points, &w);
        let scaled = projections(&points, &[w[0] * scale, w[1] * scale]);
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert!((a.rp - b.rp).abs() < 1e-12);
        }
        let argmax = |p: &[Projection]| (0..p.len()).max_by(|&i, &j| p[i].rp.total_cmp(&p[j].rp).then(j.cmp(&i))).unwrap();
        prop_assert_eq!(argmax(&base), argmax(&scaled));
    }
}

#[test]
fn two_clouds_reach_grid_search_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut points: Vec<Vec<f64>> = (0..20).map(|_| vec![rng.random_range(-0.5..0.5)]).collect();
    points.extend((0..20).map(|_| vec![10.0 + rng.random_range(-0.5..0.5)]));
    let result = fcm_cluster(&points, &FcmConfig::default(), 4).unwrap();
    let mut grid_best = f64::INFINITY;
    for i in 0..=280 {
        for j in i..=280 {
            let c = [-2.0 + 0.05 * i as f64, -2.0 + 0.05 * j as f64];
            grid_best = grid_best.min(fcm_objective(&points, &c, 2.0));
        }
    }
    assert!(result.loss <= grid_best + 1e-9, "{} vs {grid_best}", result.loss);
    let mut centers: Vec<f64> = result.centers.iter().map(|c| c[0]).collect();
    centers.sort_by(f64::total_cmp);
    assert!(centers[0].abs() < 0.5 && (centers[1] - 10.0).abs() < 0.5, "{centers:?}");
    let assigned = result.assignments();
    assert!(assigned[..20].iter().all(|&a| a == assigned[0]));
    assert!(assigned[20..].iter().all(|&a| a == assigned[20] && a != assigned[0]));
}

#[test]
fn best_compromises_belong_to_their_clusters() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let archive: Vec<DispatchSolution> = curve(40, &mut rng).into_iter().map(|p| solution(p[0], p[1])).collect();
    let report = select_bcs(&archive, &RunConfig::default()).unwrap();
    assert_eq!(report.clusters.len(), 2);
    let mut seen: Vec<usize> = report.clusters.iter().flat_map(|c| c.schemes.iter().map(|s| s.index)).collect();
    seen.sort_unstable();
    assert_eq!(seen, (0..archive.len()).collect::<Vec<_>>());
    for cluster in &report.clusters {
        let top = &cluster.schemes[0];
        assert_eq!(archive[top.index], cluster.best);
        assert!(cluster.schemes.windows(2).all(|w| w[0].rp >= w[1].rp));
    }
    assert!(report.bcs(1).unwrap().cost < report.bcs(2).unwrap().cost);
}

#[test]
fn archive_order_does_not_change_compromises() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let points = curve(30, &mut rng);
    let archive: Vec<DispatchSolution> = points.iter().map(|p| solution(p[0], p[1])).collect();
    let mut reversed = archive.clone();
    reversed.reverse();
    let a = select_bcs(&archive, &RunConfig::default()).unwrap();
    let b = select_bcs(&reversed, &RunConfig::default()).unwrap();
    for label in [1, 2] {
        let (x, y) = (a.bcs(label).unwrap(), b.bcs(label).unwrap());
        assert_eq!((x.cost, x.emission), (y.cost, y.emission));
    }
}

#[test]
fn worked_projection_example() {
    let prj = projections(&[[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]], &[0.5, 0.5]);
    assert!((prj[1].rp - 0.5).abs() < 1e-12);
    assert!((prj[0].rp - prj[2].rp).abs() < 1e-12);
}
