#![allow(dead_code)]

use chpeed::casedata::shipped_case;
use chpeed::{parse_case, Dispatch, DispatchCase};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn case(name: &str) -> DispatchCase {
    parse_case(shipped_case(name).unwrap()).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

// Outer boundaries of the cogeneration regions, as single (possibly non-convex) polygons.
pub const CASE1_REGIONS: [&[[f64; 2]]; 3] = [
    &[[44.0, 0.0], [125.8, 0.0], [125.8, 32.4], [110.2, 135.6], [40.0, 75.0], [44.0, 15.9]],
    &[[20.0, 0.0], [60.0, 0.0], [45.0, 55.0], [10.0, 40.0]],
    &[[35.0, 0.0], [105.0, 0.0], [90.0, 25.0], [90.0, 45.0], [35.0, 20.0]],
];
pub const CASE2_REGIONS: [&[[f64; 2]]; 2] = [
    &[[98.8, 0.0], [247.0, 0.0], [215.0, 180.0], [81.0, 104.8]],
    &[[44.0, 0.0], [125.8, 0.0], [125.8, 32.4], [110.2, 135.6], [40.0, 75.0], [44.0, 15.9]],
];

/// Even-odd ray casting.
pub fn ray_inside(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn boundary_distance(poly: &[[f64; 2]], p: [f64; 2]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
            ((p[0] - a[0] - t * dx).powi(2) + (p[1] - a[1] - t * dy).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn sample_in(rng: &mut ChaCha8Rng, poly: &[[f64; 2]]) -> [f64; 2] {
    let (lo_p, hi_p) = poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v[0]), h.max(v[0])));
    let hi_h = poly.iter().map(|v| v[1]).fold(0.0, f64::max);
    loop {
        let p = [rng.random_range(lo_p..hi_p), rng.random_range(0.0..hi_h)];
        if ray_inside(poly, p) {
            return p;
        }
    }
}

pub fn case1_cost(p: &[f64; 8]) -> f64 {
    let [p1, o2, o3, o4, h2, h3, h4, t5] = *p;
    254.8863 + 7.6997 * p1 + 0.00172 * p1 * p1 + 0.000115 * p1 * p1 * p1
        + 1250.0 + 36.0 * o2 + 0.0435 * o2 * o2 + 0.6 * h2 + 0.027 * h2 * h2 + 0.011 * o2 * h2
        + 2650.0 + 34.5 * o3 + 0.1035 * o3 * o3 + 2.203 * h3 + 0.025 * h3 * h3 + 0.051 * o3 * h3
        + 1565.0 + 20.0 * o4 + 0.072 * o4 * o4 + 2.3 * h4 + 0.02 * h4 * h4 + 0.04 * o4 * h4
        + 950.0 + 2.0109 * t5 + 0.038 * t5 * t5
}

pub fn case1_emission(p: &[f64; 8]) -> f64 {
    let [p1, o2, o3, o4, _, _, _, t5] = *p;
    1e-4 * (4.091 - 5.554 * p1 + 6.490 * p1 * p1) + 2e-4 * (0.02857 * p1).exp()
        + 0.00165 * o2
        + 0.0022 * o3
        + 0.0011 * o4
        + 0.0017 * t5
}

pub const B: [[f64; 6]; 6] = [
    [49.0, 14.0, 15.0, 15.0, 20.0, 25.0],
    [14.0, 45.0, 16.0, 20.0, 18.0, 19.0],
    [15.0, 16.0, 39.0, 10.0, 12.0, 15.0],
    [15.0, 20.0, 10.0, 40.0, 14.0, 11.0],
    [20.0, 18.0, 12.0, 14.0, 35.0, 17.0],
    [25.0, 19.0, 15.0, 11.0, 17.0, 39.0],
];
pub const B0: [f64; 6] = [-0.3908, -0.1297, 0.7047, 0.0591, 0.2161, -0.6635];

pub fn case2_cost(p: &[f64; 9]) -> f64 {
    let [p1, p2, p3, p4, o5, o6, h5, h6, t7] = *p;
    25.0 + 2.0 * p1 + 0.008 * p1 * p1 + (100.0 * (0.042 * (10.0 - p1)).sin()).abs()
        + 60.0 + 1.8 * p2 + 0.003 * p2 * p2 + (140.0 * (0.04 * (20.0 - p2)).sin()).abs()
        + 100.0 + 2.1 * p3 + 0.0012 * p3 * p3 + (160.0 * (0.038 * (30.0 - p3)).sin()).abs()
        + 120.0 + 2.0 * p4 + 0.001 * p4 * p4 + (180.0 * (0.037 * (40.0 - p4)).sin()).abs()
        + 2650.0 + 14.5 * o5 + 0.0345 * o5 * o5 + 4.2 * h5 + 0.03 * h5 * h5 + 0.031 * o5 * h5
        + 1250.0 + 36.0 * o6 + 0.0435 * o6 * o6 + 0.6 * h6 + 0.027 * h6 * h6 + 0.011 * o6 * h6
        + 950.0 + 2.0109 * t7 + 0.038 * t7 * t7
}

pub fn case2_emission(p: &[f64; 9]) -> f64 {
    let [p1, p2, p3, p4, o5, o6, _, _, t7] = *p;
    1e-4 * (4.091 - 5.554 * p1 + 6.490 * p1 * p1) + 2e-4 * (0.02857 * p1).exp()
        + 1e-4 * (2.543 - 6.047 * p2 + 5.638 * p2 * p2) + 5e-4 * (0.03333 * p2).exp()
        + 1e-4 * (4.285 - 5.094 * p3 + 4.586 * p3 * p3) + 1e-6 * (0.08 * p3).exp()
        + 1e-4 * (5.326 - 3.550 * p4 + 3.370 * p4 * p4) + 2e-3 * (0.02 * p4).exp()
        + 0.00165 * o5
        + 0.00165 * o6
        + 0.0018 * t7
}

pub fn case2_loss(g: &[f64; 6]) -> f64 {
    let mut quad = 0.0;
    for i in 0..6 {
        for j in 0..6 {
            quad += g[i] * B[i][j] * 1e-6 * g[j];
        }
    }
    quad + (0..6).map(|i| B0[i] * 1e-3 * g[i]).sum::<f64>() + 0.056
}


pub struct CaseOracle {
    pub power_demand: f64,
    pub heat_demand: f64,
    pub power_limits: &'static [(f64, f64)],
    pub heat_limits: (f64, f64),
    pub regions: &'static [&'static [[f64; 2]]],
}

pub const CASE1: CaseOracle = CaseOracle {
    power_demand: 300.0,
    heat_demand: 150.0,
    power_limits: &[(35.0, 135.0)],
    heat_limits: (0.0, 60.0),
    regions: &CASE1_REGIONS,
};

pub const CASE2: CaseOracle = CaseOracle {
    power_demand: 600.0,
    heat_demand: 150.0,
    power_limits: &[(10.0, 75.0), (20.0, 125.0), (30.0, 175.0), (40.0, 250.0)],
    heat_limits: (0.0, 2695.2),
    regions: &CASE2_REGIONS,
};

impl CaseOracle {
    pub fn is_lossy(&self) -> bool {
        self.power_limits.len() == 4
    }

    /// `(cost, emission, loss)` from the transcribed formulas.
    pub fn evaluate(&self, d: &Dispatch) -> (f64, f64, f64) {
        if self.is_lossy() {
            let (p, o, h, t) = (&d.power, &d.chp_power, &d.chp_heat, &d.heat);
            let x = [p[0], p[1], p[2], p[3], o[0], o[1], h[0], h[1], t[0]];
            let g = [p[0], p[1], p[2], p[3], o[0], o[1]];
            (case2_cost(&x), case2_emission(&x), case2_loss(&g))
        } else {
            let (o, h) = (&d.chp_power, &d.chp_heat);
            let x = [d.power[0], o[0], o[1], o[2], h[0], h[1], h[2], d.heat[0]];
            (case1_cost(&x), case1_emission(&x), 0.0)
        }
    }

    /// Constraint violations against the stated tolerances, empty when feasible.
    pub fn violations(&self, d: &Dispatch) -> Vec<String> {
        let mut out = Vec::new();
        let (_, _, loss) = self.evaluate(d);
        let power: f64 = d.power.iter().chain(&d.chp_power).sum();
        let heat: f64 = d.chp_heat.iter().chain(&d.heat).sum();
        let r = power - self.power_demand - loss;
        if r.abs() > 1e-3 {
            out.push(format!("power residual {r:e}"));
        }
        let r = heat - self.heat_demand;
        if r.abs() > 1e-6 {
            out.push(format!("heat residual {r:e}"));
        }
        for (k, poly) in self.regions.iter().enumerate() {
            let q = [d.chp_power[k], d.chp_heat[k]];
            if !ray_inside(poly, q) && boundary_distance(poly, q) > 1e-6 {
                out.push(format!("unit {k} outside its region at {q:?}"));
            }
        }
        for (&p, &(lo, hi)) in d.power.iter().zip(self.power_limits) {
            if p < lo - 1e-9 || p > hi + 1e-9 {
                out.push(format!("power {p} outside [{lo}, {hi}]"));
            }
        }
        let (lo, hi) = self.heat_limits;
        if d.heat[0] < lo - 1e-9 || d.heat[0] > hi + 1e-9 {
            out.push(format!("heat {} outside [{lo}, {hi}]", d.heat[0]));
        }
        out
    }
}

pub fn brute_igd(reference: &[[f64; 2]], front: &[[f64; 2]]) -> f64 {
    let mut total = 0.0;
    for g in reference {
        let mut best = f64::INFINITY;
        for a in front {
            best = best.min((g[0] - a[0]).hypot(g[1] - a[1]));
        }
        total += best;
    }
    total / reference.len() as f64
}

pub fn brute_spread(front: &[[f64; 2]], first: [f64; 2], last: [f64; 2]) -> f64 {
    let mut pts = front.to_vec();
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    let n = pts.len();
    let gaps: Vec<f64> = (1..n).map(|i| (pts[i][0] - pts[i - 1][0]).hypot(pts[i][1] - pts[i - 1][1])).collect();
    let mean: f64 = gaps.iter().sum::<f64>() / (n - 1) as f64;
    let df = (pts[0][0] - first[0]).hypot(pts[0][1] - first[1]);
    let dl = (pts[n - 1][0] - last[0]).hypot(pts[n - 1][1] - last[1]);
    let dev: f64 = gaps.iter().map(|g| (g - mean).abs()).sum();
    (df + dl + dev) / (df + dl + (n - 1) as f64 * mean)
}

/// Random dispatch inside every box bound and operating region (balances not enforced).
pub fn random_dispatch(oracle: &CaseOracle, rng: &mut ChaCha8Rng) -> Dispatch {
    let power = oracle.power_limits.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect();
    let chp: Vec<[f64; 2]> = oracle.regions.iter().map(|r| sample_in(rng, r)).collect();
    Dispatch {
        power,
        chp_power: chp.iter().map(|q| q[0]).collect(),
        chp_heat: chp.iter().map(|q| q[1]).collect(),
        heat: vec![rng.random_range(oracle.heat_limits.0..=oracle.heat_limits.1)],
    }
}
