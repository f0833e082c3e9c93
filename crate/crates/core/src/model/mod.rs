//! Dispatch problem model: unit descriptors, objective evaluators,
//! constraint checks and balance repair.

mod evaluate;
pub mod geometry;
mod ramp;
mod repair;

use serde::{Deserialize, Serialize};

pub use evaluate::{
    evaluate_cost, evaluate_emission, evaluate_solution, transmission_loss, FeasibilityReport,
    BOUND_TOLERANCE, HEAT_BALANCE_TOLERANCE, POWER_BALANCE_TOLERANCE,
};
pub use geometry::{ConvexPolygon, OperatingPoint, OperatingRegion, PolygonError, REGION_TOLERANCE};
pub use ramp::{check_ramp, RampReport};
pub use repair::{
    balance, repair_heat_balance, repair_power_balance, HeatSlack, IntervalProblem, RepairOutcome,
    REPAIR_MAX_ITERATIONS, REPAIR_TARGET,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension { what: &'static str, expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("slack unit {0} is not a valid unit for this repair")]
    InvalidSlack(usize),
    #[error("power balance repair diverged after {iterations} iterations (residual {residual} MW)")]
    RepairDiverged { iterations: usize, residual: f64 },
    #[error("interval {0} out of range")]
    Interval(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValvePoint {
    /// Ripple amplitude `e` ($).
    pub amplitude: f64,
    /// Ripple frequency `ζ` (1/MW).
    pub frequency_per_mw: f64,
}

/// Conventional thermal unit producing electricity only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerOnlyUnit {
    #[serde(default)]
    pub name: String,
    pub p_min_mw: f64,
    pub p_max_mw: f64,
    /// Cost polynomial `a + b·P + d·P² + c3·P³` ($).
    pub cost_const: f64,
    pub cost_per_mw: f64,
    pub cost_per_mw2: f64,
    #[serde(default)]
    pub cost_per_mw3: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valve_point: Option<ValvePoint>,
    /// SO2/NOx emission `μ + κ·P + π·P² + σ·exp(ν·P)` (kg).
    pub emission_const_kg: f64,
    pub emission_per_mw_kg: f64,
    pub emission_per_mw2_kg: f64,
    #[serde(default)]
    pub emission_exp_coeff_kg: f64,
    #[serde(default)]
    pub emission_exp_rate_per_mw: f64,
    #[serde(default)]
    pub co2_per_mw_kg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramp_up_mw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ramp_down_mw: Option<f64>,
}

impl PowerOnlyUnit {
    pub fn cost(&self, p: f64) -> f64 {
        let poly = self.cost_const
            + self.cost_per_mw * p
            + self.cost_per_mw2 * p * p
            + self.cost_per_mw3 * p * p * p;
        let ripple = self
            .valve_point
            .map_or(0.0, |v| (v.amplitude * (v.frequency_per_mw * (self.p_min_mw - p)).sin()).abs());
        poly + ripple
    }

    pub fn emission(&self, p: f64) -> f64 {
        self.emission_const_kg
            + self.emission_per_mw_kg * p
            + self.emission_per_mw2_kg * p * p
            + self.emission_exp_coeff_kg * (self.emission_exp_rate_per_mw * p).exp()
            + self.co2_per_mw_kg * p
    }
}

/// Cogeneration unit with a joint heat-power operating region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChpUnit {
    #[serde(default)]
    pub name: String,
    /// Cost `α + β·O + γ·O² + δ·H + ε·H² + ξ·O·H` ($).
    pub cost_const: f64,
    pub cost_per_mw: f64,
    pub cost_per_mw2: f64,
    pub cost_per_mwth: f64,
    pub cost_per_mwth2: f64,
    pub cost_per_mw_mwth: f64,
    pub emission_per_mw_kg: f64,
    #[serde(default)]
    pub co2_per_mw_kg: f64,
    pub operating_region: OperatingRegion,
}

impl ChpUnit {
    pub fn cost(&self, power: f64, heat: f64) -> f64 {
        self.cost_const
            + self.cost_per_mw * power
            + self.cost_per_mw2 * power * power
            + self.cost_per_mwth * heat
            + self.cost_per_mwth2 * heat * heat
            + self.cost_per_mw_mwth * power * heat
    }

    pub fn emission(&self, power: f64) -> f64 {
        (self.emission_per_mw_kg + self.co2_per_mw_kg) * power
    }
}

/// Boiler producing heat only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatOnlyUnit {
    #[serde(default)]
    pub name: String,
    pub h_min_mwth: f64,
    pub h_max_mwth: f64,
    /// Cost `φ + η·T + λ·T²` ($).
    pub cost_const: f64,
    pub cost_per_mwth: f64,
    pub cost_per_mwth2: f64,
    pub emission_per_mwth_kg: f64,
    #[serde(default)]
    pub co2_per_mwth_kg: f64,
}

impl HeatOnlyUnit {
    pub fn cost(&self, t: f64) -> f64 {
        self.cost_const + self.cost_per_mwth * t + self.cost_per_mwth2 * t * t
    }

    pub fn emission(&self, t: f64) -> f64 {
        (self.emission_per_mwth_kg + self.co2_per_mwth_kg) * t
    }
}

/// Quadratic B-coefficient transmission-loss model over all
/// electricity-producing units (power-only first, then cogeneration).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossModel {
    pub b_matrix_per_mw: Vec<Vec<f64>>,
    pub b_linear: Vec<f64>,
    pub b_const_mw: f64,
}

impl LossModel {
    pub fn dimension(&self) -> usize {
        self.b_linear.len()
    }

    pub fn evaluate(&self, powers: &[f64]) -> f64 {
        let quadratic: f64 = self
            .b_matrix_per_mw
            .iter()
            .zip(powers)
            .map(|(row, pi)| pi * row.iter().zip(powers).map(|(b, pj)| b * pj).sum::<f64>())
            .sum();
        let linear: f64 = self.b_linear.iter().zip(powers).map(|(b, p)| b * p).sum();
        quadratic + linear + self.b_const_mw
    }

    /// Partial derivative of the loss with respect to unit `k`.
    pub fn marginal(&self, powers: &[f64], k: usize) -> f64 {
        let row: f64 = self.b_matrix_per_mw[k].iter().zip(powers).map(|(b, p)| b * p).sum();
        2.0 * row + self.b_linear[k]
    }
}

/// An immutable dispatch problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct DispatchCase {
    pub name: String,
    pub power_units: Vec<PowerOnlyUnit>,
    pub chp_units: Vec<ChpUnit>,
    pub heat_units: Vec<HeatOnlyUnit>,
    pub loss: Option<LossModel>,
    /// Power demand per interval (MW).
    pub power_demand: Vec<f64>,
    /// Heat demand per interval (MWth).
    pub heat_demand: Vec<f64>,
}

impl DispatchCase {
    pub fn n_intervals(&self) -> usize {
        self.power_demand.len()
    }

    pub fn n_generators(&self) -> usize {
        self.power_units.len() + self.chp_units.len()
    }

    pub fn is_dynamic(&self) -> bool {
        self.n_intervals() > 1
    }

    /// Aggregate `(min, max)` electrical capacity.
    pub fn power_capacity(&self) -> (f64, f64) {
        let bounds: Vec<(f64, f64)> = self.power_units.iter().map(|u| (u.p_min_mw, u.p_max_mw)).collect();
        self.power_capacity_within(&bounds)
    }

    fn power_capacity_within(&self, bounds: &[(f64, f64)]) -> (f64, f64) {
        let (mut lo, mut hi) = (0.0, 0.0);
        for &(l, h) in bounds {
            lo += l;
            hi += h;
        }
        for u in &self.chp_units {
            let (l, h) = u.operating_region.bounding_box();
            lo += l.power;
            hi += h.power;
        }
        (lo, hi)
    }

    /// Aggregate `(min, max)` heat capacity.
    pub fn heat_capacity(&self) -> (f64, f64) {
        let (mut lo, mut hi) = (0.0, 0.0);
        for u in &self.chp_units {
            let (l, h) = u.operating_region.bounding_box();
            lo += l.heat;
            hi += h.heat;
        }
        for u in &self.heat_units {
            lo += u.h_min_mwth;
            hi += u.h_max_mwth;
        }
        (lo, hi)
    }

    /// Reasons why interval `t` cannot be satisfied by any dispatch.
    pub fn infeasibility(&self, t: usize) -> Vec<String> {
        let bounds: Vec<(f64, f64)> = self.power_units.iter().map(|u| (u.p_min_mw, u.p_max_mw)).collect();
        self.infeasibility_within(t, &bounds)
    }

    /// As [`Self::infeasibility`] with the given power-only bounds.
    pub fn infeasibility_within(&self, t: usize, bounds: &[(f64, f64)]) -> Vec<String> {
        let mut out = Vec::new();
        let (plo, phi) = self.power_capacity_within(bounds);
        let demand = self.power_demand[t];
        let base_loss = self.loss.as_ref().map_or(0.0, |l| l.b_const_mw.max(0.0));
        if demand + base_loss > phi {
            out.push(format!(
                "interval {t}: power demand {demand} MW exceeds aggregate capacity {phi} MW"
            ));
        }
        if plo > demand + self.worst_case_loss() {
            out.push(format!(
                "interval {t}: minimum aggregate power {plo} MW exceeds demand {demand} MW"
            ));
        }
        let (hlo, hhi) = self.heat_capacity();
        let heat = self.heat_demand[t];
        if heat > hhi {
            out.push(format!("interval {t}: heat demand {heat} MWth exceeds aggregate capacity {hhi} MWth"));
        }
        if hlo > heat {
            out.push(format!("interval {t}: minimum aggregate heat {hlo} MWth exceeds demand {heat} MWth"));
        }
        out
    }

    fn worst_case_loss(&self) -> f64 {
        let Some(loss) = &self.loss else { return 0.0 };
        let mut maxes: Vec<f64> = self.power_units.iter().map(|u| u.p_max_mw).collect();
        maxes.extend(self.chp_units.iter().map(|u| u.operating_region.bounding_box().1.power));
        loss.evaluate(&maxes).max(0.0)
    }
}

/// Decision variables of one dispatch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dispatch {
    /// Power-only unit outputs (MW).
    pub power: Vec<f64>,
    /// Cogeneration electrical outputs (MW).
    pub chp_power: Vec<f64>,
    /// Cogeneration heat outputs (MWth).
    pub chp_heat: Vec<f64>,
    /// Heat-only unit outputs (MWth).
    pub heat: Vec<f64>,
}

impl Dispatch {
    pub fn zeros(case: &DispatchCase) -> Self {
        Self {
            power: vec![0.0; case.power_units.len()],
            chp_power: vec![0.0; case.chp_units.len()],
            chp_heat: vec![0.0; case.chp_units.len()],
            heat: vec![0.0; case.heat_units.len()],
        }
    }

    /// Electrical outputs in loss-model order.
    pub fn generator_powers(&self) -> Vec<f64> {
        let mut v = self.power.clone();
        v.extend_from_slice(&self.chp_power);
        v
    }

    pub fn total_power(&self) -> f64 {
        self.power.iter().chain(&self.chp_power).sum()
    }

    pub fn total_heat(&self) -> f64 {
        self.chp_heat.iter().chain(&self.heat).sum()
    }

    pub fn check_dimensions(&self, case: &DispatchCase) -> Result<(), ModelError> {
        let checks = [
            ("power-only outputs", case.power_units.len(), self.power.len()),
            ("cogeneration power outputs", case.chp_units.len(), self.chp_power.len()),
            ("cogeneration heat outputs", case.chp_units.len(), self.chp_heat.len()),
            ("heat-only outputs", case.heat_units.len(), self.heat.len()),
        ];
        for (what, expected, got) in checks {
            if expected != got {
                return Err(ModelError::Dimension { what, expected, got });
            }
        }
        if self
            .power
            .iter()
            .chain(&self.chp_power)
            .chain(&self.chp_heat)
            .chain(&self.heat)
            .any(|v| !v.is_finite())
        {
            return Err(ModelError::NonFinite("dispatch"));
        }
        Ok(())
    }
}

/// A dispatch together with its evaluated objectives and constraint report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispatchSolution {
    pub dispatch: Dispatch,
    /// Total fuel cost ($).
    pub cost: f64,
    /// Total emission (kg).
    pub emission: f64,
    /// Realized transmission loss (MW).
    pub loss: f64,
    pub report: FeasibilityReport,
}

impl DispatchSolution {
    pub fn is_feasible(&self) -> bool {
        self.report.is_feasible()
    }

    /// Objective pair used by the search: raw objectives plus the balance penalty.
    pub fn objectives(&self) -> [f64; 2] {
        let p = self.report.penalty();
        [self.cost + p, self.emission + p]
    }
}
