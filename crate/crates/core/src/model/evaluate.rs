use serde::{Deserialize, Serialize};

use super::{Dispatch, DispatchCase, DispatchSolution, IntervalProblem, ModelError, OperatingPoint};

/// Reporting tolerance on the power balance (MW).
pub const POWER_BALANCE_TOLERANCE: f64 = 1e-3;
/// Tolerance on the heat balance (MWth).
pub const HEAT_BALANCE_TOLERANCE: f64 = 1e-6;
/// Tolerance on box bounds (MW / MWth).
pub const BOUND_TOLERANCE: f64 = 1e-9;
/// Penalty weight applied to squared residuals of infeasible dispatches.
pub const PENALTY_WEIGHT: f64 = 1e6;

/// Total fuel cost ($) of a dispatch.
pub fn evaluate_cost(case: &DispatchCase, d: &Dispatch) -> Result<f64, ModelError> {
    d.check_dimensions(case)?;
    let power: f64 = case.power_units.iter().zip(&d.power).map(|(u, &p)| u.cost(p)).sum();
    let chp: f64 = case
        .chp_units
        .iter()
        .zip(d.chp_power.iter().zip(&d.chp_heat))
        .map(|(u, (&o, &h))| u.cost(o, h))
        .sum();
    let heat: f64 = case.heat_units.iter().zip(&d.heat).map(|(u, &t)| u.cost(t)).sum();
    Ok(power + chp + heat)
}

/// Total gas emission (kg) of a dispatch: SO2/NOx plus CO2 terms.
pub fn evaluate_emission(case: &DispatchCase, d: &Dispatch) -> Result<f64, ModelError> {
    d.check_dimensions(case)?;
    let power: f64 = case.power_units.iter().zip(&d.power).map(|(u, &p)| u.emission(p)).sum();
    let chp: f64 = case.chp_units.iter().zip(&d.chp_power).map(|(u, &o)| u.emission(o)).sum();
    let heat: f64 = case.heat_units.iter().zip(&d.heat).map(|(u, &t)| u.emission(t)).sum();
    Ok(power + chp + heat)
}

/// Transmission loss (MW) for electrical outputs in loss-model order.
///
/// Returns `0.0` when the case carries no loss model; callers can tell the
/// two apart through `case.loss.is_none()`.
pub fn transmission_loss(case: &DispatchCase, powers: &[f64]) -> Result<f64, ModelError> {
    let expected = case.n_generators();
    if powers.len() != expected {
        return Err(ModelError::Dimension { what: "generator powers", expected, got: powers.len() });
    }
    if powers.iter().any(|p| !p.is_finite()) {
        return Err(ModelError::NonFinite("generator powers"));
    }
    Ok(case.loss.as_ref().map_or(0.0, |l| l.evaluate(powers)))
}

/// Per-constraint residuals of one dispatch.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FeasibilityReport {
    /// `Σ P + Σ O − P_D − P_L` (MW).
    pub power_residual: f64,
    /// `Σ H + Σ T − H_D` (MWth).
    pub heat_residual: f64,
    /// Largest distance of a cogeneration point outside its region.
    pub region_violation: f64,
    /// Largest box-bound violation.
    pub bound_violation: f64,
    /// Set when the balance repair could not reach its target.
    pub repair_failed: bool,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.power_residual.abs() <= POWER_BALANCE_TOLERANCE
            && self.heat_residual.abs() <= HEAT_BALANCE_TOLERANCE
            && self.region_violation <= super::REGION_TOLERANCE
            && self.bound_violation <= BOUND_TOLERANCE
    }

    pub fn penalty(&self) -> f64 {
        if self.is_feasible() {
            return 0.0;
        }
        PENALTY_WEIGHT
            * (self.power_residual.powi(2)
                + self.heat_residual.powi(2)
                + self.region_violation.powi(2)
                + self.bound_violation.powi(2))
    }
}

/// Evaluate objectives and constraint residuals of `d` for one interval.
pub fn evaluate_solution(problem: &IntervalProblem<'_>, d: Dispatch) -> Result<DispatchSolution, ModelError> {
    let case = problem.case;
    let cost = evaluate_cost(case, &d)?;
    let emission = evaluate_emission(case, &d)?;
    let loss = transmission_loss(case, &d.generator_powers())?;

    let power_residual = d.total_power() - problem.power_demand() - loss;
    let heat_residual = d.total_heat() - problem.heat_demand();

    let region_violation = case
        .chp_units
        .iter()
        .zip(d.chp_power.iter().zip(&d.chp_heat))
        .map(|(u, (&o, &h))| u.operating_region.violation(OperatingPoint::new(o, h)))
        .fold(0.0, f64::max);

    let mut bound_violation: f64 = 0.0;
    for (&(lo, hi), &p) in problem.power_bounds.iter().zip(&d.power) {
        bound_violation = bound_violation.max(lo - p).max(p - hi);
    }
    for (u, &t) in case.heat_units.iter().zip(&d.heat) {
        bound_violation = bound_violation.max(u.h_min_mwth - t).max(t - u.h_max_mwth);
    }

    Ok(DispatchSolution {
        dispatch: d,
        cost,
        emission,
        loss,
        report: FeasibilityReport {
            power_residual,
            heat_residual,
            region_violation,
            bound_violation: bound_violation.max(0.0),
            repair_failed: false,
        },
    })
}
