use super::{evaluate_solution, Dispatch, DispatchCase, DispatchSolution, ModelError, OperatingPoint};

/// Residual target of the balance repairs (MW / MWth).
pub const REPAIR_TARGET: f64 = 1e-6;
pub const REPAIR_MAX_ITERATIONS: usize = 50;
const DIVERGENCE_STREAK: usize = 5;

/// One interval of a case, with the effective power-only bounds
/// (unit limits, optionally narrowed by ramp windows).
#[derive(Debug, Clone)]
pub struct IntervalProblem<'a> {
    pub case: &'a DispatchCase,
    pub interval: usize,
    pub power_bounds: Vec<(f64, f64)>,
}

impl<'a> IntervalProblem<'a> {
    pub fn new(case: &'a DispatchCase, interval: usize) -> Result<Self, ModelError> {
        if interval >= case.n_intervals() {
            return Err(ModelError::Interval(interval));
        }
        let power_bounds = case.power_units.iter().map(|u| (u.p_min_mw, u.p_max_mw)).collect();
        Ok(Self { case, interval, power_bounds })
    }

    /// Narrow power-only bounds to `[P_prev − DR, P_prev + UR]` for units with ramp data.
    pub fn with_ramp_window(mut self, previous: &Dispatch) -> Self {
        for ((bounds, unit), &prev) in self.power_bounds.iter_mut().zip(&self.case.power_units).zip(&previous.power) {
            if let Some(up) = unit.ramp_up_mw {
                bounds.1 = bounds.1.min(prev + up);
            }
            if let Some(down) = unit.ramp_down_mw {
                bounds.0 = bounds.0.max(prev - down);
            }
            if bounds.0 > bounds.1 {
                // previous output outside the unit limits; pin to nearest limit
                let pinned = prev.clamp(unit.p_min_mw, unit.p_max_mw);
                *bounds = (pinned, pinned);
            }
        }
        self
    }

    pub fn power_demand(&self) -> f64 {
        self.case.power_demand[self.interval]
    }

    pub fn heat_demand(&self) -> f64 {
        self.case.heat_demand[self.interval]
    }

    /// Power-only unit with the widest effective range (lowest index on ties).
    pub fn power_slack(&self) -> Option<usize> {
        widest(self.power_bounds.iter().copied())
    }

    pub fn heat_slack(&self) -> Option<HeatSlack> {
        if let Some(k) = widest(self.case.heat_units.iter().map(|u| (u.h_min_mwth, u.h_max_mwth))) {
            return Some(HeatSlack::HeatOnly(k));
        }
        widest(self.case.chp_units.iter().map(|u| {
            let (lo, hi) = u.operating_region.bounding_box();
            (lo.heat, hi.heat)
        }))
        .map(HeatSlack::Chp)
    }

    pub fn evaluate(&self, d: Dispatch) -> Result<DispatchSolution, ModelError> {
        evaluate_solution(self, d)
    }

    fn loss(&self, d: &Dispatch) -> f64 {
        self.case.loss.as_ref().map_or(0.0, |l| l.evaluate(&d.generator_powers()))
    }

    fn power_residual(&self, d: &Dispatch) -> f64 {
        d.total_power() - self.power_demand() - self.loss(d)
    }
}

fn widest(ranges: impl Iterator<Item = (f64, f64)>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, (lo, hi)) in ranges.enumerate() {
        let w = hi - lo;
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((i, w));
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatSlack {
    HeatOnly(usize),
    /// Cogeneration unit whose heat moves at fixed power.
    Chp(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepairOutcome {
    /// Signed balance residual after repair.
    pub residual: f64,
    pub iterations: usize,
    /// The slack hit one of its bounds.
    pub clamped: bool,
}

impl RepairOutcome {
    pub fn converged(&self) -> bool {
        self.residual.abs() <= REPAIR_TARGET
    }
}

/// Solve the slack unit's output from the power balance by fixed-point
/// iteration `P_slack ← P_D + P_L − Σ others`, clamped to its bounds.
pub fn repair_power_balance(
    problem: &IntervalProblem<'_>,
    mut d: Dispatch,
    slack: usize,
) -> Result<(Dispatch, RepairOutcome), ModelError> {
    d.check_dimensions(problem.case)?;
    let &(lo, hi) = problem.power_bounds.get(slack).ok_or(ModelError::InvalidSlack(slack))?;
    let mut prev_abs = f64::INFINITY;
    let mut streak = 0;
    let mut outcome = RepairOutcome { residual: problem.power_residual(&d), iterations: 0, clamped: false };
    for it in 1..=REPAIR_MAX_ITERATIONS {
        let others = d.total_power() - d.power[slack];
        let target = problem.power_demand() + problem.loss(&d) - others;
        let next = target.clamp(lo, hi);
        d.power[slack] = next;
        let residual = problem.power_residual(&d);
        outcome = RepairOutcome { residual, iterations: it, clamped: next != target };
        if outcome.converged() {
            break;
        }
        if outcome.clamped && ((next == lo && residual > 0.0) || (next == hi && residual < 0.0)) {
            // saturated: the slack cannot move further in the needed direction
            break;
        }
        if residual.abs() > prev_abs {
            streak += 1;
            if streak >= DIVERGENCE_STREAK {
                return Err(ModelError::RepairDiverged { iterations: it, residual });
            }
        } else {
            streak = 0;
        }
        prev_abs = residual.abs();
    }
    Ok((d, outcome))
}

/// Set the slack heat output to `H_D − Σ others`, clamped to its feasible range.
pub fn repair_heat_balance(
    problem: &IntervalProblem<'_>,
    mut d: Dispatch,
    slack: HeatSlack,
) -> Result<(Dispatch, RepairOutcome), ModelError> {
    d.check_dimensions(problem.case)?;
    let case = problem.case;
    let (current, (lo, hi)) = match slack {
        HeatSlack::HeatOnly(k) => {
            let u = case.heat_units.get(k).ok_or(ModelError::InvalidSlack(k))?;
            (d.heat[k], (u.h_min_mwth, u.h_max_mwth))
        }
        HeatSlack::Chp(j) => {
            let u = case.chp_units.get(j).ok_or(ModelError::InvalidSlack(j))?;
            let range = u
                .operating_region
                .heat_range(d.chp_power[j], d.chp_heat[j])
                .unwrap_or((d.chp_heat[j], d.chp_heat[j]));
            (d.chp_heat[j], range)
        }
    };
    let target = problem.heat_demand() - (d.total_heat() - current);
    let next = target.clamp(lo, hi);
    match slack {
        HeatSlack::HeatOnly(k) => d.heat[k] = next,
        HeatSlack::Chp(j) => d.chp_heat[j] = next,
    }
    let residual = d.total_heat() - problem.heat_demand();
    Ok((d, RepairOutcome { residual, iterations: 1, clamped: next != target }))
}

#[derive(Clone, Copy)]
enum PowerLever {
    PowerOnly(usize),
    Chp(usize),
}

#[derive(Clone, Copy)]
enum HeatLever {
    HeatOnly(usize),
    Chp(usize),
}

/// Full balance repair used by the search.
///
/// Cogeneration points are first projected into their regions. The heat
/// balance is then closed by the heat slack, with any remainder absorbed by
/// the other heat-only units and then by cogeneration heat at fixed power.
/// The power balance is closed the same way: slack first, then the other
/// power-only units, then cogeneration power at fixed heat, iterating on the
/// loss. Returns the repaired dispatch and whether both balances closed.
pub fn balance(problem: &IntervalProblem<'_>, mut d: Dispatch) -> Result<(Dispatch, bool), ModelError> {
    d.check_dimensions(problem.case)?;
    let case = problem.case;

    for (j, u) in case.chp_units.iter().enumerate() {
        let q = u.operating_region.project(OperatingPoint::new(d.chp_power[j], d.chp_heat[j]));
        d.chp_power[j] = q.power;
        d.chp_heat[j] = q.heat;
    }
    for (p, &(lo, hi)) in d.power.iter_mut().zip(&problem.power_bounds) {
        *p = p.clamp(lo, hi);
    }
    for (t, u) in d.heat.iter_mut().zip(&case.heat_units) {
        *t = t.clamp(u.h_min_mwth, u.h_max_mwth);
    }

    // heat
    let mut heat_order = Vec::new();
    if let Some(HeatSlack::HeatOnly(k)) = problem.heat_slack() {
        heat_order.push(HeatLever::HeatOnly(k));
        heat_order.extend((0..case.heat_units.len()).filter(|&i| i != k).map(HeatLever::HeatOnly));
    }
    heat_order.extend((0..case.chp_units.len()).map(HeatLever::Chp));
    let mut need = problem.heat_demand() - d.total_heat();
    for lever in heat_order {
        if need.abs() <= REPAIR_TARGET * 1e-3 {
            break;
        }
        let (slot, lo, hi) = match lever {
            HeatLever::HeatOnly(k) => {
                let u = &case.heat_units[k];
                (&mut d.heat[k], u.h_min_mwth, u.h_max_mwth)
            }
            HeatLever::Chp(j) => {
                let Some((lo, hi)) = case.chp_units[j].operating_region.heat_range(d.chp_power[j], d.chp_heat[j])
                else {
                    continue;
                };
                (&mut d.chp_heat[j], lo, hi)
            }
        };
        let next = (*slot + need).clamp(lo, hi);
        need -= next - *slot;
        *slot = next;
    }
    // close the last rounding gap on the heat slack when it has room
    if let Some(slack) = problem.heat_slack() {
        let (repaired, _) = repair_heat_balance(problem, d.clone(), slack)?;
        d = repaired;
    }
    let heat_ok = (d.total_heat() - problem.heat_demand()).abs() <= super::HEAT_BALANCE_TOLERANCE;

    // power
    let mut power_order = Vec::new();
    if let Some(s) = problem.power_slack() {
        power_order.push(PowerLever::PowerOnly(s));
        power_order.extend((0..case.power_units.len()).filter(|&i| i != s).map(PowerLever::PowerOnly));
    }
    power_order.extend((0..case.chp_units.len()).map(PowerLever::Chp));

    let mut residual = problem.power_residual(&d);
    let mut prev_abs = f64::INFINITY;
    let mut streak = 0;
    for _ in 0..REPAIR_MAX_ITERATIONS {
        if residual.abs() <= REPAIR_TARGET {
            break;
        }
        let mut need = -residual;
        for &lever in &power_order {
            if need.abs() <= REPAIR_TARGET * 1e-3 {
                break;
            }
            let (slot, lo, hi) = match lever {
                PowerLever::PowerOnly(i) => {
                    let (lo, hi) = problem.power_bounds[i];
                    (&mut d.power[i], lo, hi)
                }
                PowerLever::Chp(j) => {
                    let Some((lo, hi)) =
                        case.chp_units[j].operating_region.power_range(d.chp_heat[j], d.chp_power[j])
                    else {
                        continue;
                    };
                    (&mut d.chp_power[j], lo, hi)
                }
            };
            let next = (*slot + need).clamp(lo, hi);
            need -= next - *slot;
            *slot = next;
        }
        residual = problem.power_residual(&d);
        if residual.abs() >= prev_abs {
            streak += 1;
            if streak >= DIVERGENCE_STREAK {
                break;
            }
        } else {
            streak = 0;
        }
        prev_abs = residual.abs();
    }
    let power_ok = residual.abs() <= REPAIR_TARGET;
    Ok((d, heat_ok && power_ok))
}
