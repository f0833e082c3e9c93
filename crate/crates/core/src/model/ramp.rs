use serde::{Deserialize, Serialize};

use super::{Dispatch, DispatchCase, ModelError};

/// Ramp-limit excess per interval transition and power-only unit.
///
/// Row `t − 1` holds the transition from interval `t − 1` to `t`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RampReport {
    pub up: Vec<Vec<f64>>,
    pub down: Vec<Vec<f64>>,
}

impl RampReport {
    pub fn max_violation(&self) -> f64 {
        self.up.iter().chain(&self.down).flatten().copied().fold(0.0, f64::max)
    }

    pub fn is_feasible(&self) -> bool {
        self.max_violation() == 0.0
    }
}

/// Excess over ramp-up and ramp-down limits for every unit and transition.
pub fn check_ramp(case: &DispatchCase, schedule: &[Dispatch]) -> Result<RampReport, ModelError> {
    if schedule.len() != case.n_intervals() {
        return Err(ModelError::Dimension {
            what: "schedule intervals",
            expected: case.n_intervals(),
            got: schedule.len(),
        });
    }
    for d in schedule {
        d.check_dimensions(case)?;
    }
    let mut report = RampReport::default();
    for pair in schedule.windows(2) {
        let (prev, cur) = (&pair[0], &pair[1]);
        let mut up = Vec::with_capacity(case.power_units.len());
        let mut down = Vec::with_capacity(case.power_units.len());
        for (i, unit) in case.power_units.iter().enumerate() {
            let delta = cur.power[i] - prev.power[i];
            up.push(unit.ramp_up_mw.map_or(0.0, |ur| (delta - ur).max(0.0)));
            down.push(unit.ramp_down_mw.map_or(0.0, |dr| (-delta - dr).max(0.0)));
        }
        report.up.push(up);
        report.down.push(down);
    }
    Ok(report)
}
