use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{from_toml, CaseError, Issue};
use crate::model::{ChpUnit, DispatchCase, HeatOnlyUnit, LossModel, PowerOnlyUnit};

pub const SCHEMA_VERSION: u32 = 1;

const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Names of the benchmark cases compiled into the library.
pub const SHIPPED_CASES: [&str; 2] = ["case1", "case2"];

/// Text of a shipped benchmark case file.
pub fn shipped_case(name: &str) -> Option<&'static str> {
    match name {
        "case1" => Some(include_str!("../../data/case1.toml")),
        "case2" => Some(include_str!("../../data/case2.toml")),
        _ => None,
    }
}

/// A single value for static cases or one value per interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Profile {
    Constant(f64),
    PerInterval(Vec<f64>),
}

impl Profile {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Profile::Constant(v) => vec![*v],
            Profile::PerInterval(v) => v.clone(),
        }
    }

    fn from_values(v: &[f64]) -> Self {
        match v {
            [single] => Profile::Constant(*single),
            _ => Profile::PerInterval(v.to_vec()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandBlock {
    pub power_mw: Profile,
    pub heat_mwth: Profile,
}

/// On-disk representation of a dispatch case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFile {
    pub schema_version: u32,
    pub name: String,
    /// Free-text notes per data block: which table or reference each number came from.
    #[serde(default)]
    pub provenance: BTreeMap<String, String>,
    pub demand: DemandBlock,
    #[serde(default)]
    pub power_units: Vec<PowerOnlyUnit>,
    #[serde(default)]
    pub chp_units: Vec<ChpUnit>,
    #[serde(default)]
    pub heat_units: Vec<HeatOnlyUnit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<LossModel>,
}

impl CaseFile {
    pub fn from_case(case: &DispatchCase, provenance: BTreeMap<String, String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name: case.name.clone(),
            provenance,
            demand: DemandBlock {
                power_mw: Profile::from_values(&case.power_demand),
                heat_mwth: Profile::from_values(&case.heat_demand),
            },
            power_units: case.power_units.clone(),
            chp_units: case.chp_units.clone(),
            heat_units: case.heat_units.clone(),
            loss: case.loss.clone(),
        }
    }

    pub fn to_case(&self) -> DispatchCase {
        DispatchCase {
            name: self.name.clone(),
            power_units: self.power_units.clone(),
            chp_units: self.chp_units.clone(),
            heat_units: self.heat_units.clone(),
            loss: self.loss.clone(),
            power_demand: self.demand.power_mw.values(),
            heat_demand: self.demand.heat_mwth.values(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("case files always serialize")
    }
}

/// Parse case-file text without validating it.
pub fn parse_case_file(text: &str) -> Result<CaseFile, CaseError> {
    let file: CaseFile = from_toml(text).map_err(|(path, message)| CaseError::Parse { path, message })?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(CaseError::SchemaVersion { found: file.schema_version, expected: SCHEMA_VERSION });
    }
    Ok(file)
}

/// Parse and fully validate case-file text.
pub fn parse_case(text: &str) -> Result<DispatchCase, CaseError> {
    let file = parse_case_file(text)?;
    let issues = validate_case_file(&file);
    if issues.is_empty() {
        Ok(file.to_case())
    } else {
        Err(CaseError::Validation(issues))
    }
}

/// Load a case from disk. A path that does not exist but names a shipped
/// case (`case1`, `case2`) resolves to the built-in data.
pub fn load_case(path: impl AsRef<Path>) -> Result<DispatchCase, CaseError> {
    let path = path.as_ref();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => match path.to_str().and_then(shipped_case) {
            Some(t) if e.kind() == std::io::ErrorKind::NotFound => t.to_string(),
            _ => return Err(CaseError::Io { path: path.to_path_buf(), source: e }),
        },
    };
    parse_case(&text)
}

fn check_finite(issues: &mut Vec<Issue>, path: String, v: f64) {
    if !v.is_finite() {
        issues.push(Issue::new(path, "value must be finite"));
    }
}

/// Every type-invariant violation in the file, each tagged with its field path.
pub fn validate_case_file(file: &CaseFile) -> Vec<Issue> {
    let mut issues = Vec::new();
    if file.schema_version != SCHEMA_VERSION {
        issues.push(Issue::new("schema_version", format!("expected {SCHEMA_VERSION}")));
    }

    let power_demand = file.demand.power_mw.values();
    let heat_demand = file.demand.heat_mwth.values();
    if power_demand.is_empty() {
        issues.push(Issue::new("demand.power_mw", "needs at least one interval"));
    }
    if power_demand.len() != heat_demand.len() {
        issues.push(Issue::new(
            "demand.heat_mwth",
            format!("{} intervals, but demand.power_mw has {}", heat_demand.len(), power_demand.len()),
        ));
    }
    for (name, series) in [("power_mw", &power_demand), ("heat_mwth", &heat_demand)] {
        for (t, &v) in series.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                issues.push(Issue::new(format!("demand.{name}[{t}]"), "must be finite and nonnegative"));
            }
        }
    }
    let dynamic = power_demand.len() > 1;

    if file.power_units.len() + file.chp_units.len() == 0 {
        issues.push(Issue::new("power_units", "case needs at least one electricity-producing unit"));
    }
    if file.chp_units.len() + file.heat_units.len() == 0 && heat_demand.iter().any(|&h| h > 0.0) {
        issues.push(Issue::new("heat_units", "heat demand is positive but no unit produces heat"));
    }

    for (i, u) in file.power_units.iter().enumerate() {
        let at = |f: &str| format!("power_units[{i}].{f}");
        for (f, v) in [
            ("p_min_mw", u.p_min_mw),
            ("p_max_mw", u.p_max_mw),
            ("cost_const", u.cost_const),
            ("cost_per_mw", u.cost_per_mw),
            ("cost_per_mw2", u.cost_per_mw2),
            ("cost_per_mw3", u.cost_per_mw3),
            ("emission_const_kg", u.emission_const_kg),
            ("emission_per_mw_kg", u.emission_per_mw_kg),
            ("emission_per_mw2_kg", u.emission_per_mw2_kg),
            ("emission_exp_coeff_kg", u.emission_exp_coeff_kg),
            ("emission_exp_rate_per_mw", u.emission_exp_rate_per_mw),
            ("co2_per_mw_kg", u.co2_per_mw_kg),
        ] {
            check_finite(&mut issues, at(f), v);
        }
        if !(u.p_min_mw < u.p_max_mw) {
            issues.push(Issue::new(at("p_max_mw"), "must exceed p_min_mw"));
        }
        if u.p_min_mw < 0.0 {
            issues.push(Issue::new(at("p_min_mw"), "must be nonnegative"));
        }
        if let Some(v) = u.valve_point {
            check_finite(&mut issues, at("valve_point.frequency_per_mw"), v.frequency_per_mw);
            if !v.amplitude.is_finite() || v.amplitude < 0.0 {
                issues.push(Issue::new(at("valve_point.amplitude"), "must be finite and nonnegative"));
            }
        }
        for (f, r) in [("ramp_up_mw", u.ramp_up_mw), ("ramp_down_mw", u.ramp_down_mw)] {
            match r {
                Some(r) if !r.is_finite() || r < 0.0 => {
                    issues.push(Issue::new(at(f), "must be finite and nonnegative"))
                }
                None if dynamic => issues.push(Issue::new(at(f), "required for multi-interval cases")),
                _ => {}
            }
        }
    }

    for (j, u) in file.chp_units.iter().enumerate() {
        let at = |f: &str| format!("chp_units[{j}].{f}");
        for (f, v) in [
            ("cost_const", u.cost_const),
            ("cost_per_mw", u.cost_per_mw),
            ("cost_per_mw2", u.cost_per_mw2),
            ("cost_per_mwth", u.cost_per_mwth),
            ("cost_per_mwth2", u.cost_per_mwth2),
            ("cost_per_mw_mwth", u.cost_per_mw_mwth),
            ("emission_per_mw_kg", u.emission_per_mw_kg),
            ("co2_per_mw_kg", u.co2_per_mw_kg),
        ] {
            check_finite(&mut issues, at(f), v);
        }
        let region = &u.operating_region;
        if region.source.trim().is_empty() {
            issues.push(Issue::new(at("operating_region.source"), "provenance of the vertex data is required"));
        }
        if region.pieces.is_empty() {
            issues.push(Issue::new(at("operating_region.pieces"), "needs at least one polygon"));
        }
        for (k, piece) in region.pieces.iter().enumerate() {
            if let Err(e) = piece.validate() {
                issues.push(Issue::new(at(&format!("operating_region.pieces[{k}]")), e.to_string()));
            }
        }
    }

    for (k, u) in file.heat_units.iter().enumerate() {
        let at = |f: &str| format!("heat_units[{k}].{f}");
        for (f, v) in [
            ("h_min_mwth", u.h_min_mwth),
            ("h_max_mwth", u.h_max_mwth),
            ("cost_const", u.cost_const),
            ("cost_per_mwth", u.cost_per_mwth),
            ("cost_per_mwth2", u.cost_per_mwth2),
            ("emission_per_mwth_kg", u.emission_per_mwth_kg),
            ("co2_per_mwth_kg", u.co2_per_mwth_kg),
        ] {
            check_finite(&mut issues, at(f), v);
        }
        if u.h_min_mwth < 0.0 {
            issues.push(Issue::new(at("h_min_mwth"), "must be nonnegative"));
        }
        if u.h_min_mwth > u.h_max_mwth {
            issues.push(Issue::new(at("h_max_mwth"), "must be at least h_min_mwth"));
        }
    }

    if let Some(loss) = &file.loss {
        let n = file.power_units.len() + file.chp_units.len();
        if loss.b_matrix_per_mw.len() != n {
            issues.push(Issue::new(
                "loss.b_matrix_per_mw",
                format!("expected {n} rows (one per electricity-producing unit), got {}", loss.b_matrix_per_mw.len()),
            ));
        }
        for (r, row) in loss.b_matrix_per_mw.iter().enumerate() {
            if row.len() != n {
                issues.push(Issue::new(
                    format!("loss.b_matrix_per_mw[{r}]"),
                    format!("expected {n} columns, got {}", row.len()),
                ));
            }
            for (c, &v) in row.iter().enumerate() {
                check_finite(&mut issues, format!("loss.b_matrix_per_mw[{r}][{c}]"), v);
            }
        }
        for r in 0..loss.b_matrix_per_mw.len() {
            for c in r + 1..loss.b_matrix_per_mw[r].len() {
                let Some(&mirror) = loss.b_matrix_per_mw.get(c).and_then(|row| row.get(r)) else {
                    continue;
                };
                let v = loss.b_matrix_per_mw[r][c];
                if (v - mirror).abs() > SYMMETRY_TOLERANCE {
                    issues.push(Issue::new(
                        format!("loss.b_matrix_per_mw[{r}][{c}]"),
                        format!("{v} differs from mirrored cell [{c}][{r}] = {mirror}; matrix must be symmetric"),
                    ));
                }
            }
        }
        if loss.b_linear.len() != n {
            issues.push(Issue::new("loss.b_linear", format!("expected {n} entries, got {}", loss.b_linear.len())));
        }
        for (i, &v) in loss.b_linear.iter().enumerate() {
            check_finite(&mut issues, format!("loss.b_linear[{i}]"), v);
        }
        check_finite(&mut issues, "loss.b_const_mw".into(), loss.b_const_mw);
    }
    issues
}
