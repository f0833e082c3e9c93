use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{from_toml, ConfigError, Issue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Algorithm {
    #[default]
    #[serde(rename = "theta-dea")]
    ThetaDea,
    #[serde(rename = "nsga-ii")]
    Nsga2,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::ThetaDea => "theta-dea",
            Algorithm::Nsga2 => "nsga-ii",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "theta-dea" | "thetadea" | "theta_dea" => Ok(Algorithm::ThetaDea),
            "nsga-ii" | "nsga2" | "nsgaii" => Ok(Algorithm::Nsga2),
            other => Err(format!("unknown algorithm `{other}` (expected theta-dea or nsga-ii)")),
        }
    }
}

/// Simulated binary crossover and polynomial mutation settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VariationConfig {
    pub crossover_probability: f64,
    pub crossover_eta: f64,
    /// Per-variable mutation probability; `None` means `1 / n_variables`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation_probability: Option<f64>,
    pub mutation_eta: f64,
}

impl Default for VariationConfig {
    fn default() -> Self {
        Self { crossover_probability: 1.0, crossover_eta: 30.0, mutation_probability: None, mutation_eta: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FcmConfig {
    pub n_clusters: usize,
    pub fuzziness: f64,
    pub epsilon: f64,
    pub max_iter: usize,
}

impl Default for FcmConfig {
    fn default() -> Self {
        Self { n_clusters: 2, fuzziness: 2.0, epsilon: 1e-6, max_iter: 300 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrpConfig {
    /// Indicator weights `(cost, emission)`.
    pub weights: Vec<f64>,
    /// Distinguishing coefficient of the grey relational coefficient.
    pub resolution: f64,
}

impl Default for GrpConfig {
    fn default() -> Self {
        Self { weights: vec![0.5, 0.5], resolution: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub population_size: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Penalty of the perpendicular distance in the θ-fitness.
    pub theta: f64,
    /// Simplex-lattice divisions; `None` means `population_size − 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_divisions: Option<usize>,
    pub variation: VariationConfig,
    pub fcm: FcmConfig,
    pub grp: GrpConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::ThetaDea,
            population_size: 100,
            max_iterations: 100,
            seed: 0,
            theta: 5.0,
            reference_divisions: None,
            variation: VariationConfig::default(),
            fcm: FcmConfig::default(),
            grp: GrpConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn divisions(&self) -> usize {
        self.reference_divisions.unwrap_or(self.population_size.saturating_sub(1).max(1))
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = from_toml(text).map_err(|(path, message)| ConfigError::Parse { path, message })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configs always serialize")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut issues = Vec::new();
        if self.population_size < 4 || self.population_size % 2 != 0 {
            issues.push(Issue::new("population_size", "must be even and at least 4"));
        }
        if !(self.theta > 0.0) || !self.theta.is_finite() {
            issues.push(Issue::new("theta", "must be positive"));
        }
        if self.reference_divisions == Some(0) {
            issues.push(Issue::new("reference_divisions", "must be at least 1"));
        }
        let v = &self.variation;
        if !(0.0..=1.0).contains(&v.crossover_probability) {
            issues.push(Issue::new("variation.crossover_probability", "must lie in [0, 1]"));
        }
        if let Some(p) = v.mutation_probability {
            if !(0.0..=1.0).contains(&p) {
                issues.push(Issue::new("variation.mutation_probability", "must lie in [0, 1]"));
            }
        }
        if !(v.crossover_eta >= 0.0) || !(v.mutation_eta >= 0.0) {
            issues.push(Issue::new("variation", "distribution indices must be nonnegative"));
        }
        if self.fcm.n_clusters < 1 {
            issues.push(Issue::new("fcm.n_clusters", "must be at least 1"));
        }
        if !(self.fcm.fuzziness > 1.0) || !self.fcm.fuzziness.is_finite() {
            issues.push(Issue::new("fcm.fuzziness", "must exceed 1"));
        }
        if !(self.fcm.epsilon > 0.0) {
            issues.push(Issue::new("fcm.epsilon", "must be positive"));
        }
        if self.grp.weights.len() != 2 {
            issues.push(Issue::new("grp.weights", "needs one weight per objective (2)"));
        }
        if self.grp.weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            issues.push(Issue::new("grp.weights", "weights must be finite and nonnegative"));
        } else if self.grp.weights.iter().all(|&w| w == 0.0) {
            issues.push(Issue::new("grp.weights", "weights must not all be zero"));
        }
        if !(self.grp.resolution > 0.0 && self.grp.resolution <= 1.0) {
            issues.push(Issue::new("grp.resolution", "must lie in (0, 1]"));
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(issues))
        }
    }
}
