use super::OptimizerError;

/// Unit-simplex reference directions.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePointSet {
    points: Vec<Vec<f64>>,
}

impl ReferencePointSet {
    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_objectives(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// Build from arbitrary nonzero directions (not necessarily on the simplex).
    pub fn from_directions(points: Vec<Vec<f64>>) -> Result<Self, OptimizerError> {
        if points.is_empty() || points.iter().any(|p| p.iter().all(|&v| v == 0.0)) {
            return Err(OptimizerError::Parameter("reference directions must be nonzero".into()));
        }
        Ok(Self { points })
    }
}

/// All simplex-lattice points with denominator `divisions` over `m` objectives,
/// `C(divisions + m − 1, m − 1)` of them.
pub fn das_dennis_points(divisions: usize, m_objectives: usize) -> Result<ReferencePointSet, OptimizerError> {
    if divisions == 0 {
        return Err(OptimizerError::Parameter("divisions must be at least 1".into()));
    }
    if m_objectives == 0 {
        return Err(OptimizerError::Parameter("need at least one objective".into()));
    }
    let mut points = Vec::new();
    let mut current = vec![0usize; m_objectives];
    lattice(divisions, 0, divisions, &mut current, &mut points);
    Ok(ReferencePointSet { points })
}

fn lattice(divisions: usize, dim: usize, left: usize, current: &mut [usize], out: &mut Vec<Vec<f64>>) {
    if dim == current.len() - 1 {
        current[dim] = left;
        out.push(current.iter().map(|&k| k as f64 / divisions as f64).collect());
        return;
    }
    for k in (0..=left).rev() {
        current[dim] = k;
        lattice(divisions, dim + 1, left - k, current, out);
    }
}
