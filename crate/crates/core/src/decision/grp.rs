use super::DecisionError;

/// Benefit-oriented decision matrix scaled to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardMatrix {
    pub values: Vec<Vec<f64>>,
    /// Columns with zero span, set to all ones.
    pub constant: Vec<bool>,
}

/// `x' = (max − x)/(max − min)` per column of minimized indicators.
pub fn standardize_matrix(schemes: &[Vec<f64>]) -> Result<StandardMatrix, DecisionError> {
    if schemes.len() < 2 {
        return Err(DecisionError::TooFewSchemes(schemes.len()));
    }
    let cols = schemes[0].len();
    let mut values = vec![vec![0.0; cols]; schemes.len()];
    let mut constant = vec![false; cols];
    for i in 0..cols {
        let (lo, hi) = schemes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r[i]), hi.max(r[i])));
        let span = hi - lo;
        constant[i] = !(span > 0.0);
        for (row, scheme) in values.iter_mut().zip(schemes) {
            row[i] = if constant[i] { 1.0 } else { (hi - scheme[i]) / span };
        }
    }
    Ok(StandardMatrix { values, constant })
}

/// Grey relational coefficients against the positive ideal (column maxima)
/// and the negative ideal (column minima), `(Δmin + ρΔmax)/(Δ + ρΔmax)` with
/// global extrema of each deviation matrix.
pub fn grey_relation_coefficients(std: &StandardMatrix, resolution: f64) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rows = &std.values;
    let cols = rows.first().map_or(0, Vec::len);
    let col_max: Vec<f64> = (0..cols).map(|i| rows.iter().map(|r| r[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let col_min: Vec<f64> = (0..cols).map(|i| rows.iter().map(|r| r[i]).fold(f64::INFINITY, f64::min)).collect();
    let coefficients = |ideal: &[f64]| {
        let delta: Vec<Vec<f64>> =
            rows.iter().map(|r| r.iter().zip(ideal).map(|(x, z)| (x - z).abs()).collect()).collect();
        let dmin = delta.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let dmax = delta.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        delta
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&d| {
                        let den = d + resolution * dmax;
                        if den > 0.0 {
                            (dmin + resolution * dmax) / den
                        } else {
                            1.0
                        }
                    })
                    .collect()
            })
            .collect::<Vec<Vec<f64>>>()
    };
    (coefficients(&col_max), coefficients(&col_min))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Projection {
    pub prj_plus: f64,
    pub prj_minus: f64,
    pub rp: f64,
}

/// `Prj = Σ Grc_i · r_i² / sqrt(Σ r_i²)` against both ideals and
/// `RP = Prj⁺ / (Prj⁺ + Prj⁻)`.
pub fn relative_projection(
    grc_plus: &[Vec<f64>],
    grc_minus: &[Vec<f64>],
    weights: &[f64],
) -> Result<Vec<Projection>, DecisionError> {
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) || weights.iter().all(|&w| w == 0.0) {
        return Err(DecisionError::Parameter("weights must be nonnegative and not all zero".into()));
    }
    let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    let project = |row: &[f64]| row.iter().zip(weights).map(|(g, r)| g * r * r / norm).sum::<f64>();
    grc_plus
        .iter()
        .zip(grc_minus)
        .map(|(p, m)| {
            let prj_plus = project(p);
            let prj_minus = project(m);
            let total = prj_plus + prj_minus;
            if !(total > 0.0) {
                return Err(DecisionError::Degenerate("relative projection has zero denominator".into()));
            }
            Ok(Projection { prj_plus, prj_minus, rp: prj_plus / total })
        })
        .collect()
}
