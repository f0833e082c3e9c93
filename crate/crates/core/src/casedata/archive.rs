use std::io::Write;
use std::path::Path;

use super::ArchiveError;
use crate::model::{Dispatch, DispatchSolution, FeasibilityReport};
use crate::optimizer::ParetoArchive;

/// Leading columns of every archive CSV, before the per-unit outputs.
pub const ARCHIVE_HEADER_PREFIX: [&str; 8] = [
    "cost_usd",
    "emission_kg",
    "loss_mw",
    "power_residual_mw",
    "heat_residual_mwth",
    "region_violation",
    "bound_violation",
    "feasible",
];

/// One parsed archive row.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveRow {
    pub cost: f64,
    pub emission: f64,
    pub loss: f64,
    pub report: FeasibilityReport,
    pub feasible: bool,
    pub dispatch: Dispatch,
}

fn sorted(solutions: &[DispatchSolution]) -> Vec<&DispatchSolution> {
    let mut v: Vec<&DispatchSolution> = solutions.iter().collect();
    v.sort_by(|a, b| a.cost.total_cmp(&b.cost).then(a.emission.total_cmp(&b.emission)));
    v
}

/// Write solutions as CSV (one header line, one row per solution, ascending cost).
pub fn write_archive<W: Write>(solutions: &[DispatchSolution], out: W) -> Result<(), ArchiveError> {
    let Some(first) = solutions.first() else {
        return Err(ArchiveError::Empty);
    };
    let d = &first.dispatch;
    let mut header: Vec<String> = ARCHIVE_HEADER_PREFIX.iter().map(|s| s.to_string()).collect();
    header.extend((1..=d.power.len()).map(|i| format!("p{i}_mw")));
    header.extend((1..=d.chp_power.len()).map(|j| format!("chp{j}_p_mw")));
    header.extend((1..=d.chp_heat.len()).map(|j| format!("chp{j}_h_mwth")));
    header.extend((1..=d.heat.len()).map(|k| format!("h{k}_mwth")));

    let mut w = csv::Writer::from_writer(out);
    w.write_record(&header)?;
    for s in sorted(solutions) {
        let r = &s.report;
        let mut row: Vec<String> = [
            s.cost,
            s.emission,
            s.loss,
            r.power_residual,
            r.heat_residual,
            r.region_violation,
            r.bound_violation,
        ]
        .iter()
        .map(|v| v.to_string())
        .collect();
        row.push(if s.is_feasible() { "1".into() } else { "0".into() });
        let d = &s.dispatch;
        row.extend(d.power.iter().chain(&d.chp_power).chain(&d.chp_heat).chain(&d.heat).map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Save an archive to `path`. An empty archive is an error and creates no file.
pub fn save_archive(archive: &ParetoArchive, path: impl AsRef<Path>) -> Result<(), ArchiveError> {
    if archive.is_empty() {
        return Err(ArchiveError::Empty);
    }
    let mut buf = Vec::new();
    write_archive(archive.solutions(), &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

/// Read an archive CSV written by [`write_archive`].
pub fn read_archive(path: impl AsRef<Path>) -> Result<Vec<ArchiveRow>, ArchiveError> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.len() < ARCHIVE_HEADER_PREFIX.len()
        || header.iter().zip(ARCHIVE_HEADER_PREFIX).any(|(a, b)| a != b)
    {
        return Err(ArchiveError::Malformed("unexpected header".into()));
    }
    let count = |pred: &dyn Fn(&str) -> bool| header.iter().filter(|h| pred(h)).count();
    let n_p = count(&|h| h.starts_with('p') && h.ends_with("_mw") && !h.starts_with("power"));
    let n_c = count(&|h| h.starts_with("chp") && h.ends_with("_p_mw"));
    let n_h = count(&|h| h.starts_with('h') && h.ends_with("_mwth") && !h.starts_with("heat"));
    let prefix = ARCHIVE_HEADER_PREFIX.len();
    if header.len() != prefix + n_p + 2 * n_c + n_h {
        return Err(ArchiveError::Malformed("column count does not match unit columns".into()));
    }

    let mut rows = Vec::new();
    for record in r.records() {
        let record = record?;
        let num = |i: usize| -> Result<f64, ArchiveError> {
            record
                .get(i)
                .ok_or_else(|| ArchiveError::Malformed(format!("missing column {i}")))?
                .parse::<f64>()
                .map_err(|e| ArchiveError::Malformed(format!("column {i}: {e}")))
        };
        let range = |start: usize, len: usize| -> Result<Vec<f64>, ArchiveError> { (start..start + len).map(num).collect() };
        let feasible = match record.get(7) {
            Some("1") => true,
            Some("0") => false,
            other => return Err(ArchiveError::Malformed(format!("feasible flag {other:?}"))),
        };
        let base = prefix;
        rows.push(ArchiveRow {
            cost: num(0)?,
            emission: num(1)?,
            loss: num(2)?,
            report: FeasibilityReport {
                power_residual: num(3)?,
                heat_residual: num(4)?,
                region_violation: num(5)?,
                bound_violation: num(6)?,
                repair_failed: false,
            },
            feasible,
            dispatch: Dispatch {
                power: range(base, n_p)?,
                chp_power: range(base + n_p, n_c)?,
                chp_heat: range(base + n_p + n_c, n_c)?,
                heat: range(base + n_p + 2 * n_c, n_h)?,
            },
        });
    }
    Ok(rows)
}
