use std::fmt::Write;

use super::BcsReport;
use crate::model::DispatchCase;

impl BcsReport {
    /// Plain-text table of unit outputs and objectives, one column per BCS.
    pub fn to_text(&self, case: &DispatchCase, title: &str) -> String {
        let mut rows: Vec<(String, Vec<String>)> = Vec::new();
        let cols = &self.clusters;
        let column = |f: &dyn Fn(usize) -> f64, digits: usize| -> Vec<String> {
            (0..cols.len()).map(|c| format!("{:.*}", digits, f(c))).collect()
        };
        for (i, u) in case.power_units.iter().enumerate() {
            rows.push((format!("{} P (MW)", u.name), column(&|c| cols[c].best.dispatch.power[i], 4)));
        }
        for (j, u) in case.chp_units.iter().enumerate() {
            rows.push((format!("{} O (MW)", u.name), column(&|c| cols[c].best.dispatch.chp_power[j], 4)));
            rows.push((format!("{} H (MWth)", u.name), column(&|c| cols[c].best.dispatch.chp_heat[j], 4)));
        }
        for (k, u) in case.heat_units.iter().enumerate() {
            rows.push((format!("{} T (MWth)", u.name), column(&|c| cols[c].best.dispatch.heat[k], 4)));
        }
        rows.push(("Total power (MW)".into(), column(&|c| cols[c].best.dispatch.total_power(), 4)));
        rows.push(("Total heat (MWth)".into(), column(&|c| cols[c].best.dispatch.total_heat(), 4)));
        rows.push(("P_L (MW)".into(), column(&|c| cols[c].best.loss, 4)));
        rows.push(("Cost ($)".into(), column(&|c| cols[c].best.cost, 4)));
        rows.push(("Emission (kg)".into(), column(&|c| cols[c].best.emission, 6)));
        rows.push(("RP".into(), column(&|c| cols[c].schemes[0].rp, 6)));
        rows.push(("Cluster size".into(), cols.iter().map(|c| c.schemes.len().to_string()).collect()));

        let label_width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(8);
        let value_width = rows.iter().flat_map(|r| r.1.iter().map(String::len)).max().unwrap_or(0).max(12);
        let mut out = String::new();
        writeln!(out, "{title}").unwrap();
        write!(out, "{:<label_width$}", "").unwrap();
        for c in cols {
            write!(out, "  {:>value_width$}", format!("BCS {}", c.label)).unwrap();
        }
        out.push('\n');
        for (label, values) in rows {
            write!(out, "{label:<label_width$}").unwrap();
            for v in values {
                write!(out, "  {v:>value_width$}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}
