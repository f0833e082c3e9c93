use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chpeed::casedata::{save_archive, CaseError, ConfigError};
use chpeed::decision::BcsReport;
use chpeed::metrics::multi_run_report;
use chpeed::model::{DispatchCase, POWER_BALANCE_TOLERANCE};
use chpeed::optimizer::{DynamicResult, OptimizerError};
use chpeed::{load_case, Algorithm, Error, ParetoArchive, RunConfig};
use serde::Serialize;

use crate::RunArgs;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    InfeasibleCase(String),
    #[error("{0}")]
    Runtime(String),
    #[error("archive contains infeasible solutions; artifacts written to {0}")]
    InfeasibleArchive(PathBuf),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 3,
            CliError::Validation(_) => 4,
            CliError::InfeasibleCase(_) => 5,
            CliError::Runtime(_) => 6,
            CliError::InfeasibleArchive(_) => 7,
        }
    }
}

impl From<CaseError> for CliError {
    fn from(e: CaseError) -> Self {
        match e {
            CaseError::Validation(issues) => {
                let mut msg = format!("{} validation issue(s):", issues.len());
                for i in &issues {
                    write!(msg, "\n  {i}").unwrap();
                }
                CliError::Validation(msg)
            }
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Invalid(_) => CliError::Validation(e.to_string()),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<OptimizerError> for CliError {
    fn from(e: OptimizerError) -> Self {
        match e {
            OptimizerError::InfeasibleCase(_) => CliError::InfeasibleCase(e.to_string()),
            OptimizerError::Parameter(_) => CliError::Validation(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Case(e) => e.into(),
            Error::Config(e) => e.into(),
            Error::Optimizer(e) => e.into(),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("cannot write {}: {e}", path.display()))
}

/// Everything needed to reproduce a run together with the files it produced.
#[derive(Debug, Serialize)]
struct ExperimentManifest {
    command: String,
    case: String,
    output_dir: String,
    runs: Option<usize>,
    config: RunConfig,
    artifacts: Vec<String>,
}

struct Output {
    dir: PathBuf,
    artifacts: Vec<String>,
}

impl Output {
    fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), artifacts: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
        }
        std::fs::write(&path, contents).map_err(|e| io_error(&path, e))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn archive(&mut self, name: &str, archive: &ParetoArchive) -> Result<(), CliError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
        }
        save_archive(archive, &path).map_err(|e| io_error(&path, e))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn finish(mut self, command: &str, case: &Path, runs: Option<usize>, config: &RunConfig) -> Result<(), CliError> {
        self.artifacts.push("manifest.toml".into());
        let manifest = ExperimentManifest {
            command: command.into(),
            case: case.display().to_string(),
            output_dir: self.dir.display().to_string(),
            runs,
            config: config.clone(),
            artifacts: self.artifacts.clone(),
        };
        let text = toml::to_string(&manifest).map_err(|e| CliError::Runtime(e.to_string()))?;
        let path = self.dir.join("manifest.toml");
        std::fs::write(&path, text).map_err(|e| io_error(&path, e))
    }
}

fn effective_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(pop) = args.pop {
        config.population_size = pop;
        if args.config.is_none() {
            config.reference_divisions = None;
        }
    }
    if let Some(iters) = args.iters {
        config.max_iterations = iters;
    }
    if let Some(theta) = args.theta {
        config.theta = theta;
    }
    if let Some(algorithm) = args.algorithm {
        config.algorithm = algorithm;
    }
    config.validate()?;
    Ok(config)
}

fn front_csv(archive: &ParetoArchive) -> String {
    let mut out = String::from("cost_usd,emission_kg\n");
    for [c, e] in archive.front() {
        writeln!(out, "{c},{e}").unwrap();
    }
    out
}

fn summary(report: &BcsReport) -> String {
    let mut out = String::new();
    for c in &report.clusters {
        writeln!(
            out,
            "BCS {}: cost {:.2} $, emission {:.4} kg, loss {:.3} MW, RP {:.4} ({} schemes)",
            c.label,
            c.best.cost,
            c.best.emission,
            c.best.loss,
            c.schemes[0].rp,
            c.schemes.len()
        )
        .unwrap();
    }
    out
}

pub fn solve(case_path: &Path, args: &RunArgs) -> Result<(), CliError> {
    let case = load_case(case_path)?;
    let config = effective_config(args)?;
    if case.is_dynamic() {
        let result = chpeed::solve_dynamic(&case, &config)?;
        return write_dynamic(&case, case_path, &config, args, &result);
    }
    let solved = chpeed::solve(&case, &config)?;
    let mut out = Output::create(&args.out)?;
    out.archive("archive.csv", &solved.archive)?;
    out.write("front.csv", front_csv(&solved.archive))?;
    let title = format!("{} ({}, seed {})", case.name, config.algorithm, config.seed);
    out.write("bcs_report.txt", solved.report.to_text(&case, &title))?;
    out.write("bcs_report.json", solved.report.to_json())?;
    out.finish("solve", case_path, None, &config)?;

    print!("{}", solved.report.to_text(&case, &title));
    println!();
    print!("{}", summary(&solved.report));
    println!("{} archive members written to {}", solved.archive.len(), args.out.display());
    if solved.archive.solutions().iter().any(|s| !s.is_feasible()) {
        return Err(CliError::InfeasibleArchive(args.out.clone()));
    }
    Ok(())
}

fn write_dynamic(
    case: &DispatchCase,
    case_path: &Path,
    config: &RunConfig,
    args: &RunArgs,
    result: &DynamicResult,
) -> Result<(), CliError> {
    let mut out = Output::create(&args.out)?;
    let mut all_feasible = true;
    let mut text = String::new();
    for chain in &result.chains {
        let label = chain.label;
        let mut schedule = String::from("interval,cost_usd,emission_kg,loss_mw,power_demand_mw,heat_demand_mwth,feasible");
        for i in 1..=case.power_units.len() {
            write!(schedule, ",p{i}_mw").unwrap();
        }
        for j in 1..=case.chp_units.len() {
            write!(schedule, ",chp{j}_p_mw,chp{j}_h_mwth").unwrap();
        }
        for k in 1..=case.heat_units.len() {
            write!(schedule, ",h{k}_mwth").unwrap();
        }
        schedule.push('\n');
        for r in &chain.intervals {
            let t = r.interval;
            let s = &r.chosen;
            all_feasible &= r.archive.solutions().iter().all(|s| s.is_feasible());
            write!(
                schedule,
                "{},{},{},{},{},{},{}",
                t + 1,
                s.cost,
                s.emission,
                s.loss,
                case.power_demand[t],
                case.heat_demand[t],
                u8::from(s.is_feasible())
            )
            .unwrap();
            let d = &s.dispatch;
            for v in &d.power {
                write!(schedule, ",{v}").unwrap();
            }
            for (p, h) in d.chp_power.iter().zip(&d.chp_heat) {
                write!(schedule, ",{p},{h}").unwrap();
            }
            for v in &d.heat {
                write!(schedule, ",{v}").unwrap();
            }
            schedule.push('\n');
            let stem = format!("bcs{label}/t{:02}", t + 1);
            out.archive(&format!("{stem}_archive.csv"), &r.archive)?;
            out.write(&format!("{stem}_front.csv"), front_csv(&r.archive))?;
            let title = format!("{} interval {} (BCS {label} chain)", case.name, t + 1);
            out.write(&format!("{stem}_bcs_report.txt"), r.report.to_text(case, &title))?;
        }
        out.write(&format!("bcs{label}/schedule.csv"), schedule)?;
        all_feasible &= chain.ramp.is_feasible();
        writeln!(
            text,
            "BCS {label} chain: total cost {:.2} $, total emission {:.4} kg, max ramp violation {:.3e} MW",
            chain.total_cost(),
            chain.total_emission(),
            chain.ramp.max_violation()
        )
        .unwrap();
    }
    out.write("bcs_report.txt", &text)?;
    out.finish("solve", case_path, None, config)?;
    print!("{text}");
    if !all_feasible {
        return Err(CliError::InfeasibleArchive(args.out.clone()));
    }
    Ok(())
}

pub fn compare(case_path: &Path, args: &RunArgs, runs: usize) -> Result<(), CliError> {
    let case = load_case(case_path)?;
    let config = effective_config(args)?;
    if runs == 0 {
        return Err(CliError::Validation("--runs must be at least 1".into()));
    }
    let issues = case.infeasibility(0);
    if !issues.is_empty() {
        return Err(CliError::InfeasibleCase(issues.join("; ")));
    }
    let configs = [config.clone().with_algorithm(Algorithm::ThetaDea), config.clone().with_algorithm(Algorithm::Nsga2)];
    let report = multi_run_report(&case, &configs, runs, config.seed).map_err(|e| CliError::Runtime(e.to_string()))?;

    let mut out = Output::create(&args.out)?;
    out.write("metrics.csv", report.to_csv())?;
    out.write("runs.csv", report.runs_csv())?;
    let mut reference = String::from("cost_usd,emission_kg\n");
    for [c, e] in &report.reference_front {
        writeln!(reference, "{c},{e}").unwrap();
    }
    out.write("reference_front.csv", reference)?;
    out.finish("compare", case_path, Some(runs), &config)?;
    print!("{}", report.to_csv());
    Ok(())
}

pub fn validate(case_path: &Path) -> Result<(), CliError> {
    let case = load_case(case_path)?;
    let (plo, phi) = case.power_capacity();
    let (hlo, hhi) = case.heat_capacity();
    let mut issues = Vec::new();
    for t in 0..case.n_intervals() {
        issues.extend(case.infeasibility(t));
    }
    println!(
        "{}: N_p={} N_c={} N_h={}, {}",
        case.name,
        case.power_units.len(),
        case.chp_units.len(),
        case.heat_units.len(),
        if issues.is_empty() { "demand feasible" } else { "demand infeasible" }
    );
    println!("intervals: {}", case.n_intervals());
    println!("power capacity: {plo} .. {phi} MW");
    println!("heat capacity: {hlo} .. {hhi} MWth");
    for t in 0..case.n_intervals() {
        println!("  interval {}: power demand {} MW, heat demand {} MWth", t + 1, case.power_demand[t], case.heat_demand[t]);
    }
    for u in &case.chp_units {
        let region = &u.operating_region;
        let (lo, hi) = region.bounding_box();
        let vertices: Vec<String> = region.pieces.iter().map(|p| p.vertices().len().to_string()).collect();
        println!(
            "  {}: {} convex piece(s) with {} vertices, P {}..{} MW, H {}..{} MWth",
            u.name,
            region.pieces.len(),
            vertices.join("+"),
            lo.power,
            hi.power,
            lo.heat,
            hi.heat
        );
    }
    match &case.loss {
        Some(l) => println!("loss model: B-coefficients over {} generators", l.dimension()),
        None => println!("loss model: none (lossless balance, tolerance {POWER_BALANCE_TOLERANCE} MW)"),
    }
    if !issues.is_empty() {
        for i in &issues {
            println!("  {i}");
        }
        return Err(CliError::InfeasibleCase(issues.join("; ")));
    }
    Ok(())
}
