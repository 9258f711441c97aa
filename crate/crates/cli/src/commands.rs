//! The `run`, `sweep`, `calibrate` and `report` commands.
//!
//! Model evaluation may fan out across threads; every file write happens on
//! the calling thread, in scenario order.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use biochar_core::calibrate::{residuals, CalibrationResiduals};
use biochar_core::sweep::{grid, grid_parameter_sets, scenario_npv};
use biochar_core::{
    build_ledger, calibrate, evaluate, paper_brazil_scenarios, Anchors, MetricsReport,
    ParameterSet, ScenarioSpec, SweepResult,
};
use rayon::prelude::*;

use crate::config::{self, ConfigError};
use crate::export;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Model(biochar_core::Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("calibration failed: {0}")]
    Calibration(biochar_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage(_) | CliError::Model(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Calibration(_) => 4,
        }
    }
}

impl From<biochar_core::Error> for CliError {
    fn from(e: biochar_core::Error) -> Self {
        CliError::Model(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Both,
}

impl OutputFormat {
    fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// The six 10k/20k/50k ha farms, A and B, with parameters calibrated to
    /// the published small-farm anchors.
    PaperBrazil,
}

/// Options shared by every command.
#[derive(Debug, Clone)]
pub struct Global {
    pub config: Option<PathBuf>,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub preset: Option<Preset>,
}

/// Parameters and scenarios after config and preset are applied.
#[derive(Debug, Clone)]
pub struct Setup {
    pub params: ParameterSet,
    pub scenarios: Vec<ScenarioSpec>,
}

/// Loads the config (defaults when absent). The `paper-brazil` preset calibrates the
/// loaded parameters to [`Anchors::PAPER`]. Scenarios come from the config,
/// else the six built-in farms.
pub fn setup(g: &Global) -> Result<Setup, CliError> {
    let doc = match &g.config {
        Some(path) => config::load_file(path)?,
        None => config::ConfigDocument {
            parameters: ParameterSet::default(),
            scenarios: None,
        },
    };
    let mut params = doc.parameters;
    if g.preset == Some(Preset::PaperBrazil) {
        params = calibrate(&params, &Anchors::PAPER).map_err(CliError::Calibration)?;
    }
    let scenarios = doc.scenarios.unwrap_or_else(paper_brazil_scenarios);
    Ok(Setup { params, scenarios })
}

fn selector_matches(sel: &str, label: &str) -> bool {
    label.eq_ignore_ascii_case(sel) || label.split('-').any(|part| part.eq_ignore_ascii_case(sel))
}

/// Scenarios whose label equals a selector or has it as a `-`-separated part
/// (`small` matches `small-A`; `B` matches every `*-B`). No selectors means
/// all scenarios.
pub fn select(
    scenarios: &[ScenarioSpec],
    selectors: &[String],
) -> Result<Vec<ScenarioSpec>, CliError> {
    let picked: Vec<ScenarioSpec> = scenarios
        .iter()
        .filter(|s| {
            selectors.is_empty() || selectors.iter().any(|sel| selector_matches(sel, &s.label))
        })
        .cloned()
        .collect();
    if picked.is_empty() {
        Err(CliError::Usage("no scenarios selected".into()))
    } else {
        Ok(picked)
    }
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })
}

fn write_file(
    dir: &Path,
    name: &str,
    contents: &str,
    written: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    written.push(path);
    Ok(())
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub reports: Vec<MetricsReport>,
    pub files: Vec<PathBuf>,
}

/// Simulates each selected scenario, writes `ledger-<label>.{csv,json}`,
/// `metrics-<label>.json` and `ranking.csv`, and prints one summary line per
/// scenario plus the ranking table.
pub fn run(
    g: &Global,
    selectors: &[String],
    stdout: &mut dyn Write,
) -> Result<RunOutcome, CliError> {
    let setup = setup(g)?;
    let scenarios = select(&setup.scenarios, selectors)?;
    let p = &setup.params;

    let results = scenarios
        .par_iter()
        .map(|s| {
            let ledger = build_ledger(p, s)?;
            let report = evaluate(&ledger, p)?;
            Ok((ledger, report))
        })
        .collect::<Result<Vec<_>, biochar_core::Error>>()?;

    ensure_dir(&g.out)?;
    let mut files = Vec::new();
    for (ledger, report) in &results {
        let stem = file_stem(&ledger.scenario.label);
        if g.format.csv() {
            write_file(
                &g.out,
                &format!("ledger-{stem}.csv"),
                &export::ledger_csv(ledger),
                &mut files,
            )?;
        }
        if g.format.json() {
            write_file(
                &g.out,
                &format!("ledger-{stem}.json"),
                &export::ledger_json(ledger),
                &mut files,
            )?;
        }
        write_file(
            &g.out,
            &format!("metrics-{stem}.json"),
            &export::metrics_json(report),
            &mut files,
        )?;
    }
    let reports: Vec<MetricsReport> = results.into_iter().map(|(_, r)| r).collect();
    write_file(
        &g.out,
        "ranking.csv",
        &export::ranking_csv(&reports),
        &mut files,
    )?;

    for r in &reports {
        writeln!(stdout, "{}", export::summary_line(r)).map_err(io_err)?;
    }
    writeln!(stdout).map_err(io_err)?;
    write!(stdout, "{}", export::ranking_table(&reports)).map_err(io_err)?;
    Ok(RunOutcome { reports, files })
}

/// Same result as [`biochar_core::sweep_1d`], with points evaluated in
/// parallel and reassembled in grid order.
pub fn parallel_sweep(
    p: &ParameterSet,
    scenarios: &[ScenarioSpec],
    parameter: &str,
    grid: &[f64],
) -> Result<SweepResult, biochar_core::Error> {
    let sets = grid_parameter_sets(p, parameter, grid)?;
    let rows = scenarios
        .par_iter()
        .map(|s| {
            sets.par_iter()
                .map(|q| scenario_npv(q, s))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult::from_rows(
        parameter,
        grid.to_vec(),
        scenarios,
        rows,
    ))
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

/// Writes `sweep-<param>.{csv,json}` plus one `sweep-<param>-<label>.csv`
/// `(value, npv)` series per scenario, and prints the thresholds.
pub fn sweep(
    g: &Global,
    selectors: &[String],
    spec: &SweepSpec,
    stdout: &mut dyn Write,
) -> Result<(SweepResult, Vec<PathBuf>), CliError> {
    let points = grid(spec.from, spec.to, spec.step)?;
    let setup = setup(g)?;
    let scenarios = select(&setup.scenarios, selectors)?;
    let result = parallel_sweep(&setup.params, &scenarios, &spec.parameter, &points)?;

    ensure_dir(&g.out)?;
    let mut files = Vec::new();
    let stem = file_stem(&spec.parameter);
    if g.format.csv() {
        write_file(
            &g.out,
            &format!("sweep-{stem}.csv"),
            &export::sweep_csv(&result),
            &mut files,
        )?;
        for (i, label) in result.scenarios.iter().enumerate() {
            let name = format!("sweep-{stem}-{}.csv", file_stem(label));
            write_file(
                &g.out,
                &name,
                &export::sweep_series_csv(&result, i),
                &mut files,
            )?;
        }
    }
    if g.format.json() {
        write_file(
            &g.out,
            &format!("sweep-{stem}.json"),
            &export::sweep_json(&result),
            &mut files,
        )?;
    }

    writeln!(
        stdout,
        "{}: {} points x {} scenarios",
        result.parameter,
        result.grid.len(),
        result.scenarios.len()
    )
    .map_err(io_err)?;
    for (label, t) in result.scenarios.iter().zip(&result.thresholds) {
        let text = match t {
            biochar_core::Threshold::Found {
                value,
                crossing: Some(c),
            } => {
                format!("NPV >= 0 from {value} (crosses zero near {c:.4})")
            }
            biochar_core::Threshold::Found {
                value,
                crossing: None,
            } => {
                format!("NPV >= 0 across the grid (from {value})")
            }
            biochar_core::Threshold::None => "NPV < 0 across the grid".to_string(),
        };
        writeln!(stdout, "  {label}: {text}").map_err(io_err)?;
    }
    Ok((result, files))
}

/// Solves the three calibration ratios and writes `calibrated.toml` and
/// `calibration-residuals.json`.
pub fn calibrate_cmd(
    g: &Global,
    anchors: &Anchors,
    stdout: &mut dyn Write,
) -> Result<(ParameterSet, CalibrationResiduals, Vec<PathBuf>), CliError> {
    for (name, v) in [
        ("equipment", anchors.small_equipment),
        ("labor", anchors.small_labor_total),
        ("ratio", anchors.small_rev_cost_ratio),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(CliError::Usage(format!(
                "anchor {name} must be >= 0 (got {v})"
            )));
        }
    }
    let setup = setup(g)?;
    let p = calibrate(&setup.params, anchors).map_err(CliError::Calibration)?;
    let res = residuals(&p, anchors)?;

    ensure_dir(&g.out)?;
    let mut files = Vec::new();
    write_file(&g.out, "calibrated.toml", &config::to_toml(&p), &mut files)?;
    let json = serde_json::to_string_pretty(&res).expect("residuals serialize");
    write_file(&g.out, "calibration-residuals.json", &json, &mut files)?;

    writeln!(stdout, "location_cost_ratio = {}", p.location_cost_ratio).map_err(io_err)?;
    writeln!(stdout, "wage_ratio          = {}", p.wage_ratio).map_err(io_err)?;
    writeln!(stdout, "credit_factor       = {}", p.credit_factor).map_err(io_err)?;
    for (name, r) in [
        ("equipment", res.equipment),
        ("labor total", res.labor),
        ("revenue/cost", res.rev_cost_ratio),
    ] {
        writeln!(
            stdout,
            "  {name:<13} anchor {:>14.4} model {:>14.4} rel.err {:+.2e}",
            r.anchor, r.model, r.rel_error
        )
        .map_err(io_err)?;
    }
    Ok((p, res, files))
}

/// Reads every `metrics-*.json` in `from` (file-name order), prints the
/// ranking table and writes `ranking.csv` to the output directory.
pub fn report(
    g: &Global,
    from: &Path,
    stdout: &mut dyn Write,
) -> Result<Vec<MetricsReport>, CliError> {
    let read_err = |source| CliError::Io {
        path: from.to_path_buf(),
        source,
    };
    let mut paths: Vec<PathBuf> = fs::read_dir(from)
        .map_err(read_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.starts_with("metrics-") && n.ends_with(".json"))
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Usage(format!(
            "no metrics-*.json files in {}",
            from.display()
        )));
    }
    let mut reports = Vec::with_capacity(paths.len());
    for path in &paths {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        let r = export::read_metrics_json(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        reports.push(r);
    }
    ensure_dir(&g.out)?;
    let mut files = Vec::new();
    write_file(
        &g.out,
        "ranking.csv",
        &export::ranking_csv(&reports),
        &mut files,
    )?;
    write!(stdout, "{}", export::ranking_table(&reports)).map_err(io_err)?;
    Ok(reports)
}
