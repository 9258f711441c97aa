//! One-at-a-time sensitivity sweeps of scenario NPV over a parameter grid.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Error;
use crate::ledger::build_ledger;
use crate::metrics::ledger_npv;
use crate::params::{ParameterSet, ScenarioSpec};
use crate::Result;

/// Default credit-price grid, $/tCO2e.
pub const CREDIT_PRICE_GRID: (f64, f64, f64) = (50.0, 200.0, 10.0);
/// Default bagasse-availability grid.
pub const AVAILABILITY_GRID: (f64, f64, f64) = (0.50, 0.90, 0.05);

/// `from, from + step, ...` up to and including `to` (with a 1e-9 step
/// allowance for rounding). Values are rounded to 12 decimals so that
/// `0.5 + 8 * 0.05` lands on `0.9`.
pub fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::NonPositiveStep(step));
    }
    if !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::EmptyGrid);
    }
    let count = libm::floor((to - from) / step + 1e-9) as usize + 1;
    Ok((0..count)
        .map(|i| libm::round((from + i as f64 * step) * 1e12) / 1e12)
        .collect())
}

/// Lowest grid value with non-negative NPV, and where the NPV line crosses
/// zero between that point and its predecessor.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "status", rename_all = "kebab-case")
)]
pub enum Threshold {
    Found {
        value: f64,
        /// Linear interpolation between the last negative and first
        /// non-negative grid points; absent when the first grid point is
        /// already non-negative.
        #[cfg_attr(
            feature = "serde",
            serde(skip_serializing_if = "Option::is_none", default)
        )]
        crossing: Option<f64>,
    },
    None,
}

impl Threshold {
    pub fn value(&self) -> Option<f64> {
        match self {
            Threshold::Found { value, .. } => Some(*value),
            Threshold::None => None,
        }
    }

    fn from_row(grid: &[f64], row: &[f64]) -> Self {
        let Some(i) = row.iter().position(|v| *v >= 0.0) else {
            return Threshold::None;
        };
        let crossing = (i > 0).then(|| {
            let (x0, x1) = (grid[i - 1], grid[i]);
            let (y0, y1) = (row[i - 1], row[i]);
            x0 + (x1 - x0) * (-y0) / (y1 - y0)
        });
        Threshold::Found {
            value: grid[i],
            crossing,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepResult {
    pub parameter: String,
    pub grid: Vec<f64>,
    /// Scenario labels, in input order.
    pub scenarios: Vec<String>,
    /// `npv_by_scenario[s][g]` is the NPV of scenario `s` at `grid[g]`.
    pub npv_by_scenario: Vec<Vec<f64>>,
    pub thresholds: Vec<Threshold>,
}

impl SweepResult {
    /// Assembles a result from per-scenario NPV rows (each in grid order).
    pub fn from_rows(
        parameter: &str,
        grid: Vec<f64>,
        scenarios: &[ScenarioSpec],
        npv_by_scenario: Vec<Vec<f64>>,
    ) -> Self {
        let thresholds = npv_by_scenario
            .iter()
            .map(|row| Threshold::from_row(&grid, row))
            .collect();
        Self {
            parameter: parameter.to_string(),
            grid,
            scenarios: scenarios.iter().map(|s| s.label.clone()).collect(),
            npv_by_scenario,
            thresholds,
        }
    }
}

/// Validates the grid against `p` and returns one parameter set per point.
pub fn grid_parameter_sets(
    p: &ParameterSet,
    parameter: &str,
    grid: &[f64],
) -> Result<Vec<ParameterSet>> {
    p.get(parameter)?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if let Some(i) = grid
        .windows(2)
        .position(|w| w[0].is_nan() || w[1].is_nan() || w[1] <= w[0])
    {
        return Err(Error::GridNotIncreasing { index: i + 1 });
    }
    grid.iter()
        .enumerate()
        .map(|(index, &value)| {
            p.with(parameter, value).map_err(|e| Error::GridPoint {
                index,
                value,
                source: alloc::boxed::Box::new(e),
            })
        })
        .collect()
}

/// NPV of one scenario under one already-overridden parameter set.
pub fn scenario_npv(p: &ParameterSet, s: &ScenarioSpec) -> Result<f64> {
    ledger_npv(&build_ledger(p, s)?, p)
}

/// Evaluates every (scenario, grid value) pair serially.
pub fn sweep_1d(
    p: &ParameterSet,
    scenarios: &[ScenarioSpec],
    parameter: &str,
    grid: &[f64],
) -> Result<SweepResult> {
    let sets = grid_parameter_sets(p, parameter, grid)?;
    let rows = scenarios
        .iter()
        .map(|s| {
            sets.iter()
                .map(|q| scenario_npv(q, s))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_rows(
        parameter,
        grid.to_vec(),
        scenarios,
        rows,
    ))
}

pub fn find_threshold(result: &SweepResult, scenario: usize) -> Result<Threshold> {
    result
        .thresholds
        .get(scenario)
        .copied()
        .ok_or(Error::ScenarioIndex {
            index: scenario,
            len: result.thresholds.len(),
        })
}
