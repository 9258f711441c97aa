//! Recovers the location price ratio, the wage ratio and the credit factor
//! from three published small-farm totals.
//!
//! The solves run in dependency order. Installed cost is linear in the
//! location ratio. Escalated labor over the horizon is linear in the wage
//! ratio. The revenue/cost ratio of the small direct-sale farm is monotone
//! in the credit factor and is solved by bisection once the cost side is
//! fixed.

use crate::error::Error;
use crate::ledger::build_ledger;
use crate::params::{scale_factor, ParameterSet, ScenarioKind, ScenarioSpec};
use crate::production::mass_balance;
use crate::root::bisect;
use crate::Result;

/// Bracket searched for the credit factor, tCO2e per t biochar.
pub const CREDIT_FACTOR_BRACKET: (f64, f64) = (1e-6, 1e3);

/// Relative tolerance of the credit-factor bisection.
pub const CREDIT_FACTOR_TOL: f64 = 1e-9;

/// Farm size the anchors refer to.
pub const CALIBRATION_FARM_HA: f64 = 10_000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Anchors {
    /// Installed equipment and setup cost of the small farm, $.
    pub small_equipment: f64,
    /// Labor cost summed over the horizon with inflation, $.
    pub small_labor_total: f64,
    /// Life-cycle revenue / life-cycle cost of the small direct-sale farm.
    pub small_rev_cost_ratio: f64,
}

impl Anchors {
    /// $39.5M equipment, $7M labor over 20 years, revenue/cost 1.7.
    pub const PAPER: Anchors = Anchors {
        small_equipment: 39.5e6,
        small_labor_total: 7e6,
        small_rev_cost_ratio: 1.7,
    };
}

/// The small direct-sale farm the anchors describe.
pub fn calibration_scenario() -> ScenarioSpec {
    ScenarioSpec {
        farm_size_ha: CALIBRATION_FARM_HA,
        kind: ScenarioKind::DirectSale,
        label: "small-A".into(),
    }
}

/// Model value next to its anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Residual {
    pub anchor: f64,
    pub model: f64,
    pub rel_error: f64,
}

impl Residual {
    fn new(anchor: f64, model: f64) -> Self {
        Self {
            anchor,
            model,
            rel_error: (model - anchor) / anchor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CalibrationResiduals {
    pub equipment: Residual,
    pub labor: Residual,
    pub rev_cost_ratio: Residual,
}

impl CalibrationResiduals {
    pub fn max_rel_error(&self) -> f64 {
        self.equipment
            .rel_error
            .abs()
            .max(self.labor.rel_error.abs())
            .max(self.rev_cost_ratio.rel_error.abs())
    }
}

/// The three anchor quantities as the model currently computes them.
pub fn anchor_outputs(p: &ParameterSet) -> Result<Anchors> {
    let ledger = build_ledger(p, &calibration_scenario())?;
    Ok(Anchors {
        small_equipment: ledger.capital.c_es,
        small_labor_total: ledger.years.iter().map(|y| y.costs.labor).sum(),
        small_rev_cost_ratio: ledger.revenue_cost_ratio(),
    })
}

/// Re-simulates `p` and compares against `anchors`.
pub fn residuals(p: &ParameterSet, anchors: &Anchors) -> Result<CalibrationResiduals> {
    let out = anchor_outputs(p)?;
    Ok(CalibrationResiduals {
        equipment: Residual::new(anchors.small_equipment, out.small_equipment),
        labor: Residual::new(anchors.small_labor_total, out.small_labor_total),
        rev_cost_ratio: Residual::new(anchors.small_rev_cost_ratio, out.small_rev_cost_ratio),
    })
}

fn check_anchor(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidAnchor { name, value })
    }
}

/// Returns `p` with `location_cost_ratio`, `wage_ratio` and `credit_factor`
/// solved so the small direct-sale farm reproduces `anchors`.
pub fn calibrate(p: &ParameterSet, anchors: &Anchors) -> Result<ParameterSet> {
    p.validate()?;
    check_anchor("small_equipment", anchors.small_equipment)?;
    check_anchor("small_labor_total", anchors.small_labor_total)?;
    check_anchor("small_rev_cost_ratio", anchors.small_rev_cost_ratio)?;

    let scenario = calibration_scenario();
    let mb = mass_balance(p, &scenario)?;
    let scale = scale_factor(p, mb.bagasse_available_t)?;
    let mut out = p.clone();

    let unit_installed = p.ref_installed_cost * scale;
    if unit_installed <= 0.0 {
        return Err(Error::NoRoot {
            what: "location_cost_ratio",
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    out.location_cost_ratio = anchors.small_equipment / unit_installed;

    let unit_labor = p.ref_labor_cost * scale * p.escalation_sum();
    if unit_labor <= 0.0 {
        return Err(Error::NoRoot {
            what: "wage_ratio",
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    out.wage_ratio = anchors.small_labor_total / unit_labor;

    let (lo, hi) = CREDIT_FACTOR_BRACKET;
    let target = anchors.small_rev_cost_ratio;
    let ratio_gap = |k: f64| {
        let mut q = out.clone();
        q.credit_factor = k;
        match build_ledger(&q, &scenario) {
            Ok(l) => l.revenue_cost_ratio() - target,
            Err(_) => f64::NAN,
        }
    };
    let k = bisect(ratio_gap, lo, hi, 0.0, CREDIT_FACTOR_TOL).ok_or(Error::NoRoot {
        what: "credit_factor",
        lo,
        hi,
    })?;
    out.credit_factor = k;
    out.validate()?;
    Ok(out)
}
