//! Life-cycle cash-flow ledger: the year-0 capital stack and one line per
//! operating year.
//!
//! Every yearly line item is its year-1 amount times
//! `(1 + inflation)^(year - 1)`. Revenues and savings escalate the same way
//! unless [`ParameterSet::escalate_benefits`] is off. Sums run left to right
//! over years, and within a year over components in field order.

use alloc::vec::Vec;

use crate::error::Error;
use crate::params::{adjusted_reference_costs, ParameterSet, ReferenceCosts, ScenarioSpec};
use crate::production::{mass_balance, MassBalance};
use crate::Result;

/// Year-0 initial investment.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CapitalStack {
    /// Equipment and setup.
    pub c_es: f64,
    /// Indirect and working capital.
    pub c_iw: f64,
    /// Planning and design.
    pub c_pd: f64,
    /// Permits and carbon-credit project validation.
    pub c_pv: f64,
    /// Total initial investment.
    pub c_i: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct YearCosts {
    pub maintenance: f64,
    pub operation: f64,
    pub labor: f64,
    pub credit_cert: f64,
    pub land_app: f64,
}

impl YearCosts {
    pub fn total(&self) -> f64 {
        self.maintenance + self.operation + self.labor + self.credit_cert + self.land_app
    }

    fn scaled(&self, k: f64) -> Self {
        Self {
            maintenance: self.maintenance * k,
            operation: self.operation * k,
            labor: self.labor * k,
            credit_cert: self.credit_cert * k,
            land_app: self.land_app * k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct YearRevenues {
    pub biochar_sale: f64,
    pub credits: f64,
    pub sugarcane_uplift: f64,
}

impl YearRevenues {
    pub fn total(&self) -> f64 {
        self.biochar_sale + self.credits + self.sugarcane_uplift
    }

    fn scaled(&self, k: f64) -> Self {
        Self {
            biochar_sale: self.biochar_sale * k,
            credits: self.credits * k,
            sugarcane_uplift: self.sugarcane_uplift * k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct YearSavings {
    pub fertilizer: f64,
    pub operational: f64,
}

impl YearSavings {
    pub fn total(&self) -> f64 {
        self.fertilizer + self.operational
    }

    fn scaled(&self, k: f64) -> Self {
        Self {
            fertilizer: self.fertilizer * k,
            operational: self.operational * k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct YearLine {
    /// 1-based operating year.
    pub year: u32,
    pub costs: YearCosts,
    pub revenues: YearRevenues,
    pub savings: YearSavings,
    /// Revenues plus savings minus costs.
    pub net: f64,
    /// `-c_i` plus the nets of years `1..=year`.
    pub cumulative_net: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Totals {
    /// Initial investment plus all yearly costs.
    pub c_total: f64,
    pub r_total: f64,
    pub s_total: f64,
    /// Revenues plus savings.
    pub b_total: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ledger {
    pub scenario: ScenarioSpec,
    pub mass_balance: MassBalance,
    pub capital: CapitalStack,
    pub years: Vec<YearLine>,
    pub totals: Totals,
}

impl Ledger {
    /// Year-indexed cash flows: `[-c_i, net_1, ..., net_n]`.
    pub fn cash_flows(&self) -> Vec<f64> {
        core::iter::once(-self.capital.c_i)
            .chain(self.years.iter().map(|y| y.net))
            .collect()
    }

    pub fn horizon(&self) -> usize {
        self.years.len()
    }

    /// `r_total / c_total`.
    pub fn revenue_cost_ratio(&self) -> f64 {
        self.totals.r_total / self.totals.c_total
    }
}

fn plant_costs(p: &ParameterSet, mb: &MassBalance) -> Result<ReferenceCosts> {
    adjusted_reference_costs(p, mb.bagasse_available_t)
}

/// Builds the capital stack. The planning and permit percentages apply to the
/// equipment plus indirect base; the credit review fee is charged once more
/// here for project validation.
pub fn capital_stack(p: &ParameterSet, s: &ScenarioSpec) -> Result<CapitalStack> {
    let mb = mass_balance(p, s)?;
    stack_from(p, &mb)
}

fn stack_from(p: &ParameterSet, mb: &MassBalance) -> Result<CapitalStack> {
    let costs = plant_costs(p, mb)?;
    let c_es = costs.installed;
    let c_iw = costs.indirect;
    let base = c_es + c_iw;
    let c_pd = p.planning_pct * base;
    let c_pv = p.permit_pct * base + p.credit_review_fee;
    Ok(CapitalStack {
        c_es,
        c_iw,
        c_pd,
        c_pv,
        c_i: c_es + c_iw + c_pd + c_pv,
    })
}

/// Year-1 (unescalated) amounts.
struct BaseYear {
    costs: YearCosts,
    revenues: YearRevenues,
    savings: YearSavings,
}

fn base_year(p: &ParameterSet, s: &ScenarioSpec, mb: &MassBalance) -> Result<BaseYear> {
    let plant = plant_costs(p, mb)?;
    let land = s.is_land_application();
    let treated = if land { mb.treated_ha } else { 0.0 };

    let costs = YearCosts {
        maintenance: p.maintenance_pct * plant.installed,
        operation: plant.operation_per_y,
        labor: plant.labor_per_y,
        credit_cert: mb.credits_tco2e * p.credit_issuance_fee + p.credit_review_fee,
        land_app: treated * p.land_app_cost,
    };
    let revenues = YearRevenues {
        biochar_sale: mb.surplus_t * p.biochar_price,
        credits: mb.credits_tco2e * p.credit_price,
        sugarcane_uplift: treated * p.sugarcane_yield * p.yield_uplift * p.sugarcane_price,
    };
    let savings = YearSavings {
        fertilizer: treated * p.fertilizer_cost * p.fertilizer_savings_fraction,
        operational: treated * p.crop_mgmt_cost * p.crop_mgmt_savings_fraction,
    };
    Ok(BaseYear {
        costs,
        revenues,
        savings,
    })
}

fn escalate(
    p: &ParameterSet,
    base: &BaseYear,
    year: u32,
) -> (YearCosts, YearRevenues, YearSavings, f64) {
    let k = p.escalation(year);
    let kb = if p.escalate_benefits { k } else { 1.0 };
    let costs = base.costs.scaled(k);
    let revenues = base.revenues.scaled(kb);
    let savings = base.savings.scaled(kb);
    let net = revenues.total() + savings.total() - costs.total();
    (costs, revenues, savings, net)
}

fn lines(
    p: &ParameterSet,
    s: &ScenarioSpec,
    mb: &MassBalance,
    capital: &CapitalStack,
    through: u32,
) -> Result<Vec<YearLine>> {
    let base = base_year(p, s, mb)?;
    let mut out = Vec::with_capacity(through as usize);
    let mut cumulative = -capital.c_i;
    for year in 1..=through {
        let (costs, revenues, savings, net) = escalate(p, &base, year);
        cumulative += net;
        out.push(YearLine {
            year,
            costs,
            revenues,
            savings,
            net,
            cumulative_net: cumulative,
        });
    }
    Ok(out)
}

/// The ledger line for one operating year (1-based).
pub fn year_line(
    p: &ParameterSet,
    s: &ScenarioSpec,
    mb: &MassBalance,
    year: u32,
) -> Result<YearLine> {
    p.validate()?;
    if year < 1 || year > p.horizon_years {
        return Err(Error::YearOutOfRange {
            year,
            horizon: p.horizon_years,
        });
    }
    let capital = stack_from(p, mb)?;
    let mut ls = lines(p, s, mb, &capital, year)?;
    Ok(ls.pop().expect("year >= 1"))
}

pub fn build_ledger(p: &ParameterSet, s: &ScenarioSpec) -> Result<Ledger> {
    let mb = mass_balance(p, s)?;
    let capital = stack_from(p, &mb)?;
    let years = lines(p, s, &mb, &capital, p.horizon_years)?;

    let mut yearly_costs = 0.0;
    let mut r_total = 0.0;
    let mut s_total = 0.0;
    for y in &years {
        yearly_costs += y.costs.total();
        r_total += y.revenues.total();
        s_total += y.savings.total();
    }
    let totals = Totals {
        c_total: capital.c_i + yearly_costs,
        r_total,
        s_total,
        b_total: r_total + s_total,
    };
    Ok(Ledger {
        scenario: s.clone(),
        mass_balance: mb,
        capital,
        years,
        totals,
    })
}
