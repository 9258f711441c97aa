//! Model inputs: the parameter set, farm scenarios, and the location/scale
//! adjustment of the reference plant costs.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Bound, Error};
use crate::Result;

/// Every model input. Monetary values are USD, tonnages are metric tonnes.
///
/// `location_cost_ratio`, `wage_ratio` and `credit_factor` have no published
/// value and default to 1; use [`calibrate`](crate::calibrate()) to recover them
/// from reported totals.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(default, deny_unknown_fields)
)]
pub struct ParameterSet {
    /// t cane per ha per year.
    pub sugarcane_yield: f64,
    /// Wet bagasse per tonne of cane.
    pub bagasse_fraction: f64,
    /// Biochar per tonne of dry bagasse.
    pub biochar_fraction: f64,
    /// Dry-basis bagasse per tonne of wet bagasse.
    pub dry_fraction: f64,
    /// Share of bagasse not already burnt for bioelectricity.
    pub bagasse_availability: f64,
    /// t biochar per treated ha.
    pub land_app_rate: f64,
    /// Relative sugarcane yield increase on treated land.
    pub yield_uplift: f64,
    /// Nominal interest rate, also the default discount rate.
    pub interest_rate: f64,
    pub inflation_rate: f64,
    /// $ per t cane.
    pub sugarcane_price: f64,
    /// $ per tCO2e.
    pub credit_price: f64,
    /// $ per credit issued.
    pub credit_issuance_fee: f64,
    /// $ per review event.
    pub credit_review_fee: f64,
    /// $ per ha per year.
    pub fertilizer_cost: f64,
    /// $ per ha per year.
    pub crop_mgmt_cost: f64,
    /// $ per treated ha.
    pub land_app_cost: f64,
    pub horizon_years: u32,
    pub planning_pct: f64,
    pub permit_pct: f64,
    /// Yearly maintenance as a share of installed equipment cost.
    pub maintenance_pct: f64,
    pub scale_exponent: f64,
    /// Reference plant throughput, t bagasse per year.
    pub ref_capacity: f64,
    pub ref_installed_cost: f64,
    pub ref_indirect_cost: f64,
    pub ref_labor_cost: f64,
    pub ref_operation_cost: f64,
    /// Price-level ratio applied to equipment, setup and operation costs.
    pub location_cost_ratio: f64,
    /// Minimum-wage ratio applied to labor costs.
    pub wage_ratio: f64,
    /// tCO2e credited per t biochar.
    pub credit_factor: f64,
    /// $ per t biochar sold; zero means biochar is monetised only via credits.
    pub biochar_price: f64,
    pub fertilizer_savings_fraction: f64,
    pub crop_mgmt_savings_fraction: f64,
    /// Exchange rate the USD inputs were converted with. Not used by any
    /// computation.
    pub brl_to_usd: f64,
    /// Optional per-year discount rates for years 1..=n. Empty means a constant
    /// `interest_rate`.
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Vec::is_empty"))]
    pub discount_schedule: Vec<f64>,
    /// Escalate revenues and savings with inflation like costs. When false
    /// they stay at their year-1 nominal value.
    pub escalate_benefits: bool,
    /// Count land-application savings in the ROI numerator.
    pub roi_includes_savings: bool,
}

impl Default for ParameterSet {
    fn default() -> Self {
        Self {
            sugarcane_yield: 73.7,
            bagasse_fraction: 0.28,
            biochar_fraction: 0.503,
            dry_fraction: 0.60,
            bagasse_availability: 0.70,
            land_app_rate: 4.2,
            yield_uplift: 0.15,
            interest_rate: 0.09,
            inflation_rate: 0.03,
            sugarcane_price: 30.6,
            credit_price: 179.0,
            credit_issuance_fee: 0.30,
            credit_review_fee: 1900.0,
            fertilizer_cost: 34.0,
            crop_mgmt_cost: 437.0,
            land_app_cost: 320.0,
            horizon_years: 20,
            planning_pct: 0.05,
            permit_pct: 0.02,
            maintenance_pct: 0.02,
            scale_exponent: 0.7,
            ref_capacity: 84_000.0,
            ref_installed_cost: 38.42e6,
            ref_indirect_cost: 13.63e6,
            ref_labor_cost: 1.17e6,
            ref_operation_cost: 2.08e6,
            location_cost_ratio: 1.0,
            wage_ratio: 1.0,
            credit_factor: 1.0,
            biochar_price: 0.0,
            fertilizer_savings_fraction: 1.0,
            crop_mgmt_savings_fraction: 1.0,
            brl_to_usd: 0.18,
            discount_schedule: Vec::new(),
            escalate_benefits: true,
            roi_includes_savings: true,
        }
    }
}

fn check(key: &'static str, value: f64, bound: Bound) -> Result<()> {
    let ok = value.is_finite()
        && match bound {
            Bound::Fraction => (0.0..=1.0).contains(&value),
            Bound::NonNegative => value >= 0.0,
            Bound::Positive => value > 0.0,
            Bound::AboveMinusOne => value > -1.0,
            Bound::Finite => true,
            Bound::AtLeastOneYear | Bound::MassRatioProduct => unreachable!(),
        };
    if ok {
        Ok(())
    } else {
        let bound = if value.is_finite() {
            bound
        } else {
            Bound::Finite
        };
        Err(Error::InvalidParameter { key, bound, value })
    }
}

macro_rules! numeric_fields {
    ($($name:ident: $bound:ident),* $(,)?) => {
        /// Names of every `f64` field, in declaration order. Together with
        /// `horizon_years` these are the sweepable parameters.
        pub const NUMERIC_FIELDS: &[&str] = &[$(stringify!($name)),*];

        impl ParameterSet {
            /// Reads a numeric field by name.
            pub fn get(&self, name: &str) -> Result<f64> {
                match name {
                    $(stringify!($name) => Ok(self.$name),)*
                    "horizon_years" => Ok(f64::from(self.horizon_years)),
                    _ => Err(Error::UnknownField(name.to_string())),
                }
            }

            /// Returns a copy with one numeric field replaced, validated.
            pub fn with(&self, name: &str, value: f64) -> Result<Self> {
                let mut p = self.clone();
                match name {
                    $(stringify!($name) => p.$name = value,)*
                    "horizon_years" => {
                        if !(value >= 1.0 && libm::trunc(value) == value && value <= f64::from(u32::MAX)) {
                            return Err(Error::InvalidParameter {
                                key: "horizon_years",
                                bound: Bound::AtLeastOneYear,
                                value,
                            });
                        }
                        p.horizon_years = value as u32;
                    }
                    _ => return Err(Error::UnknownField(name.to_string())),
                }
                p.validate()?;
                Ok(p)
            }

            fn check_numeric(&self) -> Result<()> {
                $(check(stringify!($name), self.$name, Bound::$bound)?;)*
                Ok(())
            }
        }
    };
}

numeric_fields! {
    sugarcane_yield: NonNegative,
    bagasse_fraction: Fraction,
    biochar_fraction: Fraction,
    dry_fraction: Fraction,
    bagasse_availability: Fraction,
    land_app_rate: Positive,
    yield_uplift: Fraction,
    interest_rate: NonNegative,
    inflation_rate: NonNegative,
    sugarcane_price: NonNegative,
    credit_price: NonNegative,
    credit_issuance_fee: NonNegative,
    credit_review_fee: NonNegative,
    fertilizer_cost: NonNegative,
    crop_mgmt_cost: NonNegative,
    land_app_cost: NonNegative,
    planning_pct: Fraction,
    permit_pct: Fraction,
    maintenance_pct: Fraction,
    scale_exponent: NonNegative,
    ref_capacity: Positive,
    ref_installed_cost: NonNegative,
    ref_indirect_cost: NonNegative,
    ref_labor_cost: NonNegative,
    ref_operation_cost: NonNegative,
    location_cost_ratio: NonNegative,
    wage_ratio: NonNegative,
    credit_factor: NonNegative,
    biochar_price: NonNegative,
    fertilizer_savings_fraction: Fraction,
    crop_mgmt_savings_fraction: Fraction,
    brl_to_usd: NonNegative,
}

impl ParameterSet {
    /// Checks every field bound. The first violation found is returned.
    pub fn validate(&self) -> Result<()> {
        self.check_numeric()?;
        if self.horizon_years < 1 {
            return Err(Error::InvalidParameter {
                key: "horizon_years",
                bound: Bound::AtLeastOneYear,
                value: f64::from(self.horizon_years),
            });
        }
        if self.dry_fraction * self.biochar_fraction >= 1.0 {
            return Err(Error::InvalidParameter {
                key: "dry_fraction",
                bound: Bound::MassRatioProduct,
                value: self.dry_fraction * self.biochar_fraction,
            });
        }
        for &r in &self.discount_schedule {
            check("discount_schedule", r, Bound::AboveMinusOne)?;
        }
        Ok(())
    }

    /// Sum of the inflation escalation factors over the horizon,
    /// `sum_{t=0}^{n-1} (1 + inflation)^t`.
    pub fn escalation_sum(&self) -> f64 {
        (1..=self.horizon_years).map(|y| self.escalation(y)).sum()
    }

    /// Escalation factor for `year` (1-based): `(1 + inflation)^(year - 1)`.
    pub fn escalation(&self, year: u32) -> f64 {
        libm::pow(1.0 + self.inflation_rate, f64::from(year) - 1.0)
    }

    /// Discount rate applied in year `year` (1-based).
    pub fn discount_rate(&self, year: u32) -> f64 {
        self.discount_schedule
            .get(year as usize - 1)
            .copied()
            .unwrap_or(self.interest_rate)
    }
}

/// Tonnes of CO2e per tonne of biochar from its carbon content:
/// `carbon_fraction * 44/12 * permanence_factor`.
pub fn credit_factor_from_carbon(carbon_fraction: f64, permanence_factor: f64) -> f64 {
    carbon_fraction * 44.0 / 12.0 * permanence_factor
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "kebab-case")
)]
pub enum ScenarioKind {
    /// Scenario A: all biochar is sold as carbon credits.
    #[cfg_attr(feature = "serde", serde(alias = "A"))]
    DirectSale,
    /// Scenario B: biochar is spread on the farm, surplus is sold.
    #[cfg_attr(feature = "serde", serde(alias = "B"))]
    LandApplication,
}

impl ScenarioKind {
    pub fn letter(self) -> char {
        match self {
            ScenarioKind::DirectSale => 'A',
            ScenarioKind::LandApplication => 'B',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(deny_unknown_fields)
)]
pub struct ScenarioSpec {
    pub farm_size_ha: f64,
    pub kind: ScenarioKind,
    pub label: String,
}

impl ScenarioSpec {
    pub fn new(farm_size_ha: f64, kind: ScenarioKind, label: impl Into<String>) -> Result<Self> {
        let s = Self {
            farm_size_ha,
            kind,
            label: label.into(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.farm_size_ha > 0.0 && self.farm_size_ha.is_finite() {
            Ok(())
        } else {
            Err(Error::NonPositiveFarmSize(self.farm_size_ha))
        }
    }

    pub fn is_land_application(&self) -> bool {
        self.kind == ScenarioKind::LandApplication
    }
}

/// The six farm scenarios: 10 000, 20 000 and 50 000 ha, each as direct sale
/// (A) and land application (B), ordered by size then kind.
pub fn paper_brazil_scenarios() -> Vec<ScenarioSpec> {
    let sizes = [
        ("small", 10_000.0),
        ("medium", 20_000.0),
        ("large", 50_000.0),
    ];
    let kinds = [ScenarioKind::DirectSale, ScenarioKind::LandApplication];
    let mut out = vec![];
    for (name, ha) in sizes {
        for kind in kinds {
            let label = alloc::format!("{name}-{}", kind.letter());
            out.push(ScenarioSpec {
                farm_size_ha: ha,
                kind,
                label,
            });
        }
    }
    out
}

/// Reference plant costs after location and scale adjustment.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReferenceCosts {
    pub installed: f64,
    pub indirect: f64,
    pub labor_per_y: f64,
    pub operation_per_y: f64,
}

/// `(capacity / ref_capacity)^scale_exponent`.
pub fn scale_factor(p: &ParameterSet, capacity: f64) -> Result<f64> {
    if !(capacity > 0.0 && capacity.is_finite()) {
        return Err(Error::NonPositiveCapacity(capacity));
    }
    Ok(libm::pow(capacity / p.ref_capacity, p.scale_exponent))
}

/// Scales the reference plant to `capacity` (t bagasse per year) and applies
/// the price-level ratio to equipment/indirect/operation and the wage ratio to
/// labor.
pub fn adjusted_reference_costs(p: &ParameterSet, capacity: f64) -> Result<ReferenceCosts> {
    let scale = scale_factor(p, capacity)?;
    let loc = p.location_cost_ratio * scale;
    Ok(ReferenceCosts {
        installed: p.ref_installed_cost * loc,
        indirect: p.ref_indirect_cost * loc,
        labor_per_y: p.ref_labor_cost * p.wage_ratio * scale,
        operation_per_y: p.ref_operation_cost * loc,
    })
}
