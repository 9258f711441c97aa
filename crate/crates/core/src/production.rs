//! Annual mass balance from planted hectares to biochar and credits.

use crate::params::{ParameterSet, ScenarioKind, ScenarioSpec};
use crate::Result;

/// Yearly tonnage chain for one scenario. All tonnages are t per year.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MassBalance {
    pub cane_t: f64,
    pub bagasse_wet_t: f64,
    pub bagasse_available_t: f64,
    pub bagasse_dry_t: f64,
    pub biochar_t: f64,
    /// Hectares receiving biochar each year.
    pub treated_ha: f64,
    pub applied_t: f64,
    pub surplus_t: f64,
    /// tCO2e per year.
    pub credits_tco2e: f64,
}

/// Area that can be treated at `land_app_rate`, capped at the farm size.
pub fn treated_area(p: &ParameterSet, s: &ScenarioSpec, biochar_t: f64) -> f64 {
    match s.kind {
        ScenarioKind::DirectSale => 0.0,
        ScenarioKind::LandApplication => s.farm_size_ha.min(biochar_t / p.land_app_rate),
    }
}

pub fn mass_balance(p: &ParameterSet, s: &ScenarioSpec) -> Result<MassBalance> {
    p.validate()?;
    s.validate()?;
    let cane_t = s.farm_size_ha * p.sugarcane_yield;
    let bagasse_wet_t = cane_t * p.bagasse_fraction;
    let bagasse_available_t = bagasse_wet_t * p.bagasse_availability;
    let bagasse_dry_t = bagasse_available_t * p.dry_fraction;
    let biochar_t = bagasse_dry_t * p.biochar_fraction;

    let treated_ha = treated_area(p, s, biochar_t);
    let applied_t = treated_ha * p.land_app_rate;
    // When the whole biochar output fits the cap exactly, rounding in
    // `biochar / rate * rate` can overshoot by an ulp.
    let (applied_t, surplus_t) = if applied_t >= biochar_t {
        (biochar_t, 0.0)
    } else {
        (applied_t, biochar_t - applied_t)
    };

    let mut mb = MassBalance {
        cane_t,
        bagasse_wet_t,
        bagasse_available_t,
        bagasse_dry_t,
        biochar_t,
        treated_ha,
        applied_t,
        surplus_t,
        credits_tco2e: 0.0,
    };
    mb.credits_tco2e = credit_volume(&mb, p, s);
    Ok(mb)
}

/// Credits generated per year. Both scenario kinds credit the full biochar
/// output: land-applied biochar is sequestered just like sold biochar.
pub fn credit_volume(mb: &MassBalance, p: &ParameterSet, _s: &ScenarioSpec) -> f64 {
    mb.biochar_t * p.credit_factor
}
