//! Techno-economic model of sugarcane-bagasse biochar production.
//!
//! The crate takes a farm scenario from planted hectares to a full life-cycle
//! cash-flow ledger and the financial indicators derived from it:
//!
//! * [`params`] holds every model input, the location/scale adjustment of the
//!   reference plant costs, and [`calibrate`](calibrate::calibrate) for the
//!   three ratios that have to be recovered from published totals.
//! * [`production`] is the annual mass balance (cane, bagasse, biochar,
//!   land-applied and surplus tonnage, carbon-credit volume).
//! * [`ledger`] assembles the year-0 capital stack and the inflation-escalated
//!   yearly cost, revenue and savings lines.
//! * [`metrics`] computes break-even, ROI, benefit-cost difference, NPV and IRR.
//! * [`sweep`] runs one-at-a-time sensitivity sweeps over any numeric parameter.
//!
//! Everything here is pure computation over immutable values. The crate is
//! `no_std` and only needs `alloc`; file formats and the command-line front end
//! live in the `biochar-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod calibrate;
mod error;
pub mod ledger;
pub mod metrics;
pub mod params;
pub mod production;
pub mod root;
pub mod sweep;

pub use calibrate::{calibrate, Anchors, CalibrationResiduals};
pub use error::{Bound, Error};
pub use ledger::{build_ledger, capital_stack, year_line, CapitalStack, Ledger, YearLine};
pub use metrics::{
    benefit_cost, break_even, evaluate, irr, npv, npv_schedule, roi_metrics, BreakEven, Irr,
    IrrUndefined, MetricsReport,
};
pub use params::{
    adjusted_reference_costs, paper_brazil_scenarios, ParameterSet, ReferenceCosts, ScenarioKind,
    ScenarioSpec,
};
pub use production::{credit_volume, mass_balance, MassBalance};
pub use sweep::{find_threshold, sweep_1d, SweepResult, Threshold};

pub type Result<T, E = Error> = core::result::Result<T, E>;
