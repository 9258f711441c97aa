//! Financial indicators over a [`Ledger`]: break-even, ROI, benefit-cost
//! difference, NPV and IRR.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::ledger::Ledger;
use crate::params::ParameterSet;
use crate::root::bisect;
use crate::Result;

/// `sum_t flows[t] / (1 + rate)^t`, summed in index order.
pub fn npv(flows: &[f64], rate: f64) -> Result<f64> {
    if flows.is_empty() {
        return Err(Error::EmptyCashFlows);
    }
    if rate.is_nan() || rate <= -1.0 {
        return Err(Error::DiscountRate(rate));
    }
    Ok(npv_unchecked(flows, rate))
}

fn npv_unchecked(flows: &[f64], rate: f64) -> f64 {
    let base = 1.0 + rate;
    flows
        .iter()
        .enumerate()
        .map(|(t, cf)| cf / libm::pow(base, t as f64))
        .sum()
}

/// NPV with a per-year rate schedule: `rates[k]` applies during year `k + 1`,
/// so the year-`t` discount factor is `prod_{k<t} (1 + rates[k])`.
pub fn npv_schedule(flows: &[f64], rates: &[f64]) -> Result<f64> {
    if flows.is_empty() {
        return Err(Error::EmptyCashFlows);
    }
    let needed = flows.len() - 1;
    if rates.len() < needed {
        return Err(Error::ScheduleTooShort {
            needed,
            got: rates.len(),
        });
    }
    if let Some(&r) = rates.iter().find(|r| r.is_nan() || **r <= -1.0) {
        return Err(Error::DiscountRate(r));
    }
    let mut factor = 1.0;
    let mut total = flows[0];
    for (cf, r) in flows[1..].iter().zip(rates) {
        factor *= 1.0 + r;
        total += cf / factor;
    }
    Ok(total)
}

/// NPV of a ledger at the parameter set's discount rate(s).
pub fn ledger_npv(ledger: &Ledger, p: &ParameterSet) -> Result<f64> {
    let flows = ledger.cash_flows();
    if p.discount_schedule.is_empty() {
        npv(&flows, p.interest_rate)
    } else {
        let rates: Vec<f64> = (1..flows.len() as u32)
            .map(|y| p.discount_rate(y))
            .collect();
        npv_schedule(&flows, &rates)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "kebab-case")
)]
pub enum IrrUndefined {
    AllZero,
    NoSignChange,
    MultipleSignChanges,
    /// Single sign change but the root could not be bracketed in floating
    /// point (extreme flows).
    NoBracket,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "status", rename_all = "kebab-case")
)]
pub enum Irr {
    Defined { rate: f64 },
    Undefined { reason: IrrUndefined },
}

impl Irr {
    pub fn rate(&self) -> Option<f64> {
        match self {
            Irr::Defined { rate } => Some(*rate),
            Irr::Undefined { .. } => None,
        }
    }
}

/// Internal rate of return by bracketing bisection.
///
/// Only flows with exactly one sign change (zeros ignored) have a unique root
/// in `(-1, inf)`; anything else is reported as undefined.
pub fn irr(flows: &[f64]) -> Result<Irr> {
    if flows.is_empty() {
        return Err(Error::EmptyCashFlows);
    }
    let undefined = |reason| Ok(Irr::Undefined { reason });
    let mut nonzero = flows.iter().copied().filter(|f| *f != 0.0);
    let Some(first) = nonzero.next() else {
        return undefined(IrrUndefined::AllZero);
    };
    let mut changes = 0;
    let mut last = first;
    for f in nonzero {
        if (f > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = f;
    }
    match changes {
        0 => return undefined(IrrUndefined::NoSignChange),
        1 => {}
        _ => return undefined(IrrUndefined::MultipleSignChanges),
    }

    // NPV takes the sign of the first non-zero flow as rate -> inf and the
    // sign of the last one as rate -> -1.
    let f = |r: f64| npv_unchecked(flows, r);
    let same = |v: f64, reference: f64| v != 0.0 && (v > 0.0) == (reference > 0.0);

    let mut hi = 1.0;
    while !same(f(hi), first) && f(hi) != 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return undefined(IrrUndefined::NoBracket);
        }
    }
    let mut lo = 0.0_f64;
    while !same(f(lo), last) && f(lo) != 0.0 {
        lo = -1.0 + (1.0 + lo) / 2.0;
        if lo <= -1.0 + 1e-12 {
            return undefined(IrrUndefined::NoBracket);
        }
    }
    if lo > hi {
        core::mem::swap(&mut lo, &mut hi);
    }
    match bisect(f, lo, hi, 0.0, 0.0) {
        Some(rate) => Ok(Irr::Defined { rate }),
        None => undefined(IrrUndefined::NoBracket),
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoiMetrics {
    /// Percent of initial investment, one entry per operating year.
    pub per_year: Vec<f64>,
    pub total: f64,
    pub average: f64,
}

/// Yearly ROI `(R_t + S_t - C_t) / c_i * 100`, where `C_t` never includes
/// the initial investment. Savings enter the numerator only when
/// `include_savings` is set.
pub fn roi_metrics(ledger: &Ledger, include_savings: bool) -> Result<RoiMetrics> {
    let c_i = ledger.capital.c_i;
    if c_i == 0.0 {
        return Err(Error::ZeroInvestment);
    }
    let per_year: Vec<f64> = ledger
        .years
        .iter()
        .map(|y| {
            let s = if include_savings {
                y.savings.total()
            } else {
                0.0
            };
            (y.revenues.total() + s - y.costs.total()) / c_i * 100.0
        })
        .collect();
    let total: f64 = per_year.iter().sum();
    let average = total / per_year.len() as f64;
    Ok(RoiMetrics {
        per_year,
        total,
        average,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "status", rename_all = "kebab-case")
)]
pub enum BreakEven {
    Reached { years: f64 },
    Never,
}

impl BreakEven {
    pub fn years(&self) -> Option<f64> {
        match self {
            BreakEven::Reached { years } => Some(*years),
            BreakEven::Never => None,
        }
    }
}

/// First crossing of two cumulative curves, linearly interpolated within the
/// crossing year. Index `i` of both curves is year `first_year + i`.
pub fn break_even_curves(cost_cum: &[f64], rev_cum: &[f64], first_year: u32) -> BreakEven {
    let mut prev: Option<f64> = None;
    for (i, (c, r)) in cost_cum.iter().zip(rev_cum).enumerate() {
        let deficit = c - r;
        let year = f64::from(first_year) + i as f64;
        if deficit <= 0.0 {
            return match prev {
                None => BreakEven::Reached { years: year },
                Some(d0) => BreakEven::Reached {
                    years: year - 1.0 + d0 / (d0 - deficit),
                },
            };
        }
        prev = Some(deficit);
    }
    BreakEven::Never
}

/// Cumulative cost (initial investment plus yearly costs) against cumulative
/// revenues plus savings, both undiscounted.
pub fn break_even(ledger: &Ledger) -> BreakEven {
    let (cost, rev) = cumulative_curves(ledger);
    break_even_curves(&cost, &rev, 0)
}

/// `(cost_cum, rev_cum)` indexed from year 0.
pub fn cumulative_curves(ledger: &Ledger) -> (Vec<f64>, Vec<f64>) {
    let n = ledger.years.len() + 1;
    let mut cost = Vec::with_capacity(n);
    let mut rev = Vec::with_capacity(n);
    let (mut c, mut r) = (ledger.capital.c_i, 0.0);
    cost.push(c);
    rev.push(r);
    for y in &ledger.years {
        c += y.costs.total();
        r += y.revenues.total() + y.savings.total();
        cost.push(c);
        rev.push(r);
    }
    (cost, rev)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BenefitCost {
    pub b_total: f64,
    pub c_total: f64,
    pub bcd: f64,
}

pub fn benefit_cost(ledger: &Ledger) -> BenefitCost {
    let b_total = ledger.totals.r_total + ledger.totals.s_total;
    let c_total = ledger.totals.c_total;
    BenefitCost {
        b_total,
        c_total,
        bcd: b_total - c_total,
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricsReport {
    pub label: String,
    pub break_even: BreakEven,
    /// Percent per year.
    pub roi_per_year: Vec<f64>,
    pub roi_total: f64,
    pub roi_average: f64,
    pub b_total: f64,
    pub c_total: f64,
    pub bcd: f64,
    pub npv: f64,
    pub irr: Irr,
    pub revenue_cost_ratio: f64,
}

/// Every indicator for one ledger built from `p`.
pub fn evaluate(ledger: &Ledger, p: &ParameterSet) -> Result<MetricsReport> {
    let roi = roi_metrics(ledger, p.roi_includes_savings)?;
    let bc = benefit_cost(ledger);
    Ok(MetricsReport {
        label: ledger.scenario.label.clone(),
        break_even: break_even(ledger),
        roi_per_year: roi.per_year,
        roi_total: roi.total,
        roi_average: roi.average,
        b_total: bc.b_total,
        c_total: bc.c_total,
        bcd: bc.bcd,
        npv: ledger_npv(ledger, p)?,
        irr: irr(&ledger.cash_flows())?,
        revenue_cost_ratio: ledger.revenue_cost_ratio(),
    })
}
