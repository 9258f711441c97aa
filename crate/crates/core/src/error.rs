use alloc::string::String;
use core::fmt;

/// The bound a parameter value violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Must lie in `[0, 1]`.
    Fraction,
    /// Must be `>= 0`.
    NonNegative,
    /// Must be `> 0`.
    Positive,
    /// Must be a finite number.
    Finite,
    /// Must be an integer `>= 1`.
    AtLeastOneYear,
    /// `dry_fraction * biochar_fraction` must stay below 1.
    MassRatioProduct,
    /// Discount rates must be `> -1`.
    AboveMinusOne,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::Fraction => "fraction out of [0,1]",
            Bound::NonNegative => "must be >= 0",
            Bound::Positive => "must be > 0",
            Bound::Finite => "must be finite",
            Bound::AtLeastOneYear => "must be an integer >= 1",
            Bound::MassRatioProduct => "dry_fraction * biochar_fraction must be < 1",
            Bound::AboveMinusOne => "must be > -1",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidParameter {
        key: &'static str,
        bound: Bound,
        value: f64,
    },
    UnknownField(String),
    NonPositiveCapacity(f64),
    NonPositiveFarmSize(f64),
    DiscountRate(f64),
    EmptyCashFlows,
    ScheduleTooShort {
        needed: usize,
        got: usize,
    },
    ZeroInvestment,
    InvalidAnchor {
        name: &'static str,
        value: f64,
    },
    NoRoot {
        what: &'static str,
        lo: f64,
        hi: f64,
    },
    YearOutOfRange {
        year: u32,
        horizon: u32,
    },
    EmptyGrid,
    NonPositiveStep(f64),
    GridNotIncreasing {
        index: usize,
    },
    ScenarioIndex {
        index: usize,
        len: usize,
    },
    /// A sweep grid value was rejected; carries the grid position and the
    /// underlying parameter error.
    GridPoint {
        index: usize,
        value: f64,
        source: alloc::boxed::Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { key, bound, value } => {
                write!(f, "{key}: {bound} (got {value})")
            }
            Error::UnknownField(name) => write!(f, "unknown parameter field `{name}`"),
            Error::NonPositiveCapacity(c) => write!(f, "capacity must be > 0 (got {c})"),
            Error::NonPositiveFarmSize(a) => write!(f, "farm_size_ha must be > 0 (got {a})"),
            Error::DiscountRate(r) => write!(f, "discount rate must be > -1 (got {r})"),
            Error::EmptyCashFlows => f.write_str("cash-flow list is empty"),
            Error::ScheduleTooShort { needed, got } => {
                write!(f, "discount schedule has {got} rates, need {needed}")
            }
            Error::ZeroInvestment => f.write_str("initial investment is zero"),
            Error::InvalidAnchor { name, value } => {
                write!(f, "calibration anchor {name} must be > 0 (got {value})")
            }
            Error::NoRoot { what, lo, hi } => {
                write!(f, "no root in bracket [{lo}, {hi}] for {what}")
            }
            Error::YearOutOfRange { year, horizon } => {
                write!(f, "year {year} outside 1..={horizon}")
            }
            Error::EmptyGrid => f.write_str("sweep grid is empty"),
            Error::NonPositiveStep(s) => write!(f, "step must be positive (got {s})"),
            Error::GridNotIncreasing { index } => {
                write!(f, "sweep grid is not strictly increasing at index {index}")
            }
            Error::ScenarioIndex { index, len } => {
                write!(f, "scenario index {index} out of range (have {len})")
            }
            Error::GridPoint {
                index,
                value,
                source,
            } => write!(f, "grid point {index} (value {value}): {source}"),
        }
    }
}

impl core::error::Error for Error {}
