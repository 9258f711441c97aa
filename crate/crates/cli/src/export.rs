//! CSV and JSON writers (and readers) for ledgers, metrics, sweeps and the
//! scenario ranking.
//!
//! CSV money columns are decimal dollars with two fractional digits. JSON
//! carries full `f64` precision. Column orders below are part of the file
//! format and do not change within a release.

use std::fmt::Write as _;

use biochar_core::{Ledger, MetricsReport, SweepResult};

/// Ledger CSV header. Row `year = 0` carries the initial investment in
/// `capital`; rows `1..=n` carry the yearly line items.
pub const LEDGER_HEADER: [&str; 17] = [
    "year",
    "capital",
    "maintenance",
    "operation",
    "labor",
    "credit_cert",
    "land_app",
    "biochar_sale",
    "credits",
    "sugarcane_uplift",
    "fertilizer_savings",
    "operational_savings",
    "costs_total",
    "revenues_total",
    "savings_total",
    "net",
    "cumulative_net",
];

/// Long-form sweep CSV header.
pub const SWEEP_HEADER: [&str; 4] = ["scenario", "parameter", "value", "npv"];

/// Per-scenario plotting series header.
pub const SERIES_HEADER: [&str; 2] = ["value", "npv"];

pub const RANKING_HEADER: [&str; 6] = [
    "rank",
    "scenario",
    "npv",
    "irr",
    "break_even_years",
    "roi_total",
];

pub fn money(x: f64) -> String {
    // `+ 0.0` folds -0.0 into 0.0
    format!("{:.2}", x + 0.0)
}

fn write_csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// One parsed ledger CSV row: the year and the 16 money columns.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    pub year: u32,
    pub values: [f64; 16],
}

pub fn ledger_rows(ledger: &Ledger) -> Vec<LedgerRow> {
    let c_i = ledger.capital.c_i;
    let mut rows = vec![LedgerRow {
        year: 0,
        values: {
            let mut v = [0.0; 16];
            v[0] = c_i;
            v[14] = -c_i;
            v[15] = -c_i;
            v
        },
    }];
    for y in &ledger.years {
        rows.push(LedgerRow {
            year: y.year,
            values: [
                0.0,
                y.costs.maintenance,
                y.costs.operation,
                y.costs.labor,
                y.costs.credit_cert,
                y.costs.land_app,
                y.revenues.biochar_sale,
                y.revenues.credits,
                y.revenues.sugarcane_uplift,
                y.savings.fertilizer,
                y.savings.operational,
                y.costs.total(),
                y.revenues.total(),
                y.savings.total(),
                y.net,
                y.cumulative_net,
            ],
        });
    }
    rows
}

pub fn rows_to_csv(rows: &[LedgerRow]) -> String {
    write_csv(
        &LEDGER_HEADER,
        rows.iter().map(|r| {
            std::iter::once(r.year.to_string())
                .chain(r.values.iter().map(|v| money(*v)))
                .collect::<Vec<_>>()
        }),
    )
}

pub fn ledger_csv(ledger: &Ledger) -> String {
    rows_to_csv(&ledger_rows(ledger))
}

pub fn read_ledger_csv(text: &str) -> Result<Vec<LedgerRow>, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(LEDGER_HEADER) {
        return Err(format!("unexpected ledger header: {header:?}"));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let year = rec[0].parse().map_err(|e| format!("year: {e}"))?;
        let mut values = [0.0; 16];
        for (i, v) in values.iter_mut().enumerate() {
            *v = rec[i + 1]
                .parse()
                .map_err(|e| format!("{}: {e}", LEDGER_HEADER[i + 1]))?;
        }
        out.push(LedgerRow { year, values });
    }
    Ok(out)
}

pub fn ledger_json(ledger: &Ledger) -> String {
    serde_json::to_string_pretty(ledger).expect("ledger serializes")
}

pub fn read_ledger_json(text: &str) -> serde_json::Result<Ledger> {
    serde_json::from_str(text)
}

pub fn metrics_json(report: &MetricsReport) -> String {
    serde_json::to_string_pretty(report).expect("metrics serialize")
}

pub fn read_metrics_json(text: &str) -> serde_json::Result<MetricsReport> {
    serde_json::from_str(text)
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let rows = result
        .scenarios
        .iter()
        .zip(&result.npv_by_scenario)
        .flat_map(|(label, row)| {
            result.grid.iter().zip(row).map(move |(x, npv)| {
                vec![
                    label.clone(),
                    result.parameter.clone(),
                    x.to_string(),
                    money(*npv),
                ]
            })
        });
    write_csv(&SWEEP_HEADER, rows)
}

/// `(value, npv)` series for one scenario of a sweep.
pub fn sweep_series_csv(result: &SweepResult, scenario: usize) -> String {
    let row = &result.npv_by_scenario[scenario];
    write_csv(
        &SERIES_HEADER,
        result
            .grid
            .iter()
            .zip(row)
            .map(|(x, npv)| vec![x.to_string(), money(*npv)]),
    )
}

pub fn sweep_json(result: &SweepResult) -> String {
    serde_json::to_string_pretty(result).expect("sweep serializes")
}

pub fn read_sweep_json(text: &str) -> serde_json::Result<SweepResult> {
    serde_json::from_str(text)
}

/// Reports sorted by NPV, best first; ties broken by label.
pub fn rank(reports: &[MetricsReport]) -> Vec<&MetricsReport> {
    let mut v: Vec<&MetricsReport> = reports.iter().collect();
    v.sort_by(|a, b| b.npv.total_cmp(&a.npv).then_with(|| a.label.cmp(&b.label)));
    v
}

fn irr_cell(r: &MetricsReport) -> String {
    match r.irr.rate() {
        Some(x) => format!("{:.4}", x),
        None => "undefined".into(),
    }
}

fn break_even_cell(r: &MetricsReport) -> String {
    match r.break_even.years() {
        Some(y) => format!("{y:.2}"),
        None => "never".into(),
    }
}

pub fn ranking_csv(reports: &[MetricsReport]) -> String {
    write_csv(
        &RANKING_HEADER,
        rank(reports).into_iter().enumerate().map(|(i, r)| {
            vec![
                (i + 1).to_string(),
                r.label.clone(),
                money(r.npv),
                irr_cell(r),
                break_even_cell(r),
                format!("{:.2}", r.roi_total),
            ]
        }),
    )
}

/// Fixed-width ranking table for the terminal.
pub fn ranking_table(reports: &[MetricsReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>4}  {:<16} {:>12} {:>8} {:>11} {:>10}",
        "rank", "scenario", "NPV $M", "IRR", "break-even", "ROI tot %"
    );
    for (i, r) in rank(reports).into_iter().enumerate() {
        let irr = r
            .irr
            .rate()
            .map_or("undefined".to_string(), |x| format!("{:.1}%", x * 100.0));
        let _ = writeln!(
            s,
            "{:>4}  {:<16} {:>12.2} {:>8} {:>11} {:>10.1}",
            i + 1,
            r.label,
            r.npv / 1e6,
            irr,
            break_even_cell(r),
            r.roi_total
        );
    }
    s
}

/// One summary line for a scenario run.
pub fn summary_line(r: &MetricsReport) -> String {
    let be = r
        .break_even
        .years()
        .map_or("never".to_string(), |y| format!("{y:.2} y"));
    let irr = r
        .irr
        .rate()
        .map_or("undefined".to_string(), |x| format!("{:.1}%", x * 100.0));
    format!(
        "{}: break-even {be}, NPV ${:.2}M, IRR {irr}, ROI total {:.1}%",
        r.label,
        r.npv / 1e6,
        r.roi_total
    )
}
