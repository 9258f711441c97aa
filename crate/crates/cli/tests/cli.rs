#![allow(clippy::field_reassign_with_default)]

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use biochar_cli::commands::parallel_sweep;
use biochar_cli::config::{self, load_parameters, Format};
use biochar_cli::export::{self, LEDGER_HEADER, RANKING_HEADER, SWEEP_HEADER};
use biochar_core::calibrate::anchor_outputs;
use biochar_core::sweep::grid;
use biochar_core::{build_ledger, paper_brazil_scenarios, sweep_1d, ParameterSet};
use proptest::prelude::*;

fn biochar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biochar"))
        .args(args)
        .output()
        .expect("spawn biochar")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn names(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    v.sort();
    v
}

#[test]
fn run_writes_every_file_and_they_load_back() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = biochar(&["--preset", "paper-brazil", "--out", path_str(&out), "run"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let files = names(&out);
    assert_eq!(files.len(), 19, "{files:?}");
    assert!(files.contains(&"ranking.csv".to_string()));

    let text = stdout(&o);
    assert!(text.contains("small-A: break-even"), "{text}");
    assert!(
        text.lines()
            .any(|l| l.trim_start().starts_with("1  large-B")),
        "{text}"
    );

    for s in paper_brazil_scenarios() {
        let csv = fs::read_to_string(out.join(format!("ledger-{}.csv", s.label))).unwrap();
        assert_eq!(csv.lines().next().unwrap(), LEDGER_HEADER.join(","));
        let rows = export::read_ledger_csv(&csv).unwrap();
        assert_eq!(rows.len(), 21);
        assert_eq!(export::rows_to_csv(&rows), csv);

        let json = fs::read_to_string(out.join(format!("ledger-{}.json", s.label))).unwrap();
        let ledger = export::read_ledger_json(&json).unwrap();
        assert_eq!(export::ledger_json(&ledger), json);
        assert_eq!(export::ledger_csv(&ledger), csv);

        let m = fs::read_to_string(out.join(format!("metrics-{}.json", s.label))).unwrap();
        let report = export::read_metrics_json(&m).unwrap();
        assert_eq!(report.label, s.label);
        assert_eq!(export::metrics_json(&report), m);
    }
    let ranking = fs::read_to_string(out.join("ranking.csv")).unwrap();
    assert_eq!(ranking.lines().next().unwrap(), RANKING_HEADER.join(","));
    assert_eq!(ranking.lines().count(), 7);
}

#[test]
fn format_flag_limits_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let o = biochar(&[
        "--out",
        path_str(tmp.path()),
        "--format",
        "csv",
        "run",
        "--scenario",
        "small",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        names(tmp.path()),
        [
            "ledger-small-A.csv",
            "ledger-small-B.csv",
            "metrics-small-A.json",
            "metrics-small-B.json",
            "ranking.csv"
        ]
    );
}

#[test]
fn unmatched_selector_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = biochar(&["--out", path_str(tmp.path()), "run", "--scenario", "huge"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("no scenarios selected"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn unwritable_output_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("occupied");
    fs::write(&file, "x").unwrap();
    let o = biochar(&["--out", path_str(&file), "run"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn invalid_config_names_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.json");
    fs::write(&cfg, r#"{"bagasse_availability": 1.2}"#).unwrap();
    let o = biochar(&[
        "--config",
        path_str(&cfg),
        "--out",
        path_str(tmp.path()),
        "run",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bagasse_availability"), "{err}");
    assert!(err.contains("fraction out of [0,1]"), "{err}");

    let missing = tmp.path().join("missing.toml");
    let o = biochar(&["--config", path_str(&missing), "run"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_scenarios_replace_the_built_in_farms() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("coop.toml");
    fs::write(
        &cfg,
        "credit_price = 150.0\n[[scenarios]]\nlabel = \"coop-B\"\nfarm_size_ha = 15000.0\nkind = \"B\"\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    let o = biochar(&["--config", path_str(&cfg), "--out", path_str(&out), "run"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        names(&out),
        [
            "ledger-coop-B.csv",
            "ledger-coop-B.json",
            "metrics-coop-B.json",
            "ranking.csv"
        ]
    );
}

#[test]
fn credit_price_sweep_files() {
    let tmp = tempfile::tempdir().unwrap();
    let o = biochar(&[
        "--preset",
        "paper-brazil",
        "--out",
        path_str(tmp.path()),
        "sweep",
        "--param",
        "credit_price",
        "--from",
        "50",
        "--to",
        "200",
        "--step",
        "10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(tmp.path().join("sweep-credit_price.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 16 * 6 + 1);
    assert_eq!(lines[0], SWEEP_HEADER.join(","));
    assert!(
        lines[1].starts_with("small-A,credit_price,50,"),
        "{}",
        lines[1]
    );

    let series = fs::read_to_string(tmp.path().join("sweep-credit_price-large-B.csv")).unwrap();
    assert_eq!(series.lines().count(), 17);

    let json = fs::read_to_string(tmp.path().join("sweep-credit_price.json")).unwrap();
    let result = export::read_sweep_json(&json).unwrap();
    assert_eq!(export::sweep_json(&result), json);
    assert_eq!(export::sweep_csv(&result), csv);
    assert_eq!(result.thresholds[0].value(), Some(170.0));
    assert!(
        stdout(&o).contains("small-A: NPV >= 0 from 170"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn availability_sweep_has_nine_points() {
    let tmp = tempfile::tempdir().unwrap();
    let o = biochar(&[
        "--out",
        path_str(tmp.path()),
        "--format",
        "json",
        "sweep",
        "--param",
        "bagasse_availability",
        "--from",
        "0.5",
        "--to",
        "0.9",
        "--step",
        "0.05",
        "--scenario",
        "A",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json = fs::read_to_string(tmp.path().join("sweep-bagasse_availability.json")).unwrap();
    let r = export::read_sweep_json(&json).unwrap();
    assert_eq!(r.grid.len(), 9);
    assert_eq!(r.grid[8], 0.9);
    assert_eq!(r.scenarios, ["small-A", "medium-A", "large-A"]);
}

#[test]
fn bad_sweep_arguments() {
    let tmp = tempfile::tempdir().unwrap();
    let out = path_str(tmp.path());
    let o = biochar(&[
        "--out",
        out,
        "sweep",
        "--param",
        "credit_price",
        "--from",
        "50",
        "--to",
        "200",
        "--step",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("step must be positive"),
        "{}",
        stderr(&o)
    );

    let o = biochar(&[
        "--out", out, "sweep", "--param", "no_such", "--from", "0", "--to", "1", "--step", "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no_such"), "{}", stderr(&o));

    let o = biochar(&[
        "--out",
        out,
        "sweep",
        "--param",
        "bagasse_availability",
        "--from",
        "0.5",
        "--to",
        "1.5",
        "--step",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("bagasse_availability"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn calibrated_parameters_reproduce_the_anchors() {
    let tmp = tempfile::tempdir().unwrap();
    let o = biochar(&[
        "--out",
        path_str(tmp.path()),
        "calibrate",
        "--paper-anchors",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(tmp.path().join("calibrated.toml")).unwrap();
    let p = load_parameters(&text, Format::Toml).unwrap();
    let a = anchor_outputs(&p).unwrap();
    assert!((a.small_equipment / 39.5e6 - 1.0).abs() < 1e-3);
    assert!((a.small_labor_total / 7e6 - 1.0).abs() < 1e-3);
    assert!((a.small_rev_cost_ratio / 1.7 - 1.0).abs() < 1e-3);

    let res: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(tmp.path().join("calibration-residuals.json")).unwrap(),
    )
    .unwrap();
    assert!(res["equipment"]["rel_error"].as_f64().unwrap().abs() < 1e-9);

    // the saved file drives a run exactly like the preset does
    let (a_out, b_out) = (tmp.path().join("a"), tmp.path().join("b"));
    let cfg = tmp.path().join("calibrated.toml");
    assert!(
        biochar(&["--config", path_str(&cfg), "--out", path_str(&a_out), "run"])
            .status
            .success()
    );
    assert!(
        biochar(&["--preset", "paper-brazil", "--out", path_str(&b_out), "run"])
            .status
            .success()
    );
    let m = |d: &Path| fs::read_to_string(d.join("metrics-small-A.json")).unwrap();
    let (ma, mb) = (
        export::read_metrics_json(&m(&a_out)).unwrap(),
        export::read_metrics_json(&m(&b_out)).unwrap(),
    );
    assert!((ma.npv - mb.npv).abs() <= 1e-6 * mb.npv.abs());
}

#[test]
fn calibrating_on_own_outputs_keeps_the_ratios() {
    let mut p = ParameterSet::default();
    p.location_cost_ratio = 0.8;
    p.wage_ratio = 0.3;
    p.credit_factor = 1.4;
    let a = anchor_outputs(&p).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("p.toml");
    fs::write(&cfg, config::to_toml(&p)).unwrap();
    let o = biochar(&[
        "--config",
        path_str(&cfg),
        "--out",
        path_str(tmp.path()),
        "calibrate",
        "--equipment",
        &a.small_equipment.to_string(),
        "--labor",
        &a.small_labor_total.to_string(),
        "--ratio",
        &a.small_rev_cost_ratio.to_string(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let q = load_parameters(
        &fs::read_to_string(tmp.path().join("calibrated.toml")).unwrap(),
        Format::Toml,
    )
    .unwrap();
    assert!((q.location_cost_ratio - 0.8).abs() < 1e-9);
    assert!((q.wage_ratio - 0.3).abs() < 1e-9);
    assert!((q.credit_factor - 1.4).abs() < 1e-6);
}

#[test]
fn calibration_failures() {
    let tmp = tempfile::tempdir().unwrap();
    let out = path_str(tmp.path());
    let o = biochar(&[
        "--out",
        out,
        "calibrate",
        "--equipment",
        "39.5e6",
        "--labor",
        "7e6",
        "--ratio",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));

    let o = biochar(&["--out", out, "calibrate"]);
    assert_eq!(o.status.code(), Some(2));

    let o = biochar(&[
        "--out",
        out,
        "calibrate",
        "--equipment",
        "-1",
        "--labor",
        "7e6",
        "--ratio",
        "1.7",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_rebuilds_the_ranking() {
    let tmp = tempfile::tempdir().unwrap();
    let run_dir = tmp.path().join("run");
    let rep_dir = tmp.path().join("rep");
    assert!(biochar(&[
        "--preset",
        "paper-brazil",
        "--out",
        path_str(&run_dir),
        "run"
    ])
    .status
    .success());
    let o = biochar(&[
        "--out",
        path_str(&rep_dir),
        "report",
        "--from",
        path_str(&run_dir),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(rep_dir.join("ranking.csv")).unwrap(),
        fs::read(run_dir.join("ranking.csv")).unwrap()
    );

    let empty = tmp.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let o = biochar(&[
        "--out",
        path_str(&rep_dir),
        "report",
        "--from",
        path_str(&empty),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_and_unknown_flags() {
    assert_eq!(biochar(&["--help"]).status.code(), Some(0));
    assert_eq!(biochar(&["run", "--bogus"]).status.code(), Some(2));
    assert_eq!(biochar(&[]).status.code(), Some(2));
}

#[test]
fn parallel_sweep_matches_serial() {
    let p = ParameterSet::default();
    let s = paper_brazil_scenarios();
    let g = grid(0.5, 0.9, 0.05).unwrap();
    let serial = sweep_1d(&p, &s, "bagasse_availability", &g).unwrap();
    let parallel = parallel_sweep(&p, &s, "bagasse_availability", &g).unwrap();
    assert_eq!(serial, parallel);
}

#[test]
fn ledger_json_round_trips_from_the_library() {
    let p = ParameterSet::default();
    for s in paper_brazil_scenarios() {
        let l = build_ledger(&p, &s).unwrap();
        assert_eq!(
            export::read_ledger_json(&export::ledger_json(&l)).unwrap(),
            l
        );
    }
}

fn valid_parameters() -> impl Strategy<Value = ParameterSet> {
    (
        0.0..1.0f64,
        0.0..300.0f64,
        0.0..0.2f64,
        0.05..3.0f64,
        0.05..3.0f64,
        0.05..3.0f64,
        1u32..40,
    )
        .prop_map(|(avail, price, inflation, loc, wage, cf, n)| ParameterSet {
            bagasse_availability: avail,
            credit_price: price,
            inflation_rate: inflation,
            location_cost_ratio: loc,
            wage_ratio: wage,
            credit_factor: cf,
            horizon_years: n,
            ..ParameterSet::default()
        })
}

proptest! {
    #[test]
    fn saved_parameters_load_back_exactly(p in valid_parameters()) {
        prop_assert_eq!(&load_parameters(&config::to_toml(&p), Format::Toml).unwrap(), &p);
        prop_assert_eq!(&load_parameters(&config::to_json(&p), Format::Json).unwrap(), &p);
    }
}
