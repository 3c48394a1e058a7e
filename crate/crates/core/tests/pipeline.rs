//! End-to-end pipeline tests against the bundled example data set.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use hydro_cba::aggregate::SecurityCost;
use hydro_cba::config::RunConfig;
use hydro_cba::error::Error;
use hydro_cba::io;
use hydro_cba::pipeline::{self, evaluate, run_pipeline};

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn bundled_config() -> RunConfig {
    RunConfig::load(&fixture_path("run.toml")).expect("bundled config loads")
}

#[test]
fn bundled_run_matches_the_pinned_cost_components() {
    let output = evaluate(&bundled_config()).unwrap();
    let report = &output.report;

    // Displacement and lives-lost are exact published arithmetic.
    assert!(
        (report.displacement.npv.in_millions() - 12_756.0).abs() < 0.5,
        "displacement {} M",
        report.displacement.npv.in_millions()
    );
    assert!(
        (report.lives_lost.npv.in_millions() - 432.65).abs() < 0.01,
        "lives lost {} M",
        report.lives_lost.npv.in_millions()
    );

    // The synthetic survey fixture was tuned to the published annual
    // consumer surplus.
    let annual = output.tourism_surplus.annual.in_millions();
    assert!(
        (annual - 289.71).abs() / 289.71 < 1e-3,
        "annual consumer surplus {annual} M"
    );

    // Construction is computed and reported but excluded from the net.
    let construction = report.construction.as_ref().unwrap();
    assert!((construction.npv.in_millions() - 404_882.6).abs() < 0.1);
    assert!(!report.options.include_construction);

    // Security stays visible as an explicit gap.
    assert_eq!(report.security, SecurityCost::Unavailable);

    // Electricity is entirely synthesized from the anchor year.
    assert_eq!(report.electricity.imputed_fraction, 1.0);

    // Both electricity modes are reported alongside the published figure.
    let modes = &output.electricity_modes;
    assert!((modes.annual_net_mbdt - 5_644.944).abs() < 1e-6);
    assert!(modes.discount_total_mbdt > 0.0);
    assert!(modes.cpi_scale_total_mbdt > 0.0);
    assert_eq!(modes.reference_mbdt, Some(138_341.7));
    assert!(modes.discount_deviation_pct.is_some());
    assert!(modes.cpi_scale_deviation_pct.is_some());

    // The known data quirk is surfaced as a warning.
    assert!(
        output
            .warnings
            .iter()
            .any(|w| w.contains("crops") && w.contains("1046375") && w.contains("10046375")),
        "crops warning missing: {:?}",
        output.warnings
    );

    // Environmental CVM: brute-force oracle over the fixture's loss lines,
    // scaled to the 18,000 affected families.
    let per_record: f64 = [
        326.0 * 1050.0,
        1375.0 * 761.0,
        745.0 * 636.0,
        654.0 * 350.0,
        180.0 * 482_238.0,
        18.0 * 100.0,
        1018.0 * 18_036.0,
    ]
    .iter()
    .sum();
    let environmental = report.environmental.as_ref().unwrap();
    let expected_m = per_record * 18_000.0 / 1.0e6;
    assert!(
        (environmental.npv.in_millions() - expected_m).abs() < 1e-6,
        "environmental {} M vs oracle {expected_m} M",
        environmental.npv.in_millions()
    );
    assert!(!report.options.include_environmental);

    // Net benefit stays positive under the default accounting.
    assert!(report.net_benefit.value > 0.0);
}

#[test]
fn run_log_lists_every_imputed_point_exactly_once() {
    let output = evaluate(&bundled_config()).unwrap();
    let log = pipeline::run_log(&output);

    let mut seen: BTreeMap<(String, i32), usize> = BTreeMap::new();
    for line in log.lines() {
        if let Some(rest) = line.strip_prefix("imputed: ") {
            let mut parts = rest.split(' ');
            let series = parts.next().unwrap().to_string();
            let year: i32 = parts.next().unwrap().parse().unwrap();
            *seen.entry((series, year)).or_default() += 1;
        }
    }
    assert!(!seen.is_empty());
    for ((series, year), count) in &seen {
        assert_eq!(*count, 1, "{series} {year} listed {count} times");
    }

    // Log lines reconcile with the per-series bookkeeping.
    for (series, counts) in &output.imputed_counts {
        let logged = seen.keys().filter(|(s, _)| s == series).count();
        assert_eq!(
            logged, counts.imputed,
            "{series}: {logged} logged vs {} counted",
            counts.imputed
        );
    }

    // And with the published imputation shares for the bundled data: the
    // CPI is 24/59 imputed (~40%), electricity fully imputed, tourism all
    // but the anchor year.
    assert_eq!(output.imputed_counts["cpi"].imputed, 24);
    assert_eq!(output.imputed_counts["cpi"].total, 59);
    assert_eq!(output.imputed_counts["electricity_net_benefit"].imputed, 59);
    assert_eq!(output.imputed_counts["electricity_net_benefit"].total, 59);
    assert_eq!(output.imputed_counts["tourism_value"].imputed, 58);
    assert_eq!(output.imputed_counts["tourism_value"].total, 59);
    assert_eq!(output.imputed_counts["fish_catch_tons"].imputed, 22);
    assert_eq!(output.imputed_counts["fish_catch_tons"].total, 34);

    // Component fractions match the series bookkeeping.
    let report = &output.report;
    assert_eq!(
        report.tourism.imputed_fraction,
        58.0 / 59.0
    );
    assert_eq!(report.fisheries.imputed_fraction, 22.0 / 34.0);
}

#[test]
fn empty_fisheries_file_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty_fisheries.csv");
    fs::write(&empty, "fiscal_year,production_tons,revenue_mbdt\n").unwrap();
    let mut config = bundled_config();
    config.paths.fisheries = empty.clone();
    let err = evaluate(&config).unwrap_err();
    match err {
        Error::MissingDataYear { context, .. } => {
            assert!(context.unwrap().contains("empty_fisheries.csv"));
        }
        other => panic!("expected MissingDataYear, got {other}"),
    }
}

#[test]
fn artifacts_are_written_and_non_empty() {
    let dir = tempfile::tempdir().unwrap();
    let (_output, files) = run_pipeline(&bundled_config(), Some(dir.path())).unwrap();
    assert_eq!(files.len(), 4);
    for file in &files {
        let metadata = fs::metadata(file).unwrap();
        assert!(metadata.len() > 0, "{} is empty", file.display());
    }
    let csv = fs::read_to_string(dir.path().join(pipeline::REPORT_CSV)).unwrap();
    assert!(csv.starts_with("component,label,value_mbdt,base_year,imputed_fraction\n"));
    assert!(csv.contains("security,Security cost,unavailable"));
    assert!(csv.contains("net_benefit,Net benefit,"));
    let curve = fs::read_to_string(dir.path().join(pipeline::DEMAND_CURVE_CSV)).unwrap();
    assert!(curve.starts_with("fee,predicted_visits\n"));
    assert!(curve.lines().count() > 10);
}

#[test]
fn bundled_fixture_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();

    let cpi = io::read_series_csv(&fixture_path("cpi.csv"), "cpi").unwrap();
    let path = dir.path().join("cpi.csv");
    io::write_series_csv(&path, &cpi).unwrap();
    assert_eq!(io::read_series_csv(&path, "cpi").unwrap(), cpi);

    let fish = io::read_fisheries_csv(&fixture_path("fisheries.csv")).unwrap();
    let path = dir.path().join("fisheries.csv");
    io::write_fisheries_csv(&path, &fish).unwrap();
    assert_eq!(io::read_fisheries_csv(&path).unwrap(), fish);

    let survey = io::read_survey_csv(&fixture_path("tourism_survey.csv")).unwrap();
    let path = dir.path().join("survey.csv");
    io::write_survey_csv(&path, &survey).unwrap();
    assert_eq!(io::read_survey_csv(&path).unwrap(), survey);

    let zones = io::read_zone_populations(&fixture_path("zones.csv")).unwrap();
    let path = dir.path().join("zones.csv");
    io::write_zone_populations(&path, &zones).unwrap();
    assert_eq!(io::read_zone_populations(&path).unwrap(), zones);

    let households = io::read_household_losses(&fixture_path("household_losses.csv"), 2019).unwrap();
    let path = dir.path().join("households.csv");
    io::write_household_losses(&path, &households).unwrap();
    assert_eq!(io::read_household_losses(&path, 2019).unwrap(), households);

    let fit = io::read_fit_json(&fixture_path("fit_tourism.json")).unwrap();
    let path = dir.path().join("fit.json");
    io::write_fit_json(&path, &fit).unwrap();
    assert_eq!(io::read_fit_json(&path).unwrap(), fit);
}

#[test]
fn catch_column_sums_to_the_published_rows() {
    // Oracle: adding the twelve published production figures by hand gives
    // 97,916.53 tons.
    let data = io::read_fisheries_csv(&fixture_path("fisheries.csv")).unwrap();
    let hand_sum: f64 = 5389.0
        + 7633.0
        + 5495.0
        + 7115.0
        + 8974.0
        + 8421.75
        + 8813.56
        + 7725.55
        + 8644.85
        + 9589.6
        + 9974.44
        + 10140.78;
    assert!((hand_sum - 97_916.53).abs() < 1e-9);
    let report = data.catch.sum_report();
    assert!((report.total - 97_916.53).abs() < 1e-9);
    assert_eq!(report.point_count, 12);
    assert_eq!(report.imputed_count, 0);
}

#[test]
fn published_fit_prediction_examples() {
    let fit = io::read_fit_json(&fixture_path("fit_tourism.json")).unwrap();

    // TC = 100 contributes -2.10306 and MI = 20,000 contributes 28.272 on
    // top of the intercept.
    let covariates = |dhaka: f64| {
        BTreeMap::from([
            ("travel_cost".to_string(), 100.0),
            ("monthly_income".to_string(), 20_000.0),
            ("alone".to_string(), 0.0),
            ("dhaka".to_string(), dhaka),
        ])
    };
    let predicted = fit.predict(&covariates(0.0)).unwrap();
    let expected = fit.intercept - 2.10306 + 28.272;
    assert!((predicted - expected).abs() < 1e-9, "{predicted} vs {expected}");

    // Toggling the capital-region dummy shifts the prediction by exactly
    // its coefficient.
    let with_dhaka = fit.predict(&covariates(1.0)).unwrap();
    assert!(((with_dhaka - predicted) - (-387.2958)).abs() < 1e-9);

    // All-zero covariates return the intercept alone.
    let zeros = BTreeMap::from([
        ("travel_cost".to_string(), 0.0),
        ("monthly_income".to_string(), 0.0),
        ("alone".to_string(), 0.0),
        ("dhaka".to_string(), 0.0),
    ]);
    assert_eq!(fit.predict(&zeros).unwrap(), fit.intercept);
}

#[test]
fn life_expectancy_file_extends_the_bundled_anchors() {
    let table = io::read_life_expectancy(&fixture_path("life_expectancy.csv")).unwrap();
    assert_eq!(table.get(1987), Some(56.0));
    assert_eq!(table.get(1994), Some(61.0));
}

#[test]
fn published_fit_round_trips_unchanged() {
    // The published regression fixture (including its internally
    // inconsistent t-statistics) survives serialization untouched.
    let fit = io::read_fit_json(&fixture_path("fit_tourism.json")).unwrap();
    assert_eq!(fit.coefficients["travel_cost"], -0.0210306);
    assert_eq!(fit.coefficients["monthly_income"], 0.0014136);
    assert_eq!(fit.coefficients["alone"], 31.34816);
    assert_eq!(fit.coefficients["dhaka"], -387.2958);
    assert_eq!(fit.r_squared, 0.2542);
    assert_eq!(fit.f_stat, 21.16);
    assert_eq!(fit.standard_errors["travel_cost"], 0.064171);
    assert_eq!(fit.t_stats["travel_cost"], -3.28);
    assert_eq!(fit.n, 121);
    assert_eq!(fit.k, 4);

    let json = serde_json::to_string(&fit).unwrap();
    let back: hydro_cba::RegressionFit = serde_json::from_str(&json).unwrap();
    assert_eq!(back, fit);
}

#[test]
fn sweep_doubles_the_electricity_margin() {
    let mut config = bundled_config();
    // Integer margins keep the doubling exact in floating point.
    config.electricity.unit_price_bdt_per_kwh = 8.2;
    config.electricity.unit_cost_bdt_per_kwh = 4.2;
    let grid = hydro_cba::ParameterGrid {
        axes: vec![hydro_cba::aggregate::GridAxis {
            key: "electricity.unit_price_bdt_per_kwh".into(),
            values: vec!["8.2".into(), "12.2".into()],
        }],
    };
    let rows = pipeline::run_sweep(&config, &grid).unwrap();
    assert_eq!(rows.len(), 2);
    let base = rows[0].components_mbdt["electricity"];
    let doubled = rows[1].components_mbdt["electricity"];
    assert!(
        (doubled - 2.0 * base).abs() / doubled < 1e-12,
        "{base} vs {doubled}"
    );
    // Other components are untouched by the electricity sweep.
    assert_eq!(
        rows[0].components_mbdt["fisheries"],
        rows[1].components_mbdt["fisheries"]
    );
}

#[test]
fn survey_summaries_reproduce_published_income_moments() {
    let summaries = pipeline::survey_summaries(&bundled_config()).unwrap();
    let income = summaries
        .iter()
        .find(|s| s.variable == "monthly_income")
        .unwrap();
    assert_eq!(income.n, 200);
    assert!(
        ((income.mean * 100.0).round() / 100.0 - 20_151.49).abs() < 1e-9,
        "mean {}",
        income.mean
    );
    assert!(
        ((income.sd * 10.0).round() / 10.0 - 20_858.8).abs() < 1e-9,
        "sd {}",
        income.sd
    );
    assert_eq!(income.min, 1_800.0);
    assert_eq!(income.max, 200_000.0);
}

#[test]
fn include_construction_flips_the_net_sign() {
    let mut config = bundled_config();
    config.aggregate.include_construction = true;
    let output = evaluate(&config).unwrap();
    assert!(output.report.net_benefit.value < 0.0);

    let default_output = evaluate(&bundled_config()).unwrap();
    assert!(default_output.report.net_benefit.value > 0.0);
}
