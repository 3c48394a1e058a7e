//! Acceptance suite: the contract-level criteria, one test per criterion,
//! each printing a single pass line with the measured values.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use hydro_cba::aggregate::{aggregate, AggregationOptions};
use hydro_cba::benefits::{
    electricity_annual_net, fisheries_implied_price, ComponentKind, ElectricityParams,
    ValuationComponent,
};
use hydro_cba::config::RunConfig;
use hydro_cba::costs::{
    construction_pv, displacement_cost, lives_lost_total, reconcile_line_totals,
    ConstructionCostSheet, HouseholdLossRecord, LossItem, LossUnit,
};
use hydro_cba::cpi::CpiIndexTable;
use hydro_cba::demand::{consumer_surplus, SurplusParams, Zone};
use hydro_cba::money::{Currency, MoneyAmount};
use hydro_cba::pipeline::{evaluate, run_pipeline};
use hydro_cba::regression::{ols_fit, ObservationSet};

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn bundled_config() -> RunConfig {
    RunConfig::load(&fixture_path("run.toml")).expect("bundled config loads")
}

/// Criterion 1: every production/revenue row reproduces its published
/// price-per-kg column within 0.01, in under a second.
#[test]
fn criterion_01_fisheries_price_column() {
    let started = Instant::now();
    let rows: [(&str, f64, f64, f64); 12] = [
        ("2006-07", 5389.0, 288.87, 53.60364),
        ("2007-08", 7633.0, 423.63, 55.4998),
        ("2008-09", 5495.0, 314.49, 57.23203),
        ("2009-10", 7115.0, 494.99, 69.56992),
        ("2010-11", 8974.0, 626.96, 69.86405),
        ("2011-12", 8421.75, 694.33, 82.44486),
        ("2012-13", 8813.56, 766.58, 86.97734),
        ("2013-14", 7725.55, 668.99, 86.59448),
        ("2014-15", 8644.85, 867.75, 100.3777),
        ("2015-16", 9589.6, 996.34, 103.898),
        ("2016-17", 9974.44, 1203.32, 120.6404),
        ("2017-18", 10140.78, 1242.5, 122.5251),
    ];
    let mut worst = 0.0f64;
    for (label, tons, revenue, published) in rows {
        let price = fisheries_implied_price(tons, revenue).unwrap();
        let error = (price - published).abs();
        assert!(error <= 0.01, "{label}: {price} vs published {published}");
        worst = worst.max(error);
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 01 PASS: 12/12 price rows within 0.01 (worst {worst:.6}) in {elapsed:?}"
    );
}

/// Criterion 2: land loss deflated 1957 -> 2019 by the published pair ratio
/// and scaled to 18,000 families lands within 0.5 M of the published
/// 12,756 M.
#[test]
fn criterion_02_displacement_cost() {
    let deflator = CpiIndexTable::from_ratio_pair("land", 1957, 2019, 40.0873).unwrap();
    let nominal = MoneyAmount::bdt(17_678.0, 1957).unwrap();
    let per_family = deflator.deflate(&nominal, 2019).unwrap();
    let total = displacement_cost(&per_family, 18_000).unwrap();
    let total_m = total.in_millions();
    assert!(
        (total_m - 12_755.93).abs() < 0.5,
        "engine arithmetic drifted: {total_m} M"
    );
    assert!(
        (total_m - 12_756.0).abs() <= 0.5,
        "published figure missed: {total_m} M"
    );
    println!(
        "criterion 02 PASS: displacement {total_m:.3} M vs published 12756 M (diff {:.3} M)",
        total_m - 12_756.0
    );
}

/// Criterion 3: 366,654 per life across 1,180 deaths within 0.01 M of the
/// published 432.65 M.
#[test]
fn criterion_03_lives_lost() {
    let per_life = MoneyAmount::bdt(366_654.0, 2019).unwrap();
    let total = lives_lost_total(&per_life, 1_180).unwrap();
    let total_m = total.in_millions();
    assert!((total_m - 432.65).abs() <= 0.01, "{total_m} M");
    println!(
        "criterion 03 PASS: lives lost {total_m:.5} M vs published 432.65 M (diff {:.5} M)",
        total_m - 432.65
    );
}

/// Criterion 4: the nominal construction total is exactly 2,440.3 M, and the
/// deflator backed out of the published nominal/PV pair reproduces
/// 404,882.6 M within 0.1 M.
#[test]
fn criterion_04_construction() {
    let sheet = ConstructionCostSheet::from_rate(
        MoneyAmount::new(2_402.5e6, Currency::Rs, 1957).unwrap(),
        700.0,
        54_000.0,
        Currency::Bdt,
    )
    .unwrap();
    let nominal = sheet.nominal_total(1.0, Currency::Bdt).unwrap();
    assert!(
        (nominal.in_millions() - 2_440.3).abs() < 1e-9,
        "nominal {} M",
        nominal.in_millions()
    );

    let ratio = 404_882.6 / 2_440.3; // prints as 165.915
    let deflator = CpiIndexTable::from_ratio_pair("construction", 1957, 2019, ratio).unwrap();
    let pv = construction_pv(&sheet, 2019, &deflator, 1.0).unwrap();
    let pv_m = pv.in_millions();
    assert!((pv_m - 404_882.6).abs() <= 0.1, "pv {pv_m} M");
    println!(
        "criterion 04 PASS: nominal {:.1} M exact; PV {pv_m:.2} M vs published 404882.6 M \
         (deflator {ratio:.3})",
        nominal.in_millions()
    );
}

/// Criterion 5: aggregating the five published component totals returns the
/// published net within 1.0 M; the source's own addition carries about
/// half a million of rounding slack, reported here.
#[test]
fn criterion_05_final_aggregation() {
    let component = |kind: ComponentKind, millions: f64| {
        ValuationComponent::new(
            kind,
            kind.to_string(),
            MoneyAmount::bdt(millions * 1.0e6, 2020).unwrap(),
            None,
            "published total",
            0.0,
        )
        .unwrap()
    };
    let components = vec![
        component(ComponentKind::Electricity, 138_341.7),
        component(ComponentKind::Tourism, 20_070.0),
        component(ComponentKind::Fisheries, 33_366.82),
        component(ComponentKind::Displacement, 12_756.0),
        component(ComponentKind::LivesLost, 432.65),
    ];
    let report = aggregate(&components, &AggregationOptions::default()).unwrap();
    let net_m = report.net_benefit.in_millions();
    let slack = net_m - 178_590.38;
    assert!(slack.abs() <= 1.0, "net {net_m} M");
    // Exact arithmetic on the inputs gives 178,589.87.
    assert!((net_m - 178_589.87).abs() < 1e-6);
    println!(
        "criterion 05 PASS: net {net_m:.2} M vs published 178590.38 M \
         (source rounding slack {slack:.2} M, reported not hidden)"
    );
}

/// Criterion 6: the anchor-year electricity net benefit is 5,644.944 M
/// exact to the taka; the cumulative total is NOT asserted against the
/// published 138,341.7 M, but both spreading modes and their deviations
/// must be reported.
#[test]
fn criterion_06_electricity() {
    let annual = electricity_annual_net(&ElectricityParams::default()).unwrap();
    assert!(
        (annual.value - 5_644_944_000.0).abs() < 1.0,
        "annual net {} BDT",
        annual.value
    );

    let output = evaluate(&bundled_config()).unwrap();
    let modes = &output.electricity_modes;
    assert_eq!(modes.reference_mbdt, Some(138_341.7));
    let discount_dev = modes.discount_deviation_pct.expect("deviation reported");
    let cpi_dev = modes.cpi_scale_deviation_pct.expect("deviation reported");
    assert!(modes.discount_total_mbdt > 0.0 && modes.cpi_scale_total_mbdt > 0.0);

    // The run log must carry both totals and the deviations.
    let log = hydro_cba::pipeline::run_log(&output);
    assert!(log.contains("discount mode"));
    assert!(log.contains("cpi-scale mode"));
    assert!(log.contains("published cumulative = 138341.7 M"));

    println!(
        "criterion 06 PASS: annual net {:.0} BDT exact; cumulative reported as \
         discount {:.1} M ({discount_dev:+.1}%) / cpi-scale {:.1} M ({cpi_dev:+.1}%) \
         vs published 138341.7 M (not asserted)",
        annual.value, modes.discount_total_mbdt, modes.cpi_scale_total_mbdt
    );
}

/// Criterion 7: the household loss lines reproduce the published totals
/// exactly, and the crops line triggers the documented-inconsistency
/// warning (computed 1,046,375 vs printed 10,046,375).
#[test]
fn criterion_07_household_loss_lines() {
    let item = |name: &str, quantity: f64, unit: LossUnit, unit_price: f64| LossItem {
        name: name.into(),
        quantity,
        unit,
        unit_price,
    };
    let record = HouseholdLossRecord {
        respondent_id: "avg".into(),
        items: vec![
            item("rice", 326.0, LossUnit::Mound, 1050.0),
            item("crops", 1375.0, LossUnit::Kg, 761.0),
            item("fruits", 745.0, LossUnit::Kg, 636.0),
            item("fishes", 654.0, LossUnit::Kg, 350.0),
            item("wood", 180.0, LossUnit::Mound, 482_238.0),
            item("acquired_land", 1018.0, LossUnit::Decimal, 18_036.0),
        ],
        land_lost_decimal: 1018.0,
        displaced: true,
        survey_year: 2019,
    };
    let expect = [
        ("rice", 342_300.0),
        ("crops", 1_046_375.0),
        ("fruits", 473_820.0),
        ("fishes", 228_900.0),
        ("wood", 86_802_840.0),
        ("acquired_land", 18_360_648.0),
    ];
    for ((name, expected), item) in expect.iter().zip(&record.items) {
        assert_eq!(item.name, *name);
        assert_eq!(item.value(), *expected, "{name}");
    }

    let published = std::collections::BTreeMap::from([
        ("rice".to_string(), 342_300.0),
        ("crops".to_string(), 10_046_375.0),
        ("fruits".to_string(), 473_820.0),
        ("fishes".to_string(), 228_900.0),
        ("wood".to_string(), 86_802_840.0),
        ("acquired_land".to_string(), 18_360_648.0),
    ]);
    let discrepancies = reconcile_line_totals(&record, &published);
    assert_eq!(discrepancies.len(), 1);
    assert_eq!(discrepancies[0].item, "crops");
    assert_eq!(discrepancies[0].computed, 1_046_375.0);
    assert_eq!(discrepancies[0].published, 10_046_375.0);

    // The bundled pipeline surfaces the same warning.
    let output = evaluate(&bundled_config()).unwrap();
    assert!(output.warnings.iter().any(|w| w.contains("crops")));

    println!(
        "criterion 07 PASS: rice/fruits/fishes/wood/land exact; crops flagged \
         (computed 1046375 vs printed 10046375)"
    );
}

/// Criterion 8: 200 random full-rank instances (n <= 50, k <= 5) against a
/// brute-force normal-equations oracle, coefficients within 1e-8 relative
/// and residual-regressor orthogonality below 1e-6, in under 10 s.
#[test]
fn criterion_08_ols_property_suite() {
    use rand::Rng;
    use rand::SeedableRng;

    #[allow(clippy::needless_range_loop)]
    fn oracle_beta(y: &[f64], columns: &[Vec<f64>]) -> Vec<f64> {
        let n = y.len();
        let p = columns.len() + 1;
        let design = |i: usize, j: usize| -> f64 {
            if j == 0 {
                1.0
            } else {
                columns[j - 1][i]
            }
        };
        let mut xtx = nalgebra::DMatrix::<f64>::zeros(p, p);
        let mut xty = nalgebra::DVector::<f64>::zeros(p);
        for i in 0..n {
            for a in 0..p {
                xty[a] += design(i, a) * y[i];
                for b in 0..p {
                    xtx[(a, b)] += design(i, a) * design(i, b);
                }
            }
        }
        let beta = xtx.try_inverse().expect("full rank") * xty;
        beta.iter().copied().collect()
    }

    let started = Instant::now();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_240_817);
    let mut worst_rel = 0.0f64;
    for instance in 0..200 {
        let k = rng.gen_range(1..=5usize);
        let n = rng.gen_range((k + 5)..=50usize);
        let columns: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        let true_beta: Vec<f64> = (0..=k).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let mut acc = true_beta[0];
                for j in 0..k {
                    acc += true_beta[j + 1] * columns[j][i];
                }
                acc + rng.gen_range(-1.0..1.0)
            })
            .collect();

        let mut data = ObservationSet::new(y.clone()).unwrap();
        for (j, column) in columns.iter().enumerate() {
            data.add_regressor(format!("x{j}"), column.clone()).unwrap();
        }
        let fit = ols_fit(&data).unwrap();
        let oracle = oracle_beta(&y, &columns);

        let check = |engine: f64, expected: f64| {
            let rel = (engine - expected).abs() / expected.abs().max(1.0);
            assert!(
                rel <= 1e-8,
                "instance {instance}: engine {engine} vs oracle {expected} (rel {rel:.2e})"
            );
            rel
        };
        worst_rel = worst_rel.max(check(fit.intercept, oracle[0]));
        for j in 0..k {
            worst_rel = worst_rel.max(check(fit.coefficients[&format!("x{j}")], oracle[j + 1]));
        }
        for column in &columns {
            let dot: f64 = fit.residuals.iter().zip(column).map(|(r, x)| r * x).sum();
            let norm: f64 = column.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(
                dot.abs() < 1e-6 * norm.max(1.0),
                "instance {instance}: residual dot {dot}"
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 08 PASS: 200 instances within 1e-8 of the oracle \
         (worst rel {worst_rel:.2e}), orthogonality < 1e-6, in {elapsed:?}"
    );
}

/// Criterion 9: on the analytic demand visits(f) = 100 - 2f the surplus
/// converges to 2,500 within 1% by fee step 0.25, halving the step strictly
/// shrinks the error, and the published tourism figures are reported as
/// references rather than asserted.
#[test]
fn criterion_09_consumer_surplus_convergence() {
    let tc: Vec<f64> = (0..12).map(|i| i as f64).collect();
    let mi: Vec<f64> = (0..12).map(|i| ((i * 5) % 9) as f64 * 0.1).collect();
    let alone: Vec<f64> = (0..12).map(|i| (i % 2) as f64).collect();
    let dhaka: Vec<f64> = (0..12).map(|i| ((i / 2) % 2) as f64).collect();
    let ys: Vec<f64> = tc.iter().map(|t| 100.0 - 2.0 * t).collect();
    let mut data = ObservationSet::new(ys).unwrap();
    data.add_regressor("travel_cost", tc).unwrap();
    data.add_regressor("monthly_income", mi).unwrap();
    data.add_dummy("alone", alone).unwrap();
    data.add_dummy("dhaka", dhaka).unwrap();
    let fit = ols_fit(&data).unwrap();

    let zone = Zone {
        name: "unit".into(),
        population: 1_000_000,
        visitors_observed: 0,
        mean_travel_cost: 0.0,
        mean_monthly_income: 0.0,
        alone_share: 0.0,
        dhaka: false,
    };
    let cs_at = |fee_step: f64| {
        consumer_surplus(
            &fit,
            std::slice::from_ref(&zone),
            &SurplusParams {
                fee_step,
                ..SurplusParams::default()
            },
        )
        .unwrap()
        .annual
        .value
    };

    let at_quarter = cs_at(0.25);
    let rel = (at_quarter - 2_500.0).abs() / 2_500.0;
    assert!(rel < 0.01, "CS {at_quarter} at step 0.25 (rel {rel})");

    // Off-grid steps keep the trapezoid overshoot nonzero so strictness is
    // meaningful.
    let steps = [0.7, 0.35, 0.175, 0.0875];
    let errors: Vec<f64> = steps.iter().map(|h| (cs_at(*h) - 2_500.0).abs()).collect();
    for pair in errors.windows(2) {
        assert!(pair[1] < pair[0], "errors not strictly shrinking: {errors:?}");
    }

    // Published tourism figures are reference-reported by the pipeline.
    let output = evaluate(&bundled_config()).unwrap();
    let annual = output
        .reference_comparisons
        .iter()
        .find(|c| c.name == "tourism_annual")
        .expect("annual reference reported");
    let cumulative = output
        .reference_comparisons
        .iter()
        .find(|c| c.name == "tourism_npv")
        .expect("cumulative reference reported");

    println!(
        "criterion 09 PASS: CS(0.25) = {at_quarter:.2} (rel {rel:.2e}); errors {errors:?} \
         strictly shrinking; tourism references: annual {:.2} M vs {:.2} M ({:+.2}%), \
         cumulative {:.1} M vs {:.1} M ({:+.1}%) — reported, not asserted",
        annual.engine_mbdt,
        annual.reference_mbdt,
        annual.deviation_pct,
        cumulative.engine_mbdt,
        cumulative.reference_mbdt,
        cumulative.deviation_pct
    );
}

/// Criterion 10: two consecutive runs of the bundled pipeline produce
/// byte-identical artifacts.
#[test]
fn criterion_10_determinism() {
    let config = bundled_config();
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let (_, files_a) = run_pipeline(&config, Some(dir_a.path())).unwrap();
    let (_, files_b) = run_pipeline(&config, Some(dir_b.path())).unwrap();
    assert_eq!(files_a.len(), files_b.len());
    let mut bytes_total = 0usize;
    for (a, b) in files_a.iter().zip(&files_b) {
        let contents_a = fs::read(a).unwrap();
        let contents_b = fs::read(b).unwrap();
        assert_eq!(
            contents_a,
            contents_b,
            "{} differs between runs",
            a.file_name().unwrap().to_string_lossy()
        );
        bytes_total += contents_a.len();
    }
    println!(
        "criterion 10 PASS: {} artifacts byte-identical across two runs ({bytes_total} bytes)",
        files_a.len()
    );
}
