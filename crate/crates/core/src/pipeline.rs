//! Batch pipeline: ingest the configured inputs, run every valuation,
//! aggregate, and emit deterministic report artifacts.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::aggregate::{
    aggregate, compare_to_reference, sensitivity_sweep, AggregationOptions, NetBenefitReport,
    ParameterGrid, ReferenceComparison, SweepRow, REPORT_SCHEMA_VERSION,
};
use crate::benefits::{
    electricity_annual_net, electricity_npv, fisheries_npv, tourism_npv, ComponentKind,
    ElectricityBackcast, ElectricityParams, FisheriesParams, ValuationComponent,
};
use crate::config::{ElectricityMode, RunConfig};
use crate::costs::{
    construction_pv, displacement_cost, environmental_cost_cvm, lives_lost_total,
    reconcile_line_totals, ConstructionCostSheet, LineDiscrepancy,
};
use crate::cpi::{BackcastMethod, CpiIndexTable};
use crate::demand::{consumer_surplus, demand_curve, ConsumerSurplus, DemandPoint, SurplusParams};
use crate::error::{Error, Result};
use crate::io;
use crate::money::{Currency, MoneyAmount};
use crate::series::{AnnualSeries, Provenance, YearRange};
use crate::summary::{summarize_survey, SurveySummary};

/// The electricity cumulative total under both spreading modes, against the
/// published figure when one is configured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectricityModeTotals {
    pub annual_net_mbdt: f64,
    pub discount_rate: f64,
    pub discount_total_mbdt: f64,
    pub cpi_scale_total_mbdt: f64,
    pub reference_mbdt: Option<f64>,
    pub discount_deviation_pct: Option<f64>,
    pub cpi_scale_deviation_pct: Option<f64>,
}

/// One imputed datum consumed somewhere in the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputedPoint {
    pub series: String,
    pub year: i32,
    pub value: f64,
}

/// Imputation bookkeeping for one series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImputedCount {
    pub imputed: usize,
    pub total: usize,
}

/// Everything one pipeline evaluation produces, before any file is written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutput {
    pub schema_version: u32,
    pub report: NetBenefitReport,
    pub electricity_modes: ElectricityModeTotals,
    pub tourism_surplus: ConsumerSurplus,
    pub demand_curve: Vec<DemandPoint>,
    pub reference_comparisons: Vec<ReferenceComparison>,
    pub warnings: Vec<String>,
    pub imputed_points: Vec<ImputedPoint>,
    pub imputed_counts: BTreeMap<String, ImputedCount>,
    /// The configuration the run was evaluated under.
    pub config_snapshot: RunConfig,
}

fn log_series(
    series: &AnnualSeries,
    points: &mut Vec<ImputedPoint>,
    counts: &mut BTreeMap<String, ImputedCount>,
) {
    for (year, value, provenance) in series.iter() {
        if provenance == Provenance::Imputed {
            points.push(ImputedPoint {
                series: series.label().to_string(),
                year,
                value,
            });
        }
    }
    counts.insert(
        series.label().to_string(),
        ImputedCount {
            imputed: series.imputed_count(),
            total: series.len(),
        },
    );
}

/// Run the full valuation pipeline in memory.
pub fn evaluate(config: &RunConfig) -> Result<PipelineOutput> {
    config.validate()?;
    let currency = config.aggregate.currency;
    let mut warnings: Vec<String> = Vec::new();
    let mut imputed_points: Vec<ImputedPoint> = Vec::new();
    let mut imputed_counts: BTreeMap<String, ImputedCount> = BTreeMap::new();

    // --- price index ---
    let cpi_raw = io::read_cpi_csv(&config.paths.cpi, config.series.cpi_base_year)?;
    let earliest_needed = config
        .electricity
        .year_start
        .min(config.tourism.year_start)
        .min(config.fisheries.year_start);
    let cpi = cpi_raw.backcast(
        earliest_needed,
        BackcastMethod::GeometricTrend {
            window: config.series.backcast_window,
        },
    )?;
    log_series(cpi.series(), &mut imputed_points, &mut imputed_counts);

    // --- electricity, both spreading modes ---
    let electricity_params = |mode: ElectricityBackcast| -> Result<ElectricityParams> {
        Ok(ElectricityParams {
            avg_capacity_mw: config.electricity.avg_capacity_mw,
            hours_per_day: config.electricity.hours_per_day,
            days_per_year: config.electricity.days_per_year,
            unit_price: config.electricity.unit_price_bdt_per_kwh,
            unit_cost: config.electricity.unit_cost_bdt_per_kwh,
            year_range: YearRange::new(
                config.electricity.year_start,
                config.electricity.year_end,
            )?,
            backcast_mode: mode,
            currency,
        })
    };
    let discount_params = electricity_params(ElectricityBackcast::Discount {
        rate: config.electricity.discount_rate,
    })?;
    let cpi_scale_params = electricity_params(ElectricityBackcast::CpiScale)?;
    let discount_valuation = electricity_npv(&discount_params, &cpi)?;
    let cpi_scale_valuation = electricity_npv(&cpi_scale_params, &cpi)?;
    let annual_net = electricity_annual_net(&discount_params)?;

    let chosen_electricity = match config.electricity.mode {
        ElectricityMode::Discount => &discount_valuation,
        ElectricityMode::CpiScale => &cpi_scale_valuation,
    };
    log_series(
        &chosen_electricity.net_benefit_series,
        &mut imputed_points,
        &mut imputed_counts,
    );

    let electricity_reference = config.references.electricity_npv_mbdt;
    let deviation_pct = |engine_mbdt: f64| {
        electricity_reference.map(|reference| (engine_mbdt - reference) / reference * 100.0)
    };
    let electricity_modes = ElectricityModeTotals {
        annual_net_mbdt: annual_net.in_millions(),
        discount_rate: config.electricity.discount_rate,
        discount_total_mbdt: discount_valuation.component.npv.in_millions(),
        cpi_scale_total_mbdt: cpi_scale_valuation.component.npv.in_millions(),
        reference_mbdt: electricity_reference,
        discount_deviation_pct: deviation_pct(discount_valuation.component.npv.in_millions()),
        cpi_scale_deviation_pct: deviation_pct(cpi_scale_valuation.component.npv.in_millions()),
    };

    // --- fisheries ---
    let fisheries_data = io::read_fisheries_csv(&config.paths.fisheries)?;
    let fisheries_params = FisheriesParams {
        catch_series: fisheries_data.catch,
        revenue_series: fisheries_data.revenue,
        avg_price: config.fisheries.avg_price_bdt_per_kg,
        unit_cost: config.fisheries.unit_cost_bdt_per_kg,
        discount_rate: config.fisheries.discount_rate,
        base_year: config.fisheries.base_year,
        start_year: config.fisheries.year_start,
        accumulation_mode: config.fisheries.accumulation.mode(),
        currency,
    };
    let fisheries_valuation = fisheries_npv(&fisheries_params, &cpi)?;
    warnings.extend(fisheries_valuation.warnings.iter().cloned());
    log_series(
        &fisheries_valuation.catch_series,
        &mut imputed_points,
        &mut imputed_counts,
    );
    log_series(
        &fisheries_valuation.price_series,
        &mut imputed_points,
        &mut imputed_counts,
    );
    log_series(
        &fisheries_valuation.cost_series,
        &mut imputed_points,
        &mut imputed_counts,
    );

    // --- tourism ---
    let fit = io::read_fit_json(&config.paths.tourism_fit)?;
    let respondents = io::read_survey_csv(&config.paths.survey)?;
    let populations = io::read_zone_populations(&config.paths.zones)?;
    for zone_name in populations.keys() {
        if !respondents.iter().any(|r| &r.zone == zone_name) {
            warnings.push(format!(
                "zone '{zone_name}' has a population row but no survey respondents"
            ));
        }
    }
    let zones = io::zones_from_survey(&respondents, &populations)?;
    let surplus_params = SurplusParams {
        fee_step: config.tourism.fee_step_bdt,
        rate_per: config.tourism.rate_per,
        currency,
        base_year: config.tourism.anchor_year,
        max_steps: config.tourism.max_fee_steps,
    };
    let surplus = consumer_surplus(&fit, &zones, &surplus_params)?;
    let curve = demand_curve(
        &fit,
        &zones,
        &surplus_params,
        config.output.demand_curve_points,
    )?;
    let tourism_valuation = tourism_npv(
        &surplus.annual,
        YearRange::new(config.tourism.year_start, config.tourism.year_end)?,
        &cpi,
    )?;
    log_series(
        &tourism_valuation.series,
        &mut imputed_points,
        &mut imputed_counts,
    );

    // --- costs ---
    let land_deflator = CpiIndexTable::from_ratio_pair(
        "land_deflator",
        config.costs.land_loss_year,
        config.costs.displacement_target_year,
        config.costs.displacement_deflator_ratio,
    )?;
    let per_family_nominal = MoneyAmount::new(
        config.costs.per_family_land_loss_bdt,
        currency,
        config.costs.land_loss_year,
    )?;
    let per_family = land_deflator.deflate(&per_family_nominal, config.costs.displacement_target_year)?;
    let displacement_total = displacement_cost(&per_family, config.costs.families_displaced)?;
    let displacement_component = ValuationComponent::new(
        ComponentKind::Displacement,
        "Land loss and displacement",
        displacement_total,
        None,
        format!(
            "per-family loss {} at {} deflated by {} to {}, times {} families",
            config.costs.per_family_land_loss_bdt,
            config.costs.land_loss_year,
            config.costs.displacement_deflator_ratio,
            config.costs.displacement_target_year,
            config.costs.families_displaced
        ),
        0.0,
    )?;

    let per_life = MoneyAmount::new(
        config.costs.per_life_value_bdt,
        currency,
        config.costs.survey_year,
    )?;
    let lives_total = lives_lost_total(&per_life, config.costs.deaths)?;
    let lives_component = ValuationComponent::new(
        ComponentKind::LivesLost,
        "Lives lost",
        lives_total,
        None,
        format!(
            "per-life forgone income {} times {} deaths",
            config.costs.per_life_value_bdt, config.costs.deaths
        ),
        0.0,
    )?;

    let sheet = ConstructionCostSheet::from_rate(
        MoneyAmount::new(
            config.costs.establishment_m_rs * 1.0e6,
            Currency::Rs,
            config.costs.construction_year,
        )?,
        config.costs.compensation_rate_bdt_per_acre,
        config.costs.acres,
        currency,
    )?;
    let construction_deflator = CpiIndexTable::from_ratio_pair(
        "construction_deflator",
        config.costs.construction_year,
        config.costs.construction_target_year,
        config.costs.construction_deflator_ratio,
    )?;
    let construction_total = construction_pv(
        &sheet,
        config.costs.construction_target_year,
        &construction_deflator,
        config.costs.rs_to_bdt_rate,
    )?;
    let construction_component = ValuationComponent::new(
        ComponentKind::Construction,
        "Dam construction",
        construction_total,
        None,
        format!(
            "nominal {} M at {} deflated by {}",
            sheet
                .nominal_total(config.costs.rs_to_bdt_rate, currency)?
                .in_millions(),
            config.costs.construction_year,
            config.costs.construction_deflator_ratio
        ),
        0.0,
    )?;

    let households = io::read_household_losses(&config.paths.households, config.costs.survey_year)?;
    let environmental_total =
        environmental_cost_cvm(&households, Some(config.costs.cvm_scale_families))?;
    let environmental_component = ValuationComponent::new(
        ComponentKind::Environmental,
        "Environmental service losses",
        environmental_total,
        None,
        format!(
            "mean household loss over {} record(s) scaled to {} families",
            households.len(),
            config.costs.cvm_scale_families
        ),
        0.0,
    )?;
    if let Some(published_path) = &config.paths.household_published_totals {
        let published = io::read_published_totals(published_path)?;
        for record in &households {
            for LineDiscrepancy {
                item,
                computed,
                published,
            } in reconcile_line_totals(record, &published)
            {
                warnings.push(format!(
                    "household item '{item}': computed {computed} differs from published {published}"
                ));
            }
        }
    }

    // --- aggregate at the report base year ---
    let report_year = config.aggregate.report_base_year;
    let components = vec![
        chosen_electricity.component.clone().retag_base_year(report_year)?,
        fisheries_valuation.component.clone().retag_base_year(report_year)?,
        tourism_valuation.component.clone().retag_base_year(report_year)?,
        displacement_component.retag_base_year(report_year)?,
        lives_component.retag_base_year(report_year)?,
        construction_component.retag_base_year(report_year)?,
        environmental_component.retag_base_year(report_year)?,
    ];
    let options = AggregationOptions {
        include_construction: config.aggregate.include_construction,
        include_environmental: config.aggregate.include_environmental,
    };
    let report = aggregate(&components, &options)?;

    // --- reference comparisons ---
    let mut reference_comparisons = Vec::new();
    let mut compare = |name: &str, engine_mbdt: f64, reference: Option<f64>| {
        if let Some(reference_mbdt) = reference {
            reference_comparisons.push(compare_to_reference(name, engine_mbdt, reference_mbdt));
        }
    };
    compare(
        "electricity_annual_net",
        annual_net.in_millions(),
        config.references.electricity_annual_net_mbdt,
    );
    compare(
        "electricity_npv",
        report.electricity.npv.in_millions(),
        config.references.electricity_npv_mbdt,
    );
    compare(
        "fisheries_npv",
        report.fisheries.npv.in_millions(),
        config.references.fisheries_npv_mbdt,
    );
    compare(
        "tourism_annual",
        surplus.annual.in_millions(),
        config.references.tourism_annual_mbdt,
    );
    compare(
        "tourism_npv",
        report.tourism.npv.in_millions(),
        config.references.tourism_npv_mbdt,
    );
    compare(
        "displacement",
        report.displacement.npv.in_millions(),
        config.references.displacement_mbdt,
    );
    compare(
        "lives_lost",
        report.lives_lost.npv.in_millions(),
        config.references.lives_lost_mbdt,
    );
    compare(
        "construction_nominal",
        sheet
            .nominal_total(config.costs.rs_to_bdt_rate, currency)?
            .in_millions(),
        config.references.construction_nominal_mbdt,
    );
    if let Some(construction) = &report.construction {
        compare(
            "construction_pv",
            construction.npv.in_millions(),
            config.references.construction_pv_mbdt,
        );
    }
    compare(
        "net_benefit",
        report.net_benefit.in_millions(),
        config.references.net_benefit_mbdt,
    );

    Ok(PipelineOutput {
        schema_version: REPORT_SCHEMA_VERSION,
        report,
        electricity_modes,
        tourism_surplus: surplus,
        demand_curve: curve,
        reference_comparisons,
        warnings,
        imputed_points,
        imputed_counts,
        config_snapshot: config.clone(),
    })
}

/// Sweep the pipeline over a parameter grid.
pub fn run_sweep(config: &RunConfig, grid: &ParameterGrid) -> Result<Vec<SweepRow>> {
    sensitivity_sweep(config, grid, |c| evaluate(c).map(|out| out.report))
}

/// Summaries of the numeric survey columns.
pub fn survey_summaries(config: &RunConfig) -> Result<Vec<SurveySummary>> {
    let respondents = io::read_survey_csv(&config.paths.survey)?;
    let column = |f: &dyn Fn(&io::SurveyRespondent) -> f64| -> Vec<f64> {
        respondents.iter().map(f).collect()
    };
    Ok(vec![
        summarize_survey("monthly_income", &column(&|r| r.monthly_income))?,
        summarize_survey("travel_cost", &column(&|r| r.travel_cost))?,
        summarize_survey("visits", &column(&|r| r.visits as f64))?,
    ])
}

// ---------------------------------------------------------------------------
// Artifact files
// ---------------------------------------------------------------------------

/// File names produced by a pipeline run.
pub const REPORT_JSON: &str = "report.json";
pub const REPORT_CSV: &str = "report.csv";
pub const DEMAND_CURVE_CSV: &str = "demand_curve.csv";
pub const RUN_LOG: &str = "run_log.txt";

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(path)
}

fn component_csv_row(component: &ValuationComponent) -> String {
    format!(
        "{},{},{},{},{}\n",
        component.kind,
        component.label,
        component.npv.in_millions(),
        component.npv.base_year,
        component.imputed_fraction
    )
}

/// Render the component table as CSV.
pub fn report_csv(output: &PipelineOutput) -> String {
    let report = &output.report;
    let mut out = String::from("component,label,value_mbdt,base_year,imputed_fraction\n");
    for component in report.components() {
        out.push_str(&component_csv_row(component));
    }
    if matches!(report.security, crate::aggregate::SecurityCost::Unavailable) {
        out.push_str("security,Security cost,unavailable,,\n");
    }
    out.push_str(&format!(
        "gross_benefit,Gross benefit,{},{},\n",
        report.gross_benefit.in_millions(),
        report.gross_benefit.base_year
    ));
    out.push_str(&format!(
        "gross_cost,Gross cost,{},{},\n",
        report.gross_cost.in_millions(),
        report.gross_cost.base_year
    ));
    out.push_str(&format!(
        "net_benefit,Net benefit,{},{},\n",
        report.net_benefit.in_millions(),
        report.net_benefit.base_year
    ));
    out
}

/// Render the demand curve as CSV.
pub fn demand_curve_csv(output: &PipelineOutput) -> String {
    let mut out = String::from("fee,predicted_visits\n");
    for point in &output.demand_curve {
        out.push_str(&format!("{},{}\n", point.fee, point.visits));
    }
    out
}

/// Render the run log: warnings, reference comparisons, the electricity
/// mode totals, and every imputed data point consumed by the run.
pub fn run_log(output: &PipelineOutput) -> String {
    let mut out = String::new();
    out.push_str("# run log\n");

    out.push_str("\n## electricity totals by mode\n");
    let modes = &output.electricity_modes;
    out.push_str(&format!(
        "annual net = {} M\n",
        modes.annual_net_mbdt
    ));
    out.push_str(&format!(
        "discount mode (rate {}) total = {} M\n",
        modes.discount_rate, modes.discount_total_mbdt
    ));
    out.push_str(&format!(
        "cpi-scale mode total = {} M\n",
        modes.cpi_scale_total_mbdt
    ));
    if let Some(reference) = modes.reference_mbdt {
        out.push_str(&format!(
            "published cumulative = {} M; deviation: discount {:.2}%, cpi-scale {:.2}%\n",
            reference,
            modes.discount_deviation_pct.unwrap_or(f64::NAN),
            modes.cpi_scale_deviation_pct.unwrap_or(f64::NAN)
        ));
    }

    out.push_str("\n## reference comparisons\n");
    for comparison in &output.reference_comparisons {
        out.push_str(&format!(
            "{:?} {}: engine {} M vs published {} M ({:+.3}%)\n",
            comparison.verdict,
            comparison.name,
            comparison.engine_mbdt,
            comparison.reference_mbdt,
            comparison.deviation_pct
        ));
    }

    out.push_str("\n## warnings\n");
    if output.warnings.is_empty() {
        out.push_str("none\n");
    }
    for warning in &output.warnings {
        out.push_str(&format!("warning: {warning}\n"));
    }

    out.push_str("\n## imputed data points\n");
    for point in &output.imputed_points {
        out.push_str(&format!(
            "imputed: {} {} = {}\n",
            point.series, point.year, point.value
        ));
    }

    out.push_str("\n## imputation summary\n");
    for (series, count) in &output.imputed_counts {
        out.push_str(&format!(
            "{series}: {}/{} imputed ({:.1}%)\n",
            count.imputed,
            count.total,
            100.0 * count.imputed as f64 / count.total as f64
        ));
    }
    out
}

/// Evaluate the pipeline and write the artifact files into `out_dir` (which
/// overrides the configured output directory when given).
pub fn run_pipeline(config: &RunConfig, out_dir: Option<&Path>) -> Result<(PipelineOutput, Vec<PathBuf>)> {
    let output = evaluate(config)?;
    let dir = out_dir.unwrap_or(&config.output.directory).to_path_buf();
    fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;

    let json = serde_json::to_string_pretty(&output).map_err(|e| Error::Parse {
        path: REPORT_JSON.into(),
        reason: e.to_string(),
    })?;
    let files = vec![
        write_file(&dir, REPORT_JSON, &(json + "\n"))?,
        write_file(&dir, REPORT_CSV, &report_csv(&output))?,
        write_file(&dir, DEMAND_CURVE_CSV, &demand_curve_csv(&output))?,
        write_file(&dir, RUN_LOG, &run_log(&output))?,
    ];
    Ok((output, files))
}
