//! CSV and JSON readers/writers for the engine's file interfaces.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::costs::{HouseholdLossRecord, LifeExpectancyTable, LossItem, LossUnit};
use crate::cpi::CpiIndexTable;
use crate::demand::Zone;
use crate::error::{Error, Result};
use crate::regression::RegressionFit;
use crate::series::{compensated_sum, AnnualSeries, Provenance};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn parse_err(path: &Path, reason: impl std::fmt::Display) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        reason: reason.to_string(),
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(path, e))
}

// ---------------------------------------------------------------------------
// Annual series and CPI tables
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
struct SeriesRow {
    year: i32,
    value: f64,
    provenance: Option<String>,
}

/// Read a `year,value[,provenance]` file; the provenance column defaults to
/// `actual`.
pub fn read_series_csv(path: &Path, label: &str) -> Result<AnnualSeries> {
    let mut reader = csv_reader(path)?;
    let mut points = Vec::new();
    for row in reader.deserialize::<SeriesRow>() {
        let row = row.map_err(|e| parse_err(path, e))?;
        let provenance = match row.provenance.as_deref() {
            None | Some("") => Provenance::Actual,
            Some(s) => match s.to_ascii_lowercase().as_str() {
                "actual" => Provenance::Actual,
                "imputed" => Provenance::Imputed,
                other => {
                    return Err(parse_err(
                        path,
                        format!("unknown provenance '{other}' for year {}", row.year),
                    ))
                }
            },
        };
        points.push((row.year, row.value, provenance));
    }
    if points.is_empty() {
        return Err(parse_err(path, "file contains no data rows"));
    }
    AnnualSeries::from_points(label, points)
}

/// Write a series as `year,value,provenance`.
pub fn write_series_csv(path: &Path, series: &AnnualSeries) -> Result<()> {
    let mut out = String::from("year,value,provenance\n");
    for (year, value, provenance) in series.iter() {
        out.push_str(&format!("{year},{value},{provenance}\n"));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Read a CPI file (`year,value[,provenance]`) into an index table.
pub fn read_cpi_csv(path: &Path, base_year: i32) -> Result<CpiIndexTable> {
    let series = read_series_csv(path, "cpi")?;
    CpiIndexTable::new(series, base_year)
}

/// Write fisheries data back out as `fiscal_year,production_tons,revenue_mbdt`.
pub fn write_fisheries_csv(path: &Path, data: &FisheriesData) -> Result<()> {
    let mut out = String::from("fiscal_year,production_tons,revenue_mbdt\n");
    for (year, tons, _) in data.catch.iter() {
        let revenue = data
            .revenue
            .as_ref()
            .and_then(|r| r.get(year))
            .map(|v| v.to_string())
            .unwrap_or_default();
        out.push_str(&format!("{year}-{:02},{tons},{revenue}\n", (year + 1) % 100));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Write survey rows back out in the canonical column order.
pub fn write_survey_csv(path: &Path, respondents: &[SurveyRespondent]) -> Result<()> {
    let mut out = String::from("respondent_id,zone,travel_cost,monthly_income,alone,dhaka,visits\n");
    for r in respondents {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.respondent_id, r.zone, r.travel_cost, r.monthly_income, r.alone, r.dhaka, r.visits
        ));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Write `zone,population` rows in name order.
pub fn write_zone_populations(path: &Path, populations: &BTreeMap<String, u64>) -> Result<()> {
    let mut out = String::from("zone,population\n");
    for (zone, population) in populations {
        out.push_str(&format!("{zone},{population}\n"));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Write household loss records back out as flat item rows.
pub fn write_household_losses(path: &Path, records: &[HouseholdLossRecord]) -> Result<()> {
    let mut out = String::from("respondent_id,item,quantity,unit,unit_price\n");
    for record in records {
        for item in &record.items {
            let unit = match item.unit {
                LossUnit::Kg => "kg",
                LossUnit::Mound => "mound",
                LossUnit::Decimal => "decimal",
                LossUnit::Count => "count",
            };
            out.push_str(&format!(
                "{},{},{},{unit},{}\n",
                record.respondent_id, item.name, item.quantity, item.unit_price
            ));
        }
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

// ---------------------------------------------------------------------------
// Fisheries data
// ---------------------------------------------------------------------------

/// Catch and (partial) revenue observations keyed by fiscal start year.
#[derive(Debug, Clone, PartialEq)]
pub struct FisheriesData {
    /// Production in tons per year.
    pub catch: AnnualSeries,
    /// Revenue in millions per year, for the years it was reported.
    pub revenue: Option<AnnualSeries>,
}

#[derive(Debug, Deserialize)]
struct FisheriesRow {
    fiscal_year: String,
    production_tons: f64,
    revenue_mbdt: Option<f64>,
}

/// Map a fiscal-year label like `2006-07` to the calendar year it starts in.
pub fn fiscal_start_year(label: &str) -> Option<i32> {
    let head = label.trim().split('-').next()?;
    head.parse::<i32>().ok()
}

/// Read `fiscal_year,production_tons,revenue_mbdt` rows; revenue may be
/// blank where unknown.
pub fn read_fisheries_csv(path: &Path) -> Result<FisheriesData> {
    let mut reader = csv_reader(path)?;
    let mut catch_points = Vec::new();
    let mut revenue_points = Vec::new();
    for row in reader.deserialize::<FisheriesRow>() {
        let row = row.map_err(|e| parse_err(path, e))?;
        let year = fiscal_start_year(&row.fiscal_year).ok_or_else(|| {
            parse_err(path, format!("bad fiscal year label '{}'", row.fiscal_year))
        })?;
        catch_points.push((year, row.production_tons, Provenance::Actual));
        if let Some(revenue) = row.revenue_mbdt {
            revenue_points.push((year, revenue, Provenance::Actual));
        }
    }
    if catch_points.is_empty() {
        return Err(Error::MissingDataYear {
            year: None,
            context: Some(format!(
                "fisheries file {} contains no production rows",
                path.display()
            )),
        });
    }
    let catch = AnnualSeries::from_points("fish_catch_tons", catch_points)?;
    let revenue = if revenue_points.is_empty() {
        None
    } else {
        Some(AnnualSeries::from_points(
            "fish_revenue_millions",
            revenue_points,
        )?)
    };
    Ok(FisheriesData { catch, revenue })
}

// ---------------------------------------------------------------------------
// Tourist survey and zones
// ---------------------------------------------------------------------------

/// One tourist survey response.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct SurveyRespondent {
    pub respondent_id: String,
    pub zone: String,
    pub travel_cost: f64,
    pub monthly_income: f64,
    pub alone: u8,
    pub dhaka: u8,
    pub visits: u64,
}

/// Read `respondent_id,zone,travel_cost,monthly_income,alone,dhaka,visits`.
pub fn read_survey_csv(path: &Path) -> Result<Vec<SurveyRespondent>> {
    let mut reader = csv_reader(path)?;
    let mut rows = Vec::new();
    for row in reader.deserialize::<SurveyRespondent>() {
        let row = row.map_err(|e| parse_err(path, e))?;
        if row.alone > 1 || row.dhaka > 1 {
            return Err(parse_err(
                path,
                format!("respondent {}: dummy fields must be 0/1", row.respondent_id),
            ));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(path, "survey file contains no rows"));
    }
    Ok(rows)
}

/// Read `zone,population` rows.
pub fn read_zone_populations(path: &Path) -> Result<BTreeMap<String, u64>> {
    #[derive(Debug, Deserialize)]
    struct ZoneRow {
        zone: String,
        population: u64,
    }
    let mut reader = csv_reader(path)?;
    let mut map = BTreeMap::new();
    for row in reader.deserialize::<ZoneRow>() {
        let row = row.map_err(|e| parse_err(path, e))?;
        if map.insert(row.zone.clone(), row.population).is_some() {
            return Err(parse_err(path, format!("duplicate zone '{}'", row.zone)));
        }
    }
    if map.is_empty() {
        return Err(parse_err(path, "zone file contains no rows"));
    }
    Ok(map)
}

/// Aggregate survey responses into per-zone mean covariates and observed
/// visit counts, joined with the zone populations. Zones are emitted in
/// name order.
pub fn zones_from_survey(
    respondents: &[SurveyRespondent],
    populations: &BTreeMap<String, u64>,
) -> Result<Vec<Zone>> {
    let mut grouped: BTreeMap<&str, Vec<&SurveyRespondent>> = BTreeMap::new();
    for respondent in respondents {
        grouped.entry(&respondent.zone).or_default().push(respondent);
    }
    let mut zones = Vec::with_capacity(grouped.len());
    for (name, members) in grouped {
        let population = *populations.get(name).ok_or_else(|| Error::InvalidConfig {
            reason: format!("zone '{name}' appears in the survey but has no population row"),
        })?;
        let n = members.len() as f64;
        let mean = |f: &dyn Fn(&SurveyRespondent) -> f64| -> f64 {
            compensated_sum(members.iter().map(|m| f(m))) / n
        };
        let zone = Zone {
            name: name.to_string(),
            population,
            visitors_observed: members.iter().map(|m| m.visits).sum(),
            mean_travel_cost: mean(&|m| m.travel_cost),
            mean_monthly_income: mean(&|m| m.monthly_income),
            alone_share: mean(&|m| m.alone as f64),
            dhaka: mean(&|m| m.dhaka as f64) > 0.5,
        };
        zone.validate()?;
        zones.push(zone);
    }
    Ok(zones)
}

// ---------------------------------------------------------------------------
// Household losses
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
struct LossRow {
    respondent_id: String,
    item: String,
    quantity: f64,
    unit: String,
    unit_price: f64,
}

/// Read `respondent_id,item,quantity,unit,unit_price` rows grouped into one
/// record per respondent. Land lines (unit `decimal`) also feed the record's
/// land-lost figure.
pub fn read_household_losses(path: &Path, survey_year: i32) -> Result<Vec<HouseholdLossRecord>> {
    let mut reader = csv_reader(path)?;
    let mut grouped: BTreeMap<String, Vec<LossItem>> = BTreeMap::new();
    for row in reader.deserialize::<LossRow>() {
        let row = row.map_err(|e| parse_err(path, e))?;
        let unit = row.unit.parse::<LossUnit>().map_err(|_| Error::UnknownUnit {
            unit: row.unit.clone(),
            item: row.item.clone(),
        })?;
        grouped.entry(row.respondent_id).or_default().push(LossItem {
            name: row.item,
            quantity: row.quantity,
            unit,
            unit_price: row.unit_price,
        });
    }
    if grouped.is_empty() {
        return Err(parse_err(path, "household loss file contains no rows"));
    }
    let mut records = Vec::with_capacity(grouped.len());
    for (respondent_id, items) in grouped {
        let land_lost_decimal = items
            .iter()
            .filter(|i| i.unit == LossUnit::Decimal)
            .map(|i| i.quantity)
            .sum();
        let record = HouseholdLossRecord {
            respondent_id,
            items,
            land_lost_decimal,
            displaced: true,
            survey_year,
        };
        record.validate()?;
        records.push(record);
    }
    Ok(records)
}

/// Read `item,published_total` rows used to cross-check computed line totals.
pub fn read_published_totals(path: &Path) -> Result<BTreeMap<String, f64>> {
    #[derive(Debug, Deserialize)]
    struct TotalRow {
        item: String,
        published_total: f64,
    }
    let mut reader = csv_reader(path)?;
    let mut map = BTreeMap::new();
    for row in reader.deserialize::<TotalRow>() {
        let row = row.map_err(|e| parse_err(path, e))?;
        map.insert(row.item, row.published_total);
    }
    Ok(map)
}

/// Read `year,expectancy_years` rows on top of the bundled anchors.
pub fn read_life_expectancy(path: &Path) -> Result<LifeExpectancyTable> {
    #[derive(Debug, Deserialize)]
    struct ExpectancyRow {
        year: i32,
        expectancy_years: f64,
    }
    let mut reader = csv_reader(path)?;
    let mut table = LifeExpectancyTable::default();
    for row in reader.deserialize::<ExpectancyRow>() {
        let row = row.map_err(|e| parse_err(path, e))?;
        table.insert(row.year, row.expectancy_years);
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Regression fits
// ---------------------------------------------------------------------------

/// Read a fitted model from JSON.
pub fn read_fit_json(path: &Path) -> Result<RegressionFit> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| parse_err(path, e))
}

/// Write a fitted model as pretty JSON.
pub fn write_fit_json(path: &Path, fit: &RegressionFit) -> Result<()> {
    let text = serde_json::to_string_pretty(fit).map_err(|e| parse_err(path, e))?;
    fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}
