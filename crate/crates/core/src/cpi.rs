//! Consumer-price-index table: deflation between years, backcast extension,
//! and CPI-anchored imputation of annual series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::money::MoneyAmount;
use crate::series::{AnnualSeries, Provenance, YearRange};

/// Reference base year used by the bundled index data.
pub const DEFAULT_CPI_BASE_YEAR: i32 = 2010;

/// How many of the earliest known growth intervals feed the backcast trend.
pub const DEFAULT_BACKCAST_WINDOW: usize = 5;

const BASE_VALUE_TOLERANCE: f64 = 1e-9;

/// Method for extending an index table backward past its first known year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackcastMethod {
    /// Fit the compound annual growth rate over the earliest `window`
    /// year-over-year intervals and extrapolate it backward.
    GeometricTrend { window: usize },
}

impl Default for BackcastMethod {
    fn default() -> Self {
        BackcastMethod::GeometricTrend {
            window: DEFAULT_BACKCAST_WINDOW,
        }
    }
}

/// A consumer price index over a contiguous year range, normalized so the
/// base year (when present) reads 100.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpiIndexTable {
    series: AnnualSeries,
    base_year: i32,
}

impl CpiIndexTable {
    pub fn new(series: AnnualSeries, base_year: i32) -> Result<Self> {
        for (year, value, _) in series.iter() {
            if value <= 0.0 {
                return Err(Error::InvalidIndex { year, value });
            }
        }
        if let Some(base_value) = series.get(base_year) {
            if (base_value - 100.0).abs() > BASE_VALUE_TOLERANCE {
                return Err(Error::InvalidSeries {
                    label: series.label().to_string(),
                    reason: format!(
                        "index at base year {base_year} is {base_value}, expected 100"
                    ),
                });
            }
        }
        Ok(Self { series, base_year })
    }

    /// Two-anchor table filled by geometric interpolation, for deflator
    /// ratios that are pinned as a published pair rather than observed year
    /// by year. Anchor years are tagged `Actual`, interior years `Imputed`,
    /// and `value(b) / value(a)` reproduces `ratio` exactly.
    pub fn from_ratio_pair(label: &str, year_a: i32, year_b: i32, ratio: f64) -> Result<Self> {
        if year_a >= year_b {
            return Err(Error::InvalidSeries {
                label: label.to_string(),
                reason: format!("anchor years must be ordered, got {year_a} >= {year_b}"),
            });
        }
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::InvalidSeries {
                label: label.to_string(),
                reason: format!("ratio {ratio} must be positive and finite"),
            });
        }
        let span = (year_b - year_a) as f64;
        let points = (year_a..=year_b).map(|year| {
            let t = (year - year_a) as f64 / span;
            let value = 100.0 * ratio.powf(t);
            let prov = if year == year_a || year == year_b {
                Provenance::Actual
            } else {
                Provenance::Imputed
            };
            (year, value, prov)
        });
        // The pair defines a relative deflator, so the first anchor serves
        // as the 100-valued base year.
        let series = AnnualSeries::from_points(label, points)?;
        CpiIndexTable::new(series, year_a)
    }

    pub fn series(&self) -> &AnnualSeries {
        &self.series
    }

    pub fn base_year(&self) -> i32 {
        self.base_year
    }

    pub fn first_year(&self) -> i32 {
        self.series.first_year()
    }

    pub fn last_year(&self) -> i32 {
        self.series.last_year()
    }

    pub fn value(&self, year: i32) -> Result<f64> {
        self.series
            .get(year)
            .ok_or(Error::MissingIndexYear { year })
    }

    /// Price-level ratio `index(numerator_year) / index(denominator_year)`.
    pub fn ratio(&self, numerator_year: i32, denominator_year: i32) -> Result<f64> {
        Ok(self.value(numerator_year)? / self.value(denominator_year)?)
    }

    /// Re-express an amount at the price level of `target_year`.
    pub fn deflate(&self, amount: &MoneyAmount, target_year: i32) -> Result<MoneyAmount> {
        let ratio = self.ratio(target_year, amount.base_year)?;
        MoneyAmount::new(amount.value * ratio, amount.currency, target_year)
    }

    /// Extend the table backward to `earliest_year`. Known points are kept
    /// bit for bit; synthesized points are tagged `Imputed`.
    pub fn backcast(&self, earliest_year: i32, method: BackcastMethod) -> Result<CpiIndexTable> {
        if earliest_year >= self.first_year() {
            return Ok(self.clone());
        }
        let BackcastMethod::GeometricTrend { window } = method;
        let known_intervals = self.series.len().saturating_sub(1);
        if window == 0 {
            return Err(Error::InsufficientData {
                reason: "backcast window must be at least 1".into(),
            });
        }
        if window > known_intervals {
            return Err(Error::InsufficientData {
                reason: format!(
                    "backcast window {window} exceeds the {known_intervals} known interval(s)"
                ),
            });
        }

        let first = self.first_year();
        let start_value = self.value(first)?;
        let end_value = self.value(first + window as i32)?;
        // Compound annual growth over the earliest `window` intervals.
        let growth = (end_value / start_value).powf(1.0 / window as f64) - 1.0;

        let mut points: Vec<(i32, f64, Provenance)> = self.series.iter().collect();
        let mut value = start_value;
        for year in (earliest_year..first).rev() {
            value /= 1.0 + growth;
            points.push((year, value, Provenance::Imputed));
        }
        let series = AnnualSeries::from_points(self.series.label(), points)?;
        CpiIndexTable::new(series, self.base_year)
    }

    /// Generate a series by scaling a single anchored observation across a
    /// year range with this index: `out[t] = anchor_value * cpi[t] /
    /// cpi[anchor_year]`. The anchor year (when inside the range) keeps the
    /// anchor value exactly and is tagged `Actual`; every other point is
    /// `Imputed`.
    pub fn impute_series(
        &self,
        label: &str,
        anchor_year: i32,
        anchor_value: f64,
        range: YearRange,
    ) -> Result<AnnualSeries> {
        let anchor_index = self.value(anchor_year)?;
        let mut points = Vec::with_capacity(range.len());
        for year in range.years() {
            if year == anchor_year {
                points.push((year, anchor_value, Provenance::Actual));
            } else {
                let value = anchor_value * self.value(year)? / anchor_index;
                points.push((year, value, Provenance::Imputed));
            }
        }
        AnnualSeries::from_points(label, points)
    }
}
