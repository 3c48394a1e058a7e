//! Benefit-side valuations: electricity generation, fisheries production,
//! and tourism consumer surplus, each reduced to one labeled NPV component.

use serde::{Deserialize, Serialize};

use crate::cpi::CpiIndexTable;
use crate::error::{Error, Result};
use crate::money::{Currency, MoneyAmount};
use crate::series::{AnnualSeries, CompensatedSum, Provenance, YearRange};

/// Which line of the net-benefit accounting a component feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Electricity,
    Fisheries,
    Tourism,
    Displacement,
    LivesLost,
    Construction,
    Environmental,
    Security,
}

impl ComponentKind {
    pub fn is_benefit(self) -> bool {
        matches!(
            self,
            ComponentKind::Electricity | ComponentKind::Fisheries | ComponentKind::Tourism
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            ComponentKind::Electricity => "electricity",
            ComponentKind::Fisheries => "fisheries",
            ComponentKind::Tourism => "tourism",
            ComponentKind::Displacement => "displacement",
            ComponentKind::LivesLost => "lives_lost",
            ComponentKind::Construction => "construction",
            ComponentKind::Environmental => "environmental",
            ComponentKind::Security => "security",
        }
    }
}

impl std::fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One labeled NPV line item feeding the net-benefit aggregation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValuationComponent {
    pub kind: ComponentKind,
    pub label: String,
    pub npv: MoneyAmount,
    pub year_range: Option<YearRange>,
    /// Free-text note on how the figure was produced.
    pub method: String,
    /// Share of underlying data points that were imputed, in [0, 1].
    pub imputed_fraction: f64,
}

impl ValuationComponent {
    pub fn new(
        kind: ComponentKind,
        label: impl Into<String>,
        npv: MoneyAmount,
        year_range: Option<YearRange>,
        method: impl Into<String>,
        imputed_fraction: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&imputed_fraction) {
            return Err(Error::InvalidAmount {
                reason: format!("imputed fraction {imputed_fraction} outside [0, 1]"),
            });
        }
        Ok(Self {
            kind,
            label: label.into(),
            npv,
            year_range,
            method: method.into(),
            imputed_fraction,
        })
    }

    /// Re-declare the price-base year without rescaling the magnitude, the
    /// way the source accounting mixes bases when adding cumulative sums.
    /// The original base is preserved in the method note.
    pub fn retag_base_year(mut self, base_year: i32) -> Result<Self> {
        if self.npv.base_year != base_year {
            self.method = format!(
                "{}; retagged from base {} to base {} without rescaling",
                self.method, self.npv.base_year, base_year
            );
            self.npv = MoneyAmount::new(self.npv.value, self.npv.currency, base_year)?;
        }
        Ok(self)
    }
}

// ---------------------------------------------------------------------------
// Electricity
// ---------------------------------------------------------------------------

/// How the single-year electricity net benefit is spread over earlier years.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElectricityBackcast {
    /// Scale the anchor-year net benefit by the CPI ratio of each year.
    CpiScale,
    /// Discount the anchor-year net benefit at a fixed rate per year of
    /// distance from the anchor.
    Discount { rate: f64 },
}

/// Inputs for the electricity valuation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectricityParams {
    pub avg_capacity_mw: f64,
    pub hours_per_day: f64,
    pub days_per_year: f64,
    /// Sale price, currency units per kWh.
    pub unit_price: f64,
    /// Generation cost, currency units per kWh.
    pub unit_cost: f64,
    pub year_range: YearRange,
    pub backcast_mode: ElectricityBackcast,
    pub currency: Currency,
}

impl Default for ElectricityParams {
    fn default() -> Self {
        Self {
            avg_capacity_mw: 180.0,
            hours_per_day: 24.0,
            days_per_year: 365.0,
            unit_price: 7.78,
            unit_cost: 4.20,
            year_range: YearRange {
                start: 1962,
                end: 2020,
            },
            backcast_mode: ElectricityBackcast::Discount { rate: 0.07 },
            currency: Currency::Bdt,
        }
    }
}

impl ElectricityParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.avg_capacity_mw.is_finite() && self.avg_capacity_mw > 0.0) {
            return Err(Error::InvalidConfig {
                reason: format!("capacity {} must be positive", self.avg_capacity_mw),
            });
        }
        for (name, v) in [
            ("unit price", self.unit_price),
            ("unit cost", self.unit_cost),
            ("hours per day", self.hours_per_day),
            ("days per year", self.days_per_year),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidConfig {
                    reason: format!("{name} {v} must be non-negative"),
                });
            }
        }
        if let ElectricityBackcast::Discount { rate } = self.backcast_mode {
            if !(rate.is_finite() && rate >= 0.0) {
                return Err(Error::InvalidConfig {
                    reason: format!("discount rate {rate} must be non-negative"),
                });
            }
        }
        Ok(())
    }
}

/// Electricity component plus its synthesized net-benefit stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectricityValuation {
    pub component: ValuationComponent,
    pub net_benefit_series: AnnualSeries,
}

/// Net benefit of one anchor year of generation:
/// `capacity_kw * hours * days * (price - cost)`.
pub fn electricity_annual_net(params: &ElectricityParams) -> Result<MoneyAmount> {
    params.validate()?;
    let energy_kwh = params.avg_capacity_mw * 1000.0 * params.hours_per_day * params.days_per_year;
    let net = energy_kwh * (params.unit_price - params.unit_cost);
    MoneyAmount::new(net, params.currency, params.year_range.end)
}

/// Spread the anchor-year net benefit across the year range and accumulate.
/// Every year of the stream is synthesized from the anchor, so the whole
/// series is tagged imputed.
pub fn electricity_npv(
    params: &ElectricityParams,
    cpi: &CpiIndexTable,
) -> Result<ElectricityValuation> {
    let annual = electricity_annual_net(params)?;
    let anchor_year = params.year_range.end;

    let mut points = Vec::with_capacity(params.year_range.len());
    for year in params.year_range.years() {
        let factor = match params.backcast_mode {
            ElectricityBackcast::CpiScale => cpi.ratio(year, anchor_year)?,
            ElectricityBackcast::Discount { rate } => {
                1.0 / (1.0 + rate).powi(anchor_year - year)
            }
        };
        points.push((year, annual.value * factor, Provenance::Imputed));
    }
    let series = AnnualSeries::from_points("electricity_net_benefit", points)?;

    let method = match params.backcast_mode {
        ElectricityBackcast::CpiScale => format!(
            "annual net {:.2} scaled over {} by CPI ratio to {}",
            annual.value, params.year_range, anchor_year
        ),
        ElectricityBackcast::Discount { rate } => format!(
            "annual net {:.2} discounted over {} at {} per year from {}",
            annual.value, params.year_range, rate, anchor_year
        ),
    };
    let component = ValuationComponent::new(
        ComponentKind::Electricity,
        "Electricity generation",
        MoneyAmount::new(series.sum(), params.currency, anchor_year)?,
        Some(params.year_range),
        method,
        series.imputed_fraction(),
    )?;
    Ok(ElectricityValuation {
        component,
        net_benefit_series: series,
    })
}

// ---------------------------------------------------------------------------
// Fisheries
// ---------------------------------------------------------------------------

/// Direction of the (1+r)^(base-t) factor applied to each year's net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AccumulationMode {
    /// Carry past net benefits forward to the base year (multiply).
    CompoundToBase,
    /// Discount past net benefits to the base year (divide).
    DiscountToBase,
}

/// Inputs for the fisheries valuation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisheriesParams {
    /// Observed yearly catch in tons.
    pub catch_series: AnnualSeries,
    /// Observed yearly revenue in millions of currency units, where known.
    pub revenue_series: Option<AnnualSeries>,
    /// Fallback average sale price, currency units per kg, anchored at the
    /// base year; used only when no revenue data is available.
    pub avg_price: f64,
    /// Catch cost, currency units per kg, anchored at the base year.
    pub unit_cost: f64,
    pub discount_rate: f64,
    pub base_year: i32,
    pub start_year: i32,
    pub accumulation_mode: AccumulationMode,
    pub currency: Currency,
}

impl FisheriesParams {
    /// Non-fatal oddities in the parameter set.
    pub fn warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.unit_cost >= self.avg_price {
            warnings.push(format!(
                "unit cost {} is not below the average price {}; net margins may be negative",
                self.unit_cost, self.avg_price
            ));
        }
        warnings
    }

    pub fn validate(&self) -> Result<()> {
        for (year, value, _) in self.catch_series.iter() {
            if value < 0.0 {
                return Err(Error::InvalidSeries {
                    label: self.catch_series.label().to_string(),
                    reason: format!("negative catch {value} in year {year}"),
                });
            }
        }
        if self.start_year > self.base_year {
            return Err(Error::EmptyRange);
        }
        if !(self.discount_rate.is_finite() && self.discount_rate >= 0.0) {
            return Err(Error::InvalidConfig {
                reason: format!("discount rate {} must be non-negative", self.discount_rate),
            });
        }
        Ok(())
    }
}

/// Fisheries component plus the yearly series behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisheriesValuation {
    pub component: ValuationComponent,
    /// Catch in tons over the full valuation range.
    pub catch_series: AnnualSeries,
    /// Price per kg over the full valuation range.
    pub price_series: AnnualSeries,
    /// Cost per kg over the full valuation range.
    pub cost_series: AnnualSeries,
    /// Net benefit per year before accumulation.
    pub net_series: AnnualSeries,
    pub warnings: Vec<String>,
}

/// Average sale price implied by a production/revenue pair:
/// `revenue_millions * 1e6 / (production_tons * 1000)` per kg.
pub fn fisheries_implied_price(production_tons: f64, revenue_millions: f64) -> Result<f64> {
    if production_tons == 0.0 {
        return Err(Error::DivisionByZero {
            context: "implied fish price with zero production".into(),
        });
    }
    if !(production_tons.is_finite() && production_tons > 0.0) {
        return Err(Error::InvalidAmount {
            reason: format!("production {production_tons} tons must be positive"),
        });
    }
    Ok(revenue_millions * 1.0e6 / (production_tons * 1000.0))
}

/// Extend a series across `[start, end]` by CPI-scaling from its first and
/// last observed points.
fn extend_by_cpi(
    series: &AnnualSeries,
    start: i32,
    end: i32,
    cpi: &CpiIndexTable,
) -> Result<AnnualSeries> {
    let first = series.first_year();
    let last = series.last_year();
    let mut points: Vec<(i32, f64, Provenance)> = series
        .iter()
        .filter(|(y, _, _)| *y >= start && *y <= end)
        .collect();
    let first_value = series.get(first).expect("first year present");
    let last_value = series.get(last).expect("last year present");
    for year in start..first.min(end + 1) {
        points.push((
            year,
            first_value * cpi.ratio(year, first)?,
            Provenance::Imputed,
        ));
    }
    for year in (last + 1).max(start)..=end {
        points.push((
            year,
            last_value * cpi.ratio(year, last)?,
            Provenance::Imputed,
        ));
    }
    AnnualSeries::from_points(series.label(), points)
}

/// Value the fisheries stream: per-year revenue minus cost, accumulated to
/// the base year.
pub fn fisheries_npv(params: &FisheriesParams, cpi: &CpiIndexTable) -> Result<FisheriesValuation> {
    params.validate()?;
    let start = params.start_year;
    let base = params.base_year;

    let catch = extend_by_cpi(&params.catch_series, start, base, cpi)?;

    // Price per kg: implied by revenue where observed, CPI-scaled from the
    // latest observed price otherwise, falling back to the configured
    // average price anchored at the base year.
    let observed_prices: Vec<(i32, f64)> = match &params.revenue_series {
        Some(revenue) => {
            let mut prices = Vec::new();
            for (year, revenue_m, prov) in revenue.iter() {
                if prov == Provenance::Actual {
                    let tons = catch.get(year).ok_or(Error::MissingDataYear {
                        year: Some(year),
                        context: Some("catch series does not cover revenue year".into()),
                    })?;
                    prices.push((year, fisheries_implied_price(tons, revenue_m)?));
                }
            }
            prices
        }
        None => Vec::new(),
    };
    let mut price_points: Vec<(i32, f64, Provenance)> = Vec::new();
    if observed_prices.is_empty() {
        for year in start..=base {
            let prov = if year == base {
                Provenance::Actual
            } else {
                Provenance::Imputed
            };
            price_points.push((year, params.avg_price * cpi.ratio(year, base)?, prov));
        }
    } else {
        let (anchor_year, anchor_price) = *observed_prices.last().expect("non-empty");
        let (first_obs_year, first_obs_price) = *observed_prices.first().expect("non-empty");
        for year in start..=base {
            if let Some(&(_, p)) = observed_prices.iter().find(|(y, _)| *y == year) {
                price_points.push((year, p, Provenance::Actual));
            } else if year > anchor_year {
                price_points.push((
                    year,
                    anchor_price * cpi.ratio(year, anchor_year)?,
                    Provenance::Imputed,
                ));
            } else {
                price_points.push((
                    year,
                    first_obs_price * cpi.ratio(year, first_obs_year)?,
                    Provenance::Imputed,
                ));
            }
        }
    }
    let price = AnnualSeries::from_points("fish_price_per_kg", price_points)?;

    // Cost per kg, anchored at the base year.
    let mut cost_points = Vec::new();
    for year in start..=base {
        let prov = if year == base {
            Provenance::Actual
        } else {
            Provenance::Imputed
        };
        cost_points.push((year, params.unit_cost * cpi.ratio(year, base)?, prov));
    }
    let cost = AnnualSeries::from_points("fish_cost_per_kg", cost_points)?;

    // Net per year, then accumulate to the base year.
    let mut net_points = Vec::new();
    let mut accumulated = CompensatedSum::new();
    for year in start..=base {
        let tons = catch.get(year).ok_or(Error::MissingDataYear {
            year: Some(year),
            context: Some("catch series".into()),
        })?;
        let kg = tons * 1000.0;
        let net = kg * (price.get(year).expect("built above") - cost.get(year).expect("built above"));
        let prov = if catch.provenance(year) == Some(Provenance::Actual)
            && price.provenance(year) == Some(Provenance::Actual)
            && cost.provenance(year) == Some(Provenance::Actual)
        {
            Provenance::Actual
        } else {
            Provenance::Imputed
        };
        net_points.push((year, net, prov));
        let distance = base - year;
        let factor = match params.accumulation_mode {
            AccumulationMode::CompoundToBase => (1.0 + params.discount_rate).powi(distance),
            AccumulationMode::DiscountToBase => {
                1.0 / (1.0 + params.discount_rate).powi(distance)
            }
        };
        accumulated.add(net * factor);
    }
    let net_series = AnnualSeries::from_points("fisheries_net_benefit", net_points)?;

    let mode_note = match params.accumulation_mode {
        AccumulationMode::CompoundToBase => "compounded forward to",
        AccumulationMode::DiscountToBase => "discounted to",
    };
    let component = ValuationComponent::new(
        ComponentKind::Fisheries,
        "Fisheries production",
        MoneyAmount::new(accumulated.total(), params.currency, base)?,
        Some(YearRange::new(start, base)?),
        format!(
            "catch x (price - cost) per year, {mode_note} {} at rate {}; catch {}/{} imputed",
            base,
            params.discount_rate,
            catch.imputed_count(),
            catch.len()
        ),
        catch.imputed_fraction(),
    )?;
    Ok(FisheriesValuation {
        component,
        catch_series: catch,
        price_series: price,
        cost_series: cost,
        net_series,
        warnings: params.warnings(),
    })
}

// ---------------------------------------------------------------------------
// Tourism
// ---------------------------------------------------------------------------

/// Tourism component plus the CPI-scaled yearly stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TourismValuation {
    pub component: ValuationComponent,
    pub series: AnnualSeries,
}

/// Scale one year's consumer surplus across the range with the CPI and sum.
pub fn tourism_npv(
    annual_surplus: &MoneyAmount,
    year_range: YearRange,
    cpi: &CpiIndexTable,
) -> Result<TourismValuation> {
    let series = cpi.impute_series(
        "tourism_value",
        annual_surplus.base_year,
        annual_surplus.value,
        year_range,
    )?;
    let component = ValuationComponent::new(
        ComponentKind::Tourism,
        "Tourism consumer surplus",
        MoneyAmount::new(series.sum(), annual_surplus.currency, annual_surplus.base_year)?,
        Some(year_range),
        format!(
            "annual surplus {:.2} at {} scaled over {} by CPI and summed",
            annual_surplus.value, annual_surplus.base_year, year_range
        ),
        series.imputed_fraction(),
    )?;
    Ok(TourismValuation { component, series })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Provenance::Actual;

    fn flat_cpi(start: i32, end: i32) -> CpiIndexTable {
        let series = AnnualSeries::from_points(
            "cpi",
            (start..=end).map(|y| (y, 100.0, Actual)),
        )
        .unwrap();
        CpiIndexTable::new(series, 2010).unwrap()
    }

    #[test]
    fn electricity_annual_net_from_default_inputs() {
        // 180,000 kW * 24 h * 365 d * (7.78 - 4.20) = 5,644,944,000.
        let net = electricity_annual_net(&ElectricityParams::default()).unwrap();
        assert!((net.value - 5_644_944_000.0).abs() < 1.0);
        assert_eq!(net.base_year, 2020);
    }

    #[test]
    fn electricity_net_zero_margin() {
        let params = ElectricityParams {
            unit_cost: 7.78,
            ..ElectricityParams::default()
        };
        assert_eq!(electricity_annual_net(&params).unwrap().value, 0.0);
    }

    #[test]
    fn electricity_net_scales_with_capacity() {
        let base = electricity_annual_net(&ElectricityParams::default()).unwrap();
        let peak = electricity_annual_net(&ElectricityParams {
            avg_capacity_mw: 230.0,
            ..ElectricityParams::default()
        })
        .unwrap();
        let expected = 230.0 / 180.0 * base.value;
        assert!((peak.value - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn electricity_npv_single_year_equals_annual_net() {
        let params = ElectricityParams {
            year_range: YearRange::new(2020, 2020).unwrap(),
            ..ElectricityParams::default()
        };
        let cpi = flat_cpi(2019, 2020);
        let valuation = electricity_npv(&params, &cpi).unwrap();
        let annual = electricity_annual_net(&params).unwrap();
        assert!((valuation.component.npv.value - annual.value).abs() < 1e-6);
    }

    #[test]
    fn electricity_npv_two_year_discount_oracle() {
        // Two terms of the geometric series: annual * (1 + 1/1.07).
        let params = ElectricityParams {
            year_range: YearRange::new(2019, 2020).unwrap(),
            backcast_mode: ElectricityBackcast::Discount { rate: 0.07 },
            ..ElectricityParams::default()
        };
        let cpi = flat_cpi(2019, 2020);
        let valuation = electricity_npv(&params, &cpi).unwrap();
        let annual = electricity_annual_net(&params).unwrap().value;
        let expected = annual * (1.0 + 1.0 / 1.07);
        assert!((valuation.component.npv.value - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn electricity_npv_linear_in_margin() {
        let cpi = flat_cpi(2018, 2020);
        let narrow = ElectricityParams {
            unit_price: 8.0,
            unit_cost: 4.0,
            year_range: YearRange::new(2018, 2020).unwrap(),
            ..ElectricityParams::default()
        };
        let wide = ElectricityParams {
            unit_price: 12.0,
            ..narrow.clone()
        };
        let a = electricity_npv(&narrow, &cpi).unwrap().component.npv.value;
        let b = electricity_npv(&wide, &cpi).unwrap().component.npv.value;
        assert_eq!(b, 2.0 * a);
    }

    #[test]
    fn electricity_is_fully_imputed() {
        let cpi = flat_cpi(2018, 2020);
        let params = ElectricityParams {
            year_range: YearRange::new(2018, 2020).unwrap(),
            ..ElectricityParams::default()
        };
        let valuation = electricity_npv(&params, &cpi).unwrap();
        assert_eq!(valuation.component.imputed_fraction, 1.0);
    }

    #[test]
    fn implied_price_published_rows() {
        let p = fisheries_implied_price(5389.0, 288.87).unwrap();
        assert!((p - 53.60364).abs() < 0.01);
        let p = fisheries_implied_price(10140.78, 1242.5).unwrap();
        assert!((p - 122.5251).abs() < 0.01);
    }

    #[test]
    fn implied_price_identity_and_zero_production() {
        let p = fisheries_implied_price(123.0, 0.123).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert!(matches!(
            fisheries_implied_price(0.0, 10.0),
            Err(Error::DivisionByZero { .. })
        ));
    }

    fn single_year_params(catch_tons: f64, price: f64, cost: f64) -> FisheriesParams {
        let catch = AnnualSeries::from_points("catch", [(2019, catch_tons, Actual)]).unwrap();
        let revenue = AnnualSeries::from_points(
            "revenue",
            [(2019, catch_tons * 1000.0 * price / 1.0e6, Actual)],
        )
        .unwrap();
        FisheriesParams {
            catch_series: catch,
            revenue_series: Some(revenue),
            avg_price: price,
            unit_cost: cost,
            discount_rate: 0.10,
            base_year: 2019,
            start_year: 2019,
            accumulation_mode: AccumulationMode::CompoundToBase,
            currency: Currency::Bdt,
        }
    }

    #[test]
    fn fisheries_single_year_direct_arithmetic() {
        // 1000 t at 75/kg against 15/kg costs: (75-15) * 1e6 = 60 M.
        let params = single_year_params(1000.0, 75.0, 15.0);
        let cpi = flat_cpi(2018, 2020);
        let valuation = fisheries_npv(&params, &cpi).unwrap();
        assert!((valuation.component.npv.in_millions() - 60.0).abs() < 1e-9);
    }

    #[test]
    fn fisheries_two_equal_years_compound() {
        // Equal nets N in the base year and the year before compound to
        // N * (1 + 1.10).
        let catch = AnnualSeries::from_points(
            "catch",
            [(2018, 1000.0, Actual), (2019, 1000.0, Actual)],
        )
        .unwrap();
        let revenue = AnnualSeries::from_points(
            "revenue",
            [(2018, 75.0, Actual), (2019, 75.0, Actual)],
        )
        .unwrap();
        let params = FisheriesParams {
            catch_series: catch,
            revenue_series: Some(revenue),
            avg_price: 75.0,
            unit_cost: 15.0,
            discount_rate: 0.10,
            base_year: 2019,
            start_year: 2018,
            accumulation_mode: AccumulationMode::CompoundToBase,
            currency: Currency::Bdt,
        };
        let cpi = flat_cpi(2017, 2020);
        let valuation = fisheries_npv(&params, &cpi).unwrap();
        // Flat CPI keeps cost at 15/kg both years; price implied at 75/kg.
        let yearly_net = 1000.0 * 1000.0 * (75.0 - 15.0);
        let expected = yearly_net * (1.0 + 1.10);
        assert!((valuation.component.npv.value - expected).abs() / expected < 1e-12);
    }

    #[test]
    fn fisheries_zero_rate_equals_plain_sum() {
        let catch = AnnualSeries::from_points(
            "catch",
            [(2017, 800.0, Actual), (2018, 900.0, Actual), (2019, 1000.0, Actual)],
        )
        .unwrap();
        let revenue = AnnualSeries::from_points(
            "revenue",
            [(2017, 60.0, Actual), (2018, 70.0, Actual), (2019, 75.0, Actual)],
        )
        .unwrap();
        let params = FisheriesParams {
            catch_series: catch.clone(),
            revenue_series: Some(revenue),
            avg_price: 75.0,
            unit_cost: 15.0,
            discount_rate: 0.0,
            base_year: 2019,
            start_year: 2017,
            accumulation_mode: AccumulationMode::CompoundToBase,
            currency: Currency::Bdt,
        };
        let cpi = flat_cpi(2016, 2020);
        let valuation = fisheries_npv(&params, &cpi).unwrap();
        assert_eq!(valuation.component.npv.value, valuation.net_series.sum());
    }

    #[test]
    fn fisheries_cost_at_or_above_price_warns() {
        let params = FisheriesParams {
            unit_cost: 130.0,
            avg_price: 126.23,
            ..single_year_params(1000.0, 75.0, 15.0)
        };
        assert!(!params.warnings().is_empty());
    }

    #[test]
    fn tourism_flat_cpi_multiplies_out() {
        // 289.71 M per year over ten flat-CPI years = 2,897.1 M.
        let cpi = flat_cpi(2011, 2020);
        let annual = MoneyAmount::bdt(289.71e6, 2020).unwrap();
        let valuation =
            tourism_npv(&annual, YearRange::new(2011, 2020).unwrap(), &cpi).unwrap();
        let expected = 2_897.1e6;
        assert!((valuation.component.npv.value - expected).abs() / expected < 1e-9);
    }

    #[test]
    fn tourism_single_year_is_identity() {
        let cpi = flat_cpi(2019, 2020);
        let annual = MoneyAmount::bdt(289.71e6, 2020).unwrap();
        let valuation =
            tourism_npv(&annual, YearRange::new(2020, 2020).unwrap(), &cpi).unwrap();
        assert_eq!(valuation.component.npv.value.to_bits(), annual.value.to_bits());
        assert_eq!(valuation.component.imputed_fraction, 0.0);
    }

    #[test]
    fn component_rejects_bad_imputed_fraction() {
        let npv = MoneyAmount::bdt(1.0, 2020).unwrap();
        assert!(ValuationComponent::new(
            ComponentKind::Tourism,
            "t",
            npv,
            None,
            "m",
            1.5
        )
        .is_err());
    }

    #[test]
    fn retagging_keeps_value_and_notes_the_original_base() {
        let npv = MoneyAmount::bdt(5.0e9, 2019).unwrap();
        let component = ValuationComponent::new(
            ComponentKind::Fisheries,
            "f",
            npv,
            None,
            "note",
            0.0,
        )
        .unwrap();
        let retagged = component.retag_base_year(2020).unwrap();
        assert_eq!(retagged.npv.base_year, 2020);
        assert_eq!(retagged.npv.value, 5.0e9);
        assert!(retagged.method.contains("retagged from base 2019"));
    }
}
