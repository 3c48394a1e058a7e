//! Cost-side valuations: construction present value, land-loss and
//! displacement cost, contingent-valuation aggregation of household losses,
//! and the opportunity cost of lives lost.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;

use crate::cpi::CpiIndexTable;
use crate::error::{Error, Result};
use crate::money::{Currency, MoneyAmount};
use crate::series::compensated_sum;

/// Mass of one maund ("mound") in kilograms, for unit conversions.
pub const MAUND_KG: f64 = 37.3242;

const COMPENSATION_TOLERANCE: f64 = 1e-6;

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// The nominal construction bill: establishment plus land compensation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionCostSheet {
    /// Lump-sum establishment cost (rupee accounts).
    pub establishment: MoneyAmount,
    /// Land compensation paid out, `compensation_rate * acres`.
    pub compensation: MoneyAmount,
    /// Compensation rate per acre.
    pub compensation_rate: f64,
    /// Acres acquired.
    pub acres: f64,
}

impl ConstructionCostSheet {
    pub fn new(
        establishment: MoneyAmount,
        compensation: MoneyAmount,
        compensation_rate: f64,
        acres: f64,
    ) -> Result<Self> {
        let expected = compensation_rate * acres;
        if expected > 0.0 && ((compensation.value - expected) / expected).abs() > COMPENSATION_TOLERANCE
        {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "compensation {} does not equal rate {} x acres {} = {}",
                    compensation.value, compensation_rate, acres, expected
                ),
            });
        }
        Ok(Self {
            establishment,
            compensation,
            compensation_rate,
            acres,
        })
    }

    /// Build the sheet from the rate and acreage, deriving the compensation
    /// amount.
    pub fn from_rate(
        establishment: MoneyAmount,
        compensation_rate: f64,
        acres: f64,
        compensation_currency: Currency,
    ) -> Result<Self> {
        let compensation = MoneyAmount::new(
            compensation_rate * acres,
            compensation_currency,
            establishment.base_year,
        )?;
        Self::new(establishment, compensation, compensation_rate, acres)
    }

    /// Nominal total in the establishment's base year, converting the rupee
    /// establishment account at the given parity rate.
    pub fn nominal_total(&self, rs_to_target_rate: f64, target: Currency) -> Result<MoneyAmount> {
        let establishment = self
            .establishment
            .convert_currency(rs_to_target_rate, target)?;
        if self.compensation.currency != target {
            return Err(Error::IncompatibleAmounts {
                left: self.compensation.to_string(),
                right: format!("target currency {target}"),
                reason: "compensation currency differs from the reporting currency".into(),
            });
        }
        establishment.checked_add(&self.compensation)
    }
}

/// Present value of the construction bill at `target_year` prices.
pub fn construction_pv(
    sheet: &ConstructionCostSheet,
    target_year: i32,
    cpi: &CpiIndexTable,
    rs_to_bdt_rate: f64,
) -> Result<MoneyAmount> {
    let nominal = sheet.nominal_total(rs_to_bdt_rate, Currency::Bdt)?;
    cpi.deflate(&nominal, target_year)
}

// ---------------------------------------------------------------------------
// Household losses (contingent valuation)
// ---------------------------------------------------------------------------

/// Units used by the household loss survey.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossUnit {
    Kg,
    /// Maund, a traditional mass unit of about 37.32 kg.
    Mound,
    /// One hundredth of an acre.
    Decimal,
    Count,
}

impl LossUnit {
    /// Mass in kilograms for mass-bearing units.
    pub fn mass_kg(self, quantity: f64) -> Option<f64> {
        match self {
            LossUnit::Kg => Some(quantity),
            LossUnit::Mound => Some(quantity * MAUND_KG),
            LossUnit::Decimal | LossUnit::Count => None,
        }
    }
}

impl FromStr for LossUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kg" => Ok(LossUnit::Kg),
            "mound" | "maund" => Ok(LossUnit::Mound),
            "decimal" => Ok(LossUnit::Decimal),
            "count" => Ok(LossUnit::Count),
            other => Err(Error::UnknownUnit {
                unit: other.to_string(),
                item: String::new(),
            }),
        }
    }
}

/// One surveyed loss line: an annual quantity and its unit price.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossItem {
    pub name: String,
    pub quantity: f64,
    pub unit: LossUnit,
    pub unit_price: f64,
}

impl LossItem {
    pub fn value(&self) -> f64 {
        self.quantity * self.unit_price
    }
}

/// The itemized losses reported by one household.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HouseholdLossRecord {
    pub respondent_id: String,
    pub items: Vec<LossItem>,
    /// Total land lost, in decimals of an acre.
    pub land_lost_decimal: f64,
    pub displaced: bool,
    /// Year whose prices the unit prices are quoted in.
    pub survey_year: i32,
}

impl HouseholdLossRecord {
    pub fn validate(&self) -> Result<()> {
        for item in &self.items {
            if item.quantity < 0.0 || !item.quantity.is_finite() {
                return Err(Error::InvalidAmount {
                    reason: format!("item '{}' has invalid quantity {}", item.name, item.quantity),
                });
            }
            if item.unit_price < 0.0 || !item.unit_price.is_finite() {
                return Err(Error::InvalidAmount {
                    reason: format!(
                        "item '{}' has invalid unit price {}",
                        item.name, item.unit_price
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Sum of `quantity * unit_price` over the record's lines, in nominal
/// survey-year currency. Lines are summed in a fixed sorted order so the
/// result is independent of line ordering.
pub fn household_loss_value(record: &HouseholdLossRecord) -> Result<MoneyAmount> {
    record.validate()?;
    let mut lines: Vec<&LossItem> = record.items.iter().collect();
    lines.sort_by(|a, b| {
        (&a.name, a.quantity, a.unit_price)
            .partial_cmp(&(&b.name, b.quantity, b.unit_price))
            .expect("validated finite")
    });
    let total = compensated_sum(lines.iter().map(|item| item.value()));
    MoneyAmount::bdt(total, record.survey_year)
}

/// A computed line total that disagrees with the total printed in the
/// source tabulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineDiscrepancy {
    pub item: String,
    pub computed: f64,
    pub published: f64,
}

/// Cross-check each line's `quantity * unit_price` against published totals.
/// Items without a published figure are skipped.
pub fn reconcile_line_totals(
    record: &HouseholdLossRecord,
    published: &BTreeMap<String, f64>,
) -> Vec<LineDiscrepancy> {
    let mut discrepancies = Vec::new();
    for item in &record.items {
        if let Some(&expected) = published.get(&item.name) {
            let computed = item.value();
            if (computed - expected).abs() > 0.5 {
                discrepancies.push(LineDiscrepancy {
                    item: item.name.clone(),
                    computed,
                    published: expected,
                });
            }
        }
    }
    discrepancies.sort_by(|a, b| a.item.cmp(&b.item));
    discrepancies
}

/// Aggregate household losses, optionally scaling the per-record mean to a
/// population of affected families.
pub fn environmental_cost_cvm(
    records: &[HouseholdLossRecord],
    scale_to_population: Option<u64>,
) -> Result<MoneyAmount> {
    if records.is_empty() {
        return Err(Error::EmptyFrame);
    }
    let mut total = household_loss_value(&records[0])?;
    for record in &records[1..] {
        total = total.checked_add(&household_loss_value(record)?)?;
    }
    match scale_to_population {
        None => Ok(total),
        Some(population) => total.scale(population as f64 / records.len() as f64),
    }
}

// ---------------------------------------------------------------------------
// Displacement and lives lost
// ---------------------------------------------------------------------------

/// Total displacement cost: per-family loss (already at the reporting price
/// base) times the number of displaced families.
pub fn displacement_cost(per_family_loss: &MoneyAmount, families: u64) -> Result<MoneyAmount> {
    per_family_loss.scale(families as f64)
}

/// Inputs for the forgone-income value of one lost life.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifeLossParams {
    /// Age at death, years.
    pub age_at_death: f64,
    /// Working life expectancy, years.
    pub life_expectancy: f64,
    /// Annual income, currency units per year.
    pub annual_income: f64,
    pub death_count: u64,
    pub currency: Currency,
    /// Price-base year of the income figure.
    pub base_year: i32,
}

impl LifeLossParams {
    pub fn validate(&self) -> Result<()> {
        if self.age_at_death < 0.0 || !self.age_at_death.is_finite() {
            return Err(Error::InvalidConfig {
                reason: format!("age at death {} must be non-negative", self.age_at_death),
            });
        }
        if self.annual_income < 0.0 || !self.annual_income.is_finite() {
            return Err(Error::InvalidConfig {
                reason: format!("annual income {} must be non-negative", self.annual_income),
            });
        }
        Ok(())
    }
}

/// Opportunity cost of one death: `max(T - X, 0) * W`, the income forgone
/// over the remaining working years.
pub fn value_of_life(params: &LifeLossParams) -> Result<MoneyAmount> {
    params.validate()?;
    let remaining_years = (params.life_expectancy - params.age_at_death).max(0.0);
    MoneyAmount::new(
        remaining_years * params.annual_income,
        params.currency,
        params.base_year,
    )
}

/// Total value of lives lost: per-life value times the death count.
pub fn lives_lost_total(per_life: &MoneyAmount, deaths: u64) -> Result<MoneyAmount> {
    per_life.scale(deaths as f64)
}

/// Year -> life expectancy lookup, seeded with the bundled survey anchors
/// and extensible from CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifeExpectancyTable {
    entries: BTreeMap<i32, f64>,
}

impl Default for LifeExpectancyTable {
    fn default() -> Self {
        Self {
            entries: BTreeMap::from([(1987, 56.0), (1994, 61.0)]),
        }
    }
}

impl LifeExpectancyTable {
    pub fn new(entries: BTreeMap<i32, f64>) -> Self {
        Self { entries }
    }

    pub fn insert(&mut self, year: i32, expectancy: f64) {
        self.entries.insert(year, expectancy);
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.entries.get(&year).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.entries.iter().map(|(y, e)| (*y, *e))
    }
}
