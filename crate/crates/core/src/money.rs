//! Monetary amounts tagged with a currency and a price-base year.
//!
//! An amount expressed at 1957 prices and one expressed at 2019 prices are
//! different quantities even in the same currency, so arithmetic is only
//! permitted between amounts that share both tags. Rebasing between years
//! goes through a CPI table (see [`crate::cpi`]); currency conversion is a
//! plain ratio with an explicit rate.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Earliest price-base year the engine accepts.
pub const MIN_BASE_YEAR: i32 = 1950;
/// Latest price-base year the engine accepts.
pub const MAX_BASE_YEAR: i32 = 2030;

/// Currencies that appear in the bundled data sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Currency {
    /// Bangladeshi taka.
    #[serde(rename = "BDT")]
    Bdt,
    /// US dollar.
    #[serde(rename = "USD")]
    Usd,
    /// Rupee (pre-1971 accounts).
    #[serde(rename = "Rs")]
    Rs,
}

impl Currency {
    pub fn code(self) -> &'static str {
        match self {
            Currency::Bdt => "BDT",
            Currency::Usd => "USD",
            Currency::Rs => "Rs",
        }
    }
}

impl fmt::Display for Currency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Currency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "BDT" => Ok(Currency::Bdt),
            "USD" => Ok(Currency::Usd),
            "RS" => Ok(Currency::Rs),
            _ => Err(Error::UnknownCurrency { code: s.to_string() }),
        }
    }
}

/// A monetary magnitude with its currency and the year whose price level it
/// is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoneyAmount {
    pub value: f64,
    pub currency: Currency,
    pub base_year: i32,
}

impl MoneyAmount {
    /// Build an amount, rejecting non-finite values and out-of-range base years.
    pub fn new(value: f64, currency: Currency, base_year: i32) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidAmount {
                reason: format!("value {value} is not finite"),
            });
        }
        if !(MIN_BASE_YEAR..=MAX_BASE_YEAR).contains(&base_year) {
            return Err(Error::InvalidAmount {
                reason: format!(
                    "base year {base_year} outside [{MIN_BASE_YEAR}, {MAX_BASE_YEAR}]"
                ),
            });
        }
        Ok(Self {
            value,
            currency,
            base_year,
        })
    }

    /// Shorthand for taka amounts.
    pub fn bdt(value: f64, base_year: i32) -> Result<Self> {
        Self::new(value, Currency::Bdt, base_year)
    }

    /// Value expressed in millions of currency units.
    pub fn in_millions(&self) -> f64 {
        self.value / 1.0e6
    }

    pub fn checked_add(&self, other: &MoneyAmount) -> Result<MoneyAmount> {
        self.compatible(other, "add")?;
        MoneyAmount::new(self.value + other.value, self.currency, self.base_year)
    }

    pub fn checked_sub(&self, other: &MoneyAmount) -> Result<MoneyAmount> {
        self.compatible(other, "subtract")?;
        MoneyAmount::new(self.value - other.value, self.currency, self.base_year)
    }

    /// Scale by a dimensionless factor (counts, shares).
    pub fn scale(&self, factor: f64) -> Result<MoneyAmount> {
        MoneyAmount::new(self.value * factor, self.currency, self.base_year)
    }

    /// Convert to another currency at an explicit rate (target units per one
    /// unit of `self.currency`). The base year is unchanged.
    pub fn convert_currency(&self, rate: f64, target: Currency) -> Result<MoneyAmount> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidAmount {
                reason: format!("conversion rate {rate} must be positive and finite"),
            });
        }
        MoneyAmount::new(self.value * rate, target, self.base_year)
    }

    fn compatible(&self, other: &MoneyAmount, op: &str) -> Result<()> {
        if self.currency != other.currency {
            return Err(Error::IncompatibleAmounts {
                left: self.to_string(),
                right: other.to_string(),
                reason: format!("cannot {op} across currencies"),
            });
        }
        if self.base_year != other.base_year {
            return Err(Error::IncompatibleAmounts {
                left: self.to_string(),
                right: other.to_string(),
                reason: format!("cannot {op} across price-base years"),
            });
        }
        Ok(())
    }
}

impl fmt::Display for MoneyAmount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} @{}", self.value, self.currency, self.base_year)
    }
}
