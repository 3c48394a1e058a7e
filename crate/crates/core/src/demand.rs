//! Zonal travel-cost demand: visitation rates, the hypothetical-fee demand
//! curve, and consumer surplus as the area under it.
//!
//! The second stage of the zonal travel-cost method raises travel cost by a
//! hypothetical entry fee, predicts each zone's visitation rate at the
//! higher cost, converts rates to visit counts through zone populations, and
//! integrates total visits over the fee until demand chokes off.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::money::{Currency, MoneyAmount};
use crate::regression::RegressionFit;
use crate::series::CompensatedSum;

/// Regressor names of the visit-generating function.
pub const TRAVEL_COST: &str = "travel_cost";
pub const MONTHLY_INCOME: &str = "monthly_income";
pub const ALONE: &str = "alone";
pub const DHAKA: &str = "dhaka";

/// Default population base for visitation rates (visits per million people).
pub const DEFAULT_RATE_PER: f64 = 1_000_000.0;

/// Hard cap on the choke-fee scan.
pub const DEFAULT_MAX_FEE_STEPS: usize = 1_000_000;

/// An origin zone with its potential-visitor population and mean covariates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub name: String,
    /// Potential visitors in the zone (persons).
    pub population: u64,
    /// Observed visits originating from the zone.
    pub visitors_observed: u64,
    pub mean_travel_cost: f64,
    pub mean_monthly_income: f64,
    /// Share of solo travellers in [0, 1].
    pub alone_share: f64,
    /// Whether the zone is the capital-region dummy.
    pub dhaka: bool,
}

impl Zone {
    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::InvalidSeries {
                label: self.name.clone(),
                reason: "zone population must be positive".into(),
            });
        }
        if !(0.0..=1.0).contains(&self.alone_share) {
            return Err(Error::InvalidSeries {
                label: self.name.clone(),
                reason: format!("alone share {} outside [0, 1]", self.alone_share),
            });
        }
        if !self.mean_travel_cost.is_finite() || !self.mean_monthly_income.is_finite() {
            return Err(Error::InvalidSeries {
                label: self.name.clone(),
                reason: "non-finite mean covariate".into(),
            });
        }
        Ok(())
    }

    /// Mean covariates in the shape expected by the visit-generating fit.
    pub fn covariates(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            (TRAVEL_COST.to_string(), self.mean_travel_cost),
            (MONTHLY_INCOME.to_string(), self.mean_monthly_income),
            (ALONE.to_string(), self.alone_share),
            (DHAKA.to_string(), if self.dhaka { 1.0 } else { 0.0 }),
        ])
    }
}

/// Observed visits scaled to a population base: `visitors / population * per`.
pub fn visitation_rate(zone: &Zone, per: f64) -> Result<f64> {
    if zone.population == 0 {
        return Err(Error::DivisionByZero {
            context: format!("visitation rate of zone '{}'", zone.name),
        });
    }
    Ok(zone.visitors_observed as f64 / zone.population as f64 * per)
}

/// Settings for the consumer-surplus integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurplusParams {
    /// Fee increment per scan step, in currency units.
    pub fee_step: f64,
    /// Population base the fitted rates refer to.
    pub rate_per: f64,
    pub currency: Currency,
    /// Price-base year of the resulting annual surplus.
    pub base_year: i32,
    pub max_steps: usize,
}

impl Default for SurplusParams {
    fn default() -> Self {
        Self {
            fee_step: 1.0,
            rate_per: DEFAULT_RATE_PER,
            currency: Currency::Bdt,
            base_year: 2018,
            max_steps: DEFAULT_MAX_FEE_STEPS,
        }
    }
}

/// Consumer surplus plus the scan bookkeeping behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsumerSurplus {
    /// Area under the total-visits-versus-fee curve, per year.
    pub annual: MoneyAmount,
    /// First scanned fee at which predicted visits reach zero.
    pub choke_fee: f64,
    /// Predicted total visits at zero fee.
    pub visits_at_zero_fee: f64,
    pub steps_used: usize,
}

/// Per-zone linear demand terms at fee 0; the model is linear in travel
/// cost, so a fee shifts each zone's rate by `slope * fee`.
struct ZoneDemand {
    base_rate: f64,
    scale: f64, // population / rate_per
}

fn zone_demands(
    fit: &RegressionFit,
    zones: &[Zone],
    params: &SurplusParams,
) -> Result<(Vec<ZoneDemand>, f64)> {
    let slope = fit.coefficient(TRAVEL_COST)?;
    if slope >= 0.0 {
        return Err(Error::UpwardSlopingDemand { value: slope });
    }
    if !(params.fee_step.is_finite() && params.fee_step > 0.0) {
        return Err(Error::InvalidStep {
            value: params.fee_step,
        });
    }
    let mut demands = Vec::with_capacity(zones.len());
    for zone in zones {
        zone.validate()?;
        demands.push(ZoneDemand {
            base_rate: fit.predict(&zone.covariates())?,
            scale: zone.population as f64 / params.rate_per,
        });
    }
    Ok((demands, slope))
}

fn total_visits(demands: &[ZoneDemand], slope: f64, fee: f64) -> f64 {
    demands
        .iter()
        .map(|z| z.scale * (z.base_rate + slope * fee).max(0.0))
        .sum()
}

/// Integrate total predicted visits over the hypothetical fee by the
/// trapezoidal rule, stopping at the choke fee.
pub fn consumer_surplus(
    fit: &RegressionFit,
    zones: &[Zone],
    params: &SurplusParams,
) -> Result<ConsumerSurplus> {
    let (demands, slope) = zone_demands(fit, zones, params)?;
    let visits_at_zero_fee = total_visits(&demands, slope, 0.0);

    let mut area = CompensatedSum::new();
    let mut previous = visits_at_zero_fee;
    let mut steps_used = 0usize;
    let mut choke_fee = 0.0;
    if previous > 0.0 {
        let mut found = false;
        for step in 1..=params.max_steps {
            let fee = step as f64 * params.fee_step;
            let current = total_visits(&demands, slope, fee);
            area.add(0.5 * (previous + current) * params.fee_step);
            if current == 0.0 {
                steps_used = step;
                choke_fee = fee;
                found = true;
                break;
            }
            previous = current;
        }
        if !found {
            return Err(Error::ChokeNotFound {
                max_steps: params.max_steps,
            });
        }
    }

    Ok(ConsumerSurplus {
        annual: MoneyAmount::new(area.total(), params.currency, params.base_year)?,
        choke_fee,
        visits_at_zero_fee,
        steps_used,
    })
}

/// One point of the fee/visits demand curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemandPoint {
    pub fee: f64,
    pub visits: f64,
}

/// Sample the demand curve on the scan grid, thinning to at most
/// `max_points` rows for plotting. The zero-fee and choke points are always
/// included.
pub fn demand_curve(
    fit: &RegressionFit,
    zones: &[Zone],
    params: &SurplusParams,
    max_points: usize,
) -> Result<Vec<DemandPoint>> {
    let surplus = consumer_surplus(fit, zones, params)?;
    let (demands, slope) = zone_demands(fit, zones, params)?;
    let steps = surplus.steps_used;
    let stride = if max_points > 1 {
        steps.div_ceil(max_points - 1).max(1)
    } else {
        steps.max(1)
    };
    let mut points = Vec::new();
    let mut step = 0usize;
    while step < steps {
        let fee = step as f64 * params.fee_step;
        points.push(DemandPoint {
            fee,
            visits: total_visits(&demands, slope, fee),
        });
        step += stride;
    }
    points.push(DemandPoint {
        fee: surplus.choke_fee,
        visits: 0.0,
    });
    Ok(points)
}
