//! Deterministic cost-benefit valuation engine for hydropower projects.
//!
//! The crate turns a small set of CSV inputs (a consumer price index,
//! fisheries production, a tourist survey, zone populations, and household
//! loss records) plus a TOML config into a net-benefit report:
//!
//! - [`series`] / [`cpi`]: annual series with provenance tags, CPI
//!   deflation, backcast extension, and anchored imputation;
//! - [`regression`] / [`demand`]: OLS with diagnostics and the zonal
//!   travel-cost consumer-surplus integration;
//! - [`benefits`] / [`costs`]: the electricity, fisheries, and tourism
//!   benefit NPVs and the construction, displacement, environmental, and
//!   lives-lost costs;
//! - [`aggregate`]: the net-benefit report and sensitivity sweeps;
//! - [`pipeline`]: the batch run that emits deterministic report artifacts.
//!
//! All operations are pure functions over immutable inputs; totals use
//! compensated summation in fixed order so repeated runs are byte-identical.

pub mod aggregate;
pub mod benefits;
pub mod config;
pub mod costs;
pub mod cpi;
pub mod demand;
pub mod error;
pub mod io;
pub mod money;
pub mod pipeline;
pub mod regression;
pub mod series;
pub mod summary;

pub use aggregate::{
    aggregate as aggregate_components, AggregationOptions, BandVerdict, NetBenefitReport,
    ParameterGrid, ReferenceComparison, SecurityCost, SweepRow,
};
pub use benefits::{
    electricity_annual_net, electricity_npv, fisheries_implied_price, fisheries_npv, tourism_npv,
    AccumulationMode, ComponentKind, ElectricityBackcast, ElectricityParams, FisheriesParams,
    ValuationComponent,
};
pub use config::RunConfig;
pub use costs::{
    construction_pv, displacement_cost, environmental_cost_cvm, household_loss_value,
    lives_lost_total, value_of_life, ConstructionCostSheet, HouseholdLossRecord, LifeLossParams,
    LossItem, LossUnit,
};
pub use cpi::{BackcastMethod, CpiIndexTable};
pub use demand::{consumer_surplus, demand_curve, visitation_rate, SurplusParams, Zone};
pub use error::{Error, Result};
pub use money::{Currency, MoneyAmount};
pub use regression::{ols_fit, ObservationSet, RegressionFit};
pub use series::{AnnualSeries, Provenance, YearRange};
pub use summary::{summarize_survey, SurveySummary};
