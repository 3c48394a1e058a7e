//! Net-benefit aggregation and parameter sensitivity sweeps.
//!
//! Benefits (electricity, fisheries, tourism) minus costs (displacement,
//! lives lost), with construction and environmental losses computed but only
//! folded in when explicitly enabled, and the security cost carried as an
//! explicit unavailable marker when no figure exists.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::benefits::{ComponentKind, ValuationComponent};
use crate::error::{Error, Result};
use crate::money::{Currency, MoneyAmount};
use crate::series::CompensatedSum;

/// Version tag written into every emitted report.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Security cost line: either a known figure or a disclosed gap. It is
/// never dropped from a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "component", rename_all = "lowercase")]
pub enum SecurityCost {
    Unavailable,
    Known(ValuationComponent),
}

/// Flags controlling which optional components enter the net figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AggregationOptions {
    pub include_construction: bool,
    pub include_environmental: bool,
}

/// The assembled net-benefit accounting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetBenefitReport {
    pub schema_version: u32,
    pub currency: Currency,
    pub base_year: i32,
    pub electricity: ValuationComponent,
    pub fisheries: ValuationComponent,
    pub tourism: ValuationComponent,
    pub displacement: ValuationComponent,
    pub lives_lost: ValuationComponent,
    /// Computed and reported, but excluded from the net unless
    /// `include_construction` is set.
    pub construction: Option<ValuationComponent>,
    /// Computed and reported, but excluded from the net unless
    /// `include_environmental` is set.
    pub environmental: Option<ValuationComponent>,
    pub security: SecurityCost,
    pub options: AggregationOptions,
    pub gross_benefit: MoneyAmount,
    pub gross_cost: MoneyAmount,
    pub net_benefit: MoneyAmount,
}

impl NetBenefitReport {
    /// Components in fixed reporting order.
    pub fn components(&self) -> Vec<&ValuationComponent> {
        let mut out = vec![
            &self.electricity,
            &self.fisheries,
            &self.tourism,
            &self.displacement,
            &self.lives_lost,
        ];
        if let Some(c) = &self.construction {
            out.push(c);
        }
        if let Some(c) = &self.environmental {
            out.push(c);
        }
        if let SecurityCost::Known(c) = &self.security {
            out.push(c);
        }
        out
    }
}

/// Combine valuation components into the net-benefit report.
///
/// Electricity, fisheries, tourism, displacement, and lives-lost components
/// are required; construction, environmental, and security are folded in
/// when supplied (and enabled, for the first two). The component order is
/// irrelevant: sums run in a fixed kind order.
pub fn aggregate(
    components: &[ValuationComponent],
    options: &AggregationOptions,
) -> Result<NetBenefitReport> {
    let mut by_kind: BTreeMap<ComponentKind, &ValuationComponent> = BTreeMap::new();
    for component in components {
        if by_kind.insert(component.kind, component).is_some() {
            return Err(Error::DuplicateComponent {
                kind: component.kind.to_string(),
            });
        }
    }

    let required = |kind: ComponentKind| -> Result<&ValuationComponent> {
        by_kind
            .get(&kind)
            .copied()
            .ok_or_else(|| Error::MissingComponent {
                kind: kind.to_string(),
            })
    };
    let electricity = required(ComponentKind::Electricity)?;
    let fisheries = required(ComponentKind::Fisheries)?;
    let tourism = required(ComponentKind::Tourism)?;
    let displacement = required(ComponentKind::Displacement)?;
    let lives_lost = required(ComponentKind::LivesLost)?;
    let construction = by_kind.get(&ComponentKind::Construction).copied();
    let environmental = by_kind.get(&ComponentKind::Environmental).copied();
    let security_component = by_kind.get(&ComponentKind::Security).copied();

    if options.include_construction && construction.is_none() {
        return Err(Error::MissingComponent {
            kind: ComponentKind::Construction.to_string(),
        });
    }
    if options.include_environmental && environmental.is_none() {
        return Err(Error::MissingComponent {
            kind: ComponentKind::Environmental.to_string(),
        });
    }

    let currency = electricity.npv.currency;
    let base_year = electricity.npv.base_year;
    for component in by_kind.values() {
        if component.npv.currency != currency {
            return Err(Error::IncompatibleComponents {
                reason: format!(
                    "component '{}' is in {} but the report is in {currency}",
                    component.kind, component.npv.currency
                ),
            });
        }
        if component.npv.base_year != base_year {
            return Err(Error::IncompatibleComponents {
                reason: format!(
                    "component '{}' is at base year {} but the report is at {base_year}",
                    component.kind, component.npv.base_year
                ),
            });
        }
    }

    let mut benefit = CompensatedSum::new();
    benefit.add(electricity.npv.value);
    benefit.add(fisheries.npv.value);
    benefit.add(tourism.npv.value);

    let mut cost = CompensatedSum::new();
    cost.add(displacement.npv.value);
    cost.add(lives_lost.npv.value);
    if options.include_construction {
        cost.add(construction.expect("checked above").npv.value);
    }
    if options.include_environmental {
        cost.add(environmental.expect("checked above").npv.value);
    }
    let security = match security_component {
        Some(component) => {
            cost.add(component.npv.value);
            SecurityCost::Known(component.clone())
        }
        None => SecurityCost::Unavailable,
    };

    let gross_benefit = MoneyAmount::new(benefit.total(), currency, base_year)?;
    let gross_cost = MoneyAmount::new(cost.total(), currency, base_year)?;
    let net_benefit = gross_benefit.checked_sub(&gross_cost)?;

    Ok(NetBenefitReport {
        schema_version: REPORT_SCHEMA_VERSION,
        currency,
        base_year,
        electricity: electricity.clone(),
        fisheries: fisheries.clone(),
        tourism: tourism.clone(),
        displacement: displacement.clone(),
        lives_lost: lives_lost.clone(),
        construction: construction.cloned(),
        environmental: environmental.cloned(),
        security,
        options: *options,
        gross_benefit,
        gross_cost,
        net_benefit,
    })
}

// ---------------------------------------------------------------------------
// Reference comparisons
// ---------------------------------------------------------------------------

/// Relative deviation below which a reference comparison counts as matched.
pub const REFERENCE_PASS_PCT: f64 = 0.1;
/// Relative deviation below which a mismatch is only flagged as a warning.
pub const REFERENCE_WARN_PCT: f64 = 5.0;

/// Band verdict for a published-total comparison. Published totals with an
/// ambiguous derivation are banded rather than asserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandVerdict {
    Pass,
    Warn,
    Fail,
}

/// Engine figure against a published reference figure, in millions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceComparison {
    pub name: String,
    pub engine_mbdt: f64,
    pub reference_mbdt: f64,
    pub deviation_mbdt: f64,
    pub deviation_pct: f64,
    pub verdict: BandVerdict,
}

pub fn compare_to_reference(
    name: impl Into<String>,
    engine_mbdt: f64,
    reference_mbdt: f64,
) -> ReferenceComparison {
    let deviation_mbdt = engine_mbdt - reference_mbdt;
    let deviation_pct = if reference_mbdt != 0.0 {
        deviation_mbdt / reference_mbdt * 100.0
    } else {
        f64::INFINITY
    };
    let verdict = if deviation_pct.abs() <= REFERENCE_PASS_PCT {
        BandVerdict::Pass
    } else if deviation_pct.abs() <= REFERENCE_WARN_PCT {
        BandVerdict::Warn
    } else {
        BandVerdict::Fail
    };
    ReferenceComparison {
        name: name.into(),
        engine_mbdt,
        reference_mbdt,
        deviation_mbdt,
        deviation_pct,
        verdict,
    }
}

// ---------------------------------------------------------------------------
// Sensitivity sweeps
// ---------------------------------------------------------------------------

/// Anything that can apply a `section.key = value` override to itself.
pub trait ConfigOverride: Sized {
    fn with_override(&self, key: &str, value: &str) -> Result<Self>;
}

/// One swept parameter and its candidate values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub key: String,
    pub values: Vec<String>,
}

/// A cartesian grid over config keys.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ParameterGrid {
    pub axes: Vec<GridAxis>,
}

impl ParameterGrid {
    pub fn point_count(&self) -> usize {
        if self.axes.is_empty() {
            0
        } else {
            self.axes.iter().map(|a| a.values.len()).product()
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub index: usize,
    pub settings: Vec<(String, String)>,
    pub net_benefit_mbdt: f64,
    pub components_mbdt: BTreeMap<String, f64>,
}

/// Evaluate the full pipeline once per grid point, in row-major grid order
/// (the last axis varies fastest).
pub fn sensitivity_sweep<C, F>(
    base: &C,
    grid: &ParameterGrid,
    evaluate: F,
) -> Result<Vec<SweepRow>>
where
    C: ConfigOverride,
    F: Fn(&C) -> Result<NetBenefitReport>,
{
    let total = grid.point_count();
    let mut rows = Vec::with_capacity(total);
    for index in 0..total {
        let mut remainder = index;
        let mut settings = Vec::with_capacity(grid.axes.len());
        for axis in grid.axes.iter().rev() {
            let pick = remainder % axis.values.len();
            remainder /= axis.values.len();
            settings.push((axis.key.clone(), axis.values[pick].clone()));
        }
        settings.reverse();

        let mut config = None;
        for (key, value) in &settings {
            let next = match &config {
                None => base.with_override(key, value)?,
                Some(c) => C::with_override(c, key, value)?,
            };
            config = Some(next);
        }
        let report = match &config {
            Some(c) => evaluate(c)?,
            None => evaluate(base)?,
        };

        let mut components_mbdt = BTreeMap::new();
        for component in report.components() {
            components_mbdt.insert(component.kind.to_string(), component.npv.in_millions());
        }
        rows.push(SweepRow {
            index,
            settings,
            net_benefit_mbdt: report.net_benefit.in_millions(),
            components_mbdt,
        });
    }
    Ok(rows)
}
