//! Annual time series with per-point provenance.
//!
//! Every time-indexed quantity in the engine (price indices, catch volumes,
//! benefit streams) is an [`AnnualSeries`]: a contiguous run of years where
//! each point is tagged as observed (`Actual`) or synthesized (`Imputed`).
//! The tags drive the imputation bookkeeping that ends up in run logs and
//! component reports.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Whether a data point was observed or synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Actual,
    Imputed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Actual => f.write_str("actual"),
            Provenance::Imputed => f.write_str("imputed"),
        }
    }
}

/// A labeled map year -> value over a contiguous year range, with one
/// provenance tag per year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnualSeries {
    label: String,
    first_year: i32,
    values: Vec<f64>,
    provenance: Vec<Provenance>,
}

impl AnnualSeries {
    /// Build a series from (year, value, provenance) points. The points may
    /// arrive in any order but must cover a contiguous year range with no
    /// duplicates.
    pub fn from_points(
        label: impl Into<String>,
        points: impl IntoIterator<Item = (i32, f64, Provenance)>,
    ) -> Result<Self> {
        let label = label.into();
        let mut pts: Vec<(i32, f64, Provenance)> = points.into_iter().collect();
        if pts.is_empty() {
            return Err(Error::InvalidSeries {
                label,
                reason: "series must contain at least one point".into(),
            });
        }
        pts.sort_by_key(|(year, _, _)| *year);
        for pair in pts.windows(2) {
            match pair[1].0 - pair[0].0 {
                0 => {
                    return Err(Error::InvalidSeries {
                        label,
                        reason: format!("duplicate year {}", pair[0].0),
                    })
                }
                1 => {}
                _ => {
                    return Err(Error::InvalidSeries {
                        label,
                        reason: format!("gap between years {} and {}", pair[0].0, pair[1].0),
                    })
                }
            }
        }
        for (year, value, _) in &pts {
            if !value.is_finite() {
                return Err(Error::InvalidSeries {
                    label,
                    reason: format!("non-finite value {value} at year {year}"),
                });
            }
        }
        let first_year = pts[0].0;
        Ok(Self {
            label,
            first_year,
            values: pts.iter().map(|(_, v, _)| *v).collect(),
            provenance: pts.iter().map(|(_, _, p)| *p).collect(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn first_year(&self) -> i32 {
        self.first_year
    }

    pub fn last_year(&self) -> i32 {
        self.first_year + self.values.len() as i32 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn contains_year(&self, year: i32) -> bool {
        year >= self.first_year && year <= self.last_year()
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.index_of(year).map(|i| self.values[i])
    }

    pub fn provenance(&self, year: i32) -> Option<Provenance> {
        self.index_of(year).map(|i| self.provenance[i])
    }

    /// Iterate points in ascending year order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, f64, Provenance)> + '_ {
        self.values
            .iter()
            .zip(&self.provenance)
            .enumerate()
            .map(move |(i, (v, p))| (self.first_year + i as i32, *v, *p))
    }

    pub fn imputed_count(&self) -> usize {
        self.provenance
            .iter()
            .filter(|p| **p == Provenance::Imputed)
            .count()
    }

    /// Share of points tagged `Imputed`, in [0, 1].
    pub fn imputed_fraction(&self) -> f64 {
        if self.values.is_empty() {
            0.0
        } else {
            self.imputed_count() as f64 / self.values.len() as f64
        }
    }

    /// Sum of all points in ascending year order with compensated summation,
    /// so the total does not depend on insertion order or platform.
    pub fn sum(&self) -> f64 {
        compensated_sum(self.values.iter().copied())
    }

    /// Sum together with the imputation bookkeeping for the points that
    /// contributed.
    pub fn sum_report(&self) -> SumReport {
        SumReport {
            total: self.sum(),
            point_count: self.values.len(),
            imputed_count: self.imputed_count(),
        }
    }

    fn index_of(&self, year: i32) -> Option<usize> {
        if self.contains_year(year) {
            Some((year - self.first_year) as usize)
        } else {
            None
        }
    }
}

/// Total of a series plus how many of the summed points were imputed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumReport {
    pub total: f64,
    pub point_count: usize,
    pub imputed_count: usize,
}

/// Inclusive range of calendar years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearRange {
    pub start: i32,
    pub end: i32,
}

impl YearRange {
    pub fn new(start: i32, end: i32) -> Result<Self> {
        if start > end {
            return Err(Error::EmptyRange);
        }
        Ok(Self { start, end })
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees start <= end
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.start..=self.end
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }
}

impl fmt::Display for YearRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start, self.end)
    }
}

/// Neumaier-compensated summation over a fixed iteration order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

/// Streaming Neumaier accumulator for callers that sum incrementally.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}
