//! Descriptive statistics for survey columns.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::compensated_sum;

/// Mean, spread, and range of one survey variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveySummary {
    pub variable: String,
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n-1 denominator); 0 with
    /// `sd_undefined = true` when only one observation exists.
    pub sd: f64,
    pub sd_undefined: bool,
    pub min: f64,
    pub max: f64,
}

/// Summarize a column of values.
pub fn summarize_survey(variable: impl Into<String>, values: &[f64]) -> Result<SurveySummary> {
    let variable = variable.into();
    if values.is_empty() {
        return Err(Error::EmptyColumn {
            name: Some(variable),
        });
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidSeries {
            label: variable,
            reason: format!("non-finite value {bad}"),
        });
    }
    let n = values.len();
    let mean = compensated_sum(values.iter().copied()) / n as f64;
    let (sd, sd_undefined) = if n > 1 {
        let ss = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean)));
        ((ss / (n - 1) as f64).sqrt(), false)
    } else {
        (0.0, true)
    };
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SurveySummary {
        variable,
        n,
        mean,
        sd,
        sd_undefined,
        min,
        max,
    })
}
