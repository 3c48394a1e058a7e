//! Ordinary least squares with the diagnostics needed by the travel-cost
//! demand stage.
//!
//! The solver works on the normal equations with a diagonally pivoted
//! Cholesky factorization. Sample sizes here are a few hundred observations
//! on at most a handful of regressors, so robustness and rank detection
//! matter more than speed.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::series::compensated_sum;

/// Pivot threshold relative to the largest diagonal of the normal matrix.
const PIVOT_TOLERANCE: f64 = 1e-10;

/// Residual degrees of freedom below which the normal-approximation p-values
/// are flagged as rough.
const NORMAL_APPROX_MIN_DF: usize = 30;

/// One named regressor column.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressorColumn {
    pub name: String,
    pub values: Vec<f64>,
    /// Dummy columns are constrained to {0, 1}.
    pub dummy: bool,
}

/// A response vector with named regressor columns.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    response: Vec<f64>,
    columns: Vec<RegressorColumn>,
}

impl ObservationSet {
    pub fn new(response: Vec<f64>) -> Result<Self> {
        if response.is_empty() {
            return Err(Error::InsufficientObservations { n: 0, k: 0 });
        }
        if let Some(bad) = response.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries {
                label: "response".into(),
                reason: format!("non-finite response value {bad}"),
            });
        }
        Ok(Self {
            response,
            columns: Vec::new(),
        })
    }

    pub fn add_regressor(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        self.push_column(name.into(), values, false)
    }

    /// Add a 0/1 indicator column.
    pub fn add_dummy(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        self.push_column(name.into(), values, true)
    }

    fn push_column(&mut self, name: String, values: Vec<f64>, dummy: bool) -> Result<()> {
        if values.len() != self.response.len() {
            return Err(Error::InvalidSeries {
                label: name,
                reason: format!(
                    "column length {} does not match {} observations",
                    values.len(),
                    self.response.len()
                ),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries {
                label: name,
                reason: format!("non-finite value {bad}"),
            });
        }
        if dummy && values.iter().any(|v| *v != 0.0 && *v != 1.0) {
            return Err(Error::InvalidSeries {
                label: name,
                reason: "dummy column may only contain 0 or 1".into(),
            });
        }
        if self.columns.iter().any(|c| c.name == name) {
            return Err(Error::InvalidSeries {
                label: name,
                reason: "duplicate regressor name".into(),
            });
        }
        self.columns.push(RegressorColumn {
            name,
            values,
            dummy,
        });
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn columns(&self) -> &[RegressorColumn] {
        &self.columns
    }
}

/// A fitted linear model with standard OLS diagnostics.
///
/// Fits produced by [`ols_fit`] satisfy `t = coefficient / standard error`;
/// fits loaded from external files are stored as published and are not
/// reconciled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub intercept: f64,
    pub intercept_se: f64,
    pub intercept_t: f64,
    pub intercept_p: f64,
    pub coefficients: BTreeMap<String, f64>,
    pub standard_errors: BTreeMap<String, f64>,
    pub t_stats: BTreeMap<String, f64>,
    pub p_values: BTreeMap<String, f64>,
    /// True when the residual degrees of freedom were too small for the
    /// normal approximation behind the p-values to be trustworthy.
    pub p_values_approximate: bool,
    pub r_squared: f64,
    pub f_stat: f64,
    pub residuals: Vec<f64>,
    pub n: usize,
    pub k: usize,
}

impl RegressionFit {
    /// Linear prediction `intercept + sum(beta_j * x_j)`. Negative results
    /// are returned as-is; clamping is the integration stage's business.
    pub fn predict(&self, covariates: &BTreeMap<String, f64>) -> Result<f64> {
        let mut acc = self.intercept;
        for (name, beta) in &self.coefficients {
            let x = covariates
                .get(name)
                .ok_or_else(|| Error::MissingRegressor { name: name.clone() })?;
            acc += beta * x;
        }
        Ok(acc)
    }

    pub fn coefficient(&self, name: &str) -> Result<f64> {
        self.coefficients
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingRegressor { name: name.into() })
    }
}

/// Fit the model by least squares and compute diagnostics.
#[allow(clippy::needless_range_loop)] // index loops mirror the matrix algebra
pub fn ols_fit(data: &ObservationSet) -> Result<RegressionFit> {
    let n = data.n();
    let k = data.k();
    let p = k + 1;
    if n <= p {
        return Err(Error::InsufficientObservations { n, k });
    }

    // Design matrix rows: intercept column followed by the regressors.
    let row = |i: usize, j: usize| -> f64 {
        if j == 0 {
            1.0
        } else {
            data.columns[j - 1].values[i]
        }
    };

    // Normal equations.
    let mut xtx = vec![vec![0.0f64; p]; p];
    let mut xty = vec![0.0f64; p];
    for i in 0..n {
        for a in 0..p {
            let ra = row(i, a);
            xty[a] += ra * data.response[i];
            for b in a..p {
                xtx[a][b] += ra * row(i, b);
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            xtx[a][b] = xtx[b][a];
        }
    }

    let chol = PivotedCholesky::factor(&xtx)?;
    let beta = chol.solve(&xty);
    let xtx_inv_diag: Vec<f64> = (0..p)
        .map(|j| {
            let mut e = vec![0.0; p];
            e[j] = 1.0;
            chol.solve(&e)[j]
        })
        .collect();

    let residuals: Vec<f64> = (0..n)
        .map(|i| {
            let fitted: f64 = (0..p).map(|j| beta[j] * row(i, j)).sum();
            data.response[i] - fitted
        })
        .collect();
    let ssr = compensated_sum(residuals.iter().map(|r| r * r));
    let mean_y = compensated_sum(data.response.iter().copied()) / n as f64;
    let sst = compensated_sum(data.response.iter().map(|y| (y - mean_y) * (y - mean_y)));

    let df = n - p;
    let sigma2 = ssr / df as f64;
    let r_squared = if sst > 0.0 {
        (1.0 - ssr / sst).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let f_stat = if k > 0 {
        (r_squared / k as f64) / ((1.0 - r_squared) / df as f64)
    } else {
        f64::NAN
    };

    let p_values_approximate = df < NORMAL_APPROX_MIN_DF;
    let standard_normal = Normal::new(0.0, 1.0).expect("unit normal");
    let two_sided_p = |t: f64| -> f64 {
        if t.is_finite() {
            2.0 * (1.0 - standard_normal.cdf(t.abs()))
        } else {
            0.0
        }
    };

    let se = |j: usize| (sigma2 * xtx_inv_diag[j]).sqrt();
    let t_of = |b: f64, s: f64| if s > 0.0 { b / s } else { f64::INFINITY };

    let mut coefficients = BTreeMap::new();
    let mut standard_errors = BTreeMap::new();
    let mut t_stats = BTreeMap::new();
    let mut p_values = BTreeMap::new();
    for (idx, column) in data.columns.iter().enumerate() {
        let b = beta[idx + 1];
        let s = se(idx + 1);
        let t = t_of(b, s);
        coefficients.insert(column.name.clone(), b);
        standard_errors.insert(column.name.clone(), s);
        t_stats.insert(column.name.clone(), t);
        p_values.insert(column.name.clone(), two_sided_p(t));
    }

    let intercept_se = se(0);
    let intercept_t = t_of(beta[0], intercept_se);
    Ok(RegressionFit {
        intercept: beta[0],
        intercept_se,
        intercept_t,
        intercept_p: two_sided_p(intercept_t),
        coefficients,
        standard_errors,
        t_stats,
        p_values,
        p_values_approximate,
        r_squared,
        f_stat,
        residuals,
        n,
        k,
    })
}

/// Cholesky factorization with diagonal pivoting: P A P' = L L'.
struct PivotedCholesky {
    lower: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

#[allow(clippy::needless_range_loop)]
impl PivotedCholesky {
    fn factor(matrix: &[Vec<f64>]) -> Result<Self> {
        let p = matrix.len();
        let mut a: Vec<Vec<f64>> = matrix.to_vec();
        let mut perm: Vec<usize> = (0..p).collect();
        let max_diag = (0..p).map(|i| a[i][i]).fold(0.0f64, f64::max);
        let threshold = PIVOT_TOLERANCE * max_diag;

        for j in 0..p {
            let (q, pivot) = (j..p)
                .map(|i| (i, a[i][i]))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("non-empty pivot range");
            if !(pivot.is_finite() && pivot > threshold && pivot > 0.0) {
                return Err(Error::SingularDesign { pivot });
            }
            if q != j {
                a.swap(j, q);
                for r in &mut a {
                    r.swap(j, q);
                }
                perm.swap(j, q);
            }
            let d = a[j][j].sqrt();
            a[j][j] = d;
            for i in (j + 1)..p {
                a[i][j] /= d;
            }
            for i in (j + 1)..p {
                let lij = a[i][j];
                for m in (j + 1)..p {
                    a[i][m] -= lij * a[m][j];
                }
            }
        }
        Ok(Self { lower: a, perm })
    }

    /// Solve A x = b given the factorization of A.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let p = self.perm.len();
        let mut z = vec![0.0f64; p];
        for i in 0..p {
            let mut acc = b[self.perm[i]];
            for j in 0..i {
                acc -= self.lower[i][j] * z[j];
            }
            z[i] = acc / self.lower[i][i];
        }
        let mut w = vec![0.0f64; p];
        for i in (0..p).rev() {
            let mut acc = z[i];
            for j in (i + 1)..p {
                acc -= self.lower[j][i] * w[j];
            }
            w[i] = acc / self.lower[i][i];
        }
        let mut x = vec![0.0f64; p];
        for i in 0..p {
            x[self.perm[i]] = w[i];
        }
        x
    }
}
