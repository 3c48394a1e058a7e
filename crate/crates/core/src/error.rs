//! Error type shared across the valuation engine.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the valuation engine.
#[derive(Debug, Error)]
pub enum Error {
    // --- monetary amounts ---
    #[error("invalid money amount: {reason}")]
    InvalidAmount { reason: String },
    #[error("incompatible amounts: {left} vs {right} ({reason})")]
    IncompatibleAmounts {
        left: String,
        right: String,
        reason: String,
    },
    #[error("unknown currency code '{code}'")]
    UnknownCurrency { code: String },

    // --- annual series and CPI ---
    #[error("invalid series '{label}': {reason}")]
    InvalidSeries { label: String, reason: String },
    #[error("year {year} missing from index table")]
    MissingIndexYear { year: i32 },
    #[error("index value for year {year} must be strictly positive, got {value}")]
    InvalidIndex { year: i32, value: f64 },
    #[error("insufficient data: {reason}")]
    InsufficientData { reason: String },
    #[error("empty year range")]
    EmptyRange,
    #[error("missing data{}{}", year.map(|y| format!(" for year {y}")).unwrap_or_default(), context.as_ref().map(|c| format!(": {c}")).unwrap_or_default())]
    MissingDataYear {
        year: Option<i32>,
        context: Option<String>,
    },

    // --- regression and travel-cost demand ---
    #[error("design matrix is rank deficient (pivot {pivot:.3e} below tolerance)")]
    SingularDesign { pivot: f64 },
    #[error("insufficient observations: n = {n} with {k} regressors")]
    InsufficientObservations { n: usize, k: usize },
    #[error("division by zero in {context}")]
    DivisionByZero { context: String },
    #[error("fit has no regressor named '{name}'")]
    MissingRegressor { name: String },
    #[error("travel-cost coefficient {value} is not negative; demand curve does not slope down")]
    UpwardSlopingDemand { value: f64 },
    #[error("fee step must be positive, got {value}")]
    InvalidStep { value: f64 },
    #[error("choke fee not found within {max_steps} steps")]
    ChokeNotFound { max_steps: usize },

    // --- cost records ---
    #[error("unknown unit '{unit}' for item '{item}'")]
    UnknownUnit { unit: String, item: String },
    #[error("cannot scale an empty record set")]
    EmptyFrame,

    // --- aggregation ---
    #[error("incompatible components: {reason}")]
    IncompatibleComponents { reason: String },
    #[error("missing required component '{kind}'")]
    MissingComponent { kind: String },
    #[error("duplicate component '{kind}'")]
    DuplicateComponent { kind: String },
    #[error("unknown sweep parameter '{key}'")]
    UnknownParameter { key: String },

    // --- survey summaries ---
    #[error("cannot summarize an empty column{}", name.as_ref().map(|n| format!(" '{n}'")).unwrap_or_default())]
    EmptyColumn { name: Option<String> },

    // --- configuration and I/O ---
    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },
    #[error("failed to parse {path}: {reason}")]
    Parse { path: String, reason: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
