use thiserror::Error;

/// Errors raised while building, evaluating or analysing recurrences.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SreError {
    /// A state (or probe box) left the constraint set.
    #[error("domain error: coordinate {coordinate} = {value} outside [{lower}, {upper}]{}", fmt_time(*.time))]
    Domain {
        coordinate: usize,
        value: f64,
        lower: f64,
        upper: f64,
        time: Option<i64>,
    },
    /// Dimension mismatch between a state and a space or map.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    /// NaN or infinite arithmetic result.
    #[error("numeric error{}: {detail}", fmt_time(*.time))]
    Numeric { time: Option<i64>, detail: String },
    /// Invalid parameters or settings.
    #[error("configuration error: {0}")]
    Config(String),
    /// A negative value where a nonnegative sample was required.
    #[error("domain error: sample {index} is negative ({value})")]
    NegativeSample { index: u64, value: f64 },
}

fn fmt_time(time: Option<i64>) -> String {
    match time {
        Some(t) => format!(" at t = {t}"),
        None => String::new(),
    }
}

impl SreError {
    pub fn config(msg: impl Into<String>) -> Self {
        SreError::Config(msg.into())
    }

    /// Attaches a time index to domain and numeric errors that lack one.
    pub fn at_time(self, t: i64) -> Self {
        match self {
            SreError::Domain {
                coordinate,
                value,
                lower,
                upper,
                time: None,
            } => SreError::Domain {
                coordinate,
                value,
                lower,
                upper,
                time: Some(t),
            },
            SreError::Numeric { time: None, detail } => SreError::Numeric {
                time: Some(t),
                detail,
            },
            other => other,
        }
    }
}

pub type Result<T, E = SreError> = std::result::Result<T, E>;
