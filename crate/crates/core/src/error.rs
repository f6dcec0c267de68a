use thiserror::Error;

/// Errors produced by the propulsion models and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown preset `{0}` (valid presets: low, high)")]
    UnknownPreset(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("numerical failure in {module}: {detail}")]
    Numerical { module: &'static str, detail: String },

    #[error("point lies inside the body (r = {r:e} m < a = {a:e} m)")]
    Domain { r: f64, a: f64 },

    #[error("infeasible design: {0}")]
    Infeasible(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("config error at line {line}: {reason}")]
    Config { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn numerical(module: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            module,
            detail: detail.into(),
        }
    }

    /// True for failures of a numerical method as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical { .. } | Error::Geometry(_))
    }
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be non-negative and finite, got {value}")))
    }
}
