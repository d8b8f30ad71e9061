use thiserror::Error;

/// Ground-truth simulation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("simulation diverged: `{field}` became non-finite")]
    Divergence { field: &'static str },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VmlError {
    #[error("attitude {angle:.4} rad is at or beyond the tan() singularity")]
    InvalidAttitude { angle: f64 },
    #[error("regression needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("times and residuals differ in length ({times} vs {residuals})")]
    LengthMismatch { times: usize, residuals: usize },
    #[error("normal matrix is singular (determinant {det:e})")]
    DegenerateFit { det: f64 },
    #[error("window holds {size} entries, {required} needed to fit")]
    NoFit { size: usize, required: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EkfError {
    #[error("attitude {angle:.4} rad is at or beyond the tan() singularity")]
    InvalidAttitude { angle: f64 },
    #[error("innovation covariance is not invertible")]
    SingularInnovation,
    #[error("measurement captured at {t_capture:.4} s is older than the history (oldest {oldest:.4} s)")]
    MeasurementTooOld { t_capture: f64, oldest: f64 },
    #[error("non-finite measurement")]
    NonFiniteMeasurement,
}

/// Invalid configuration. The only error class the CLI exits non-zero on.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid parameter `{name}`: {reason}")]
    Invalid { name: &'static str, reason: String },
    #[error("unknown {what} `{value}`")]
    Unknown { what: &'static str, value: String },
    #[error("failed to parse scenario: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("trace lengths differ: {estimates} estimates vs {truth} ground-truth samples")]
    Alignment { estimates: usize, truth: usize },
}

impl ConfigError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid { name, reason: reason.into() }
    }
}
