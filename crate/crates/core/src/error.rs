use thiserror::Error;

/// Errors raised by the planning and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("distance {distance_m} m is outside the coverage radius {radius_m} m")]
    OutOfCoverage { distance_m: f64, radius_m: f64 },

    #[error("required transmit power {required_dbm:.3} dBm exceeds the {max_dbm} dBm limit")]
    InfeasiblePower { required_dbm: f64, max_dbm: f64 },

    #[error(
        "radius {radius_m} m is infeasible: disconnection at the cell edge is {h0:.6} \
         which is not below the total outage target {target}"
    )]
    InfeasibleRadius { radius_m: f64, h0: f64, target: f64 },

    #[error("infeasible outage targets: {0}")]
    InfeasibleTargets(String),

    #[error("trial budget {trials} is below the minimum of {min}")]
    TrialBudget { trials: u64, min: u64 },
}

impl Error {
    /// Stable machine-readable identifier, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::OutOfCoverage { .. } => "out-of-coverage",
            Error::InfeasiblePower { .. } => "infeasible-power",
            Error::InfeasibleRadius { .. } => "infeasible-radius",
            Error::InfeasibleTargets(_) => "infeasible-targets",
            Error::TrialBudget { .. } => "trial-budget",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {x}")))
    }
}

pub(crate) fn ensure_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {x}")))
    }
}

pub(crate) fn ensure_probability(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {x}")))
    }
}
