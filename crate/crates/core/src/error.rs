use thiserror::Error;

/// Errors raised by the constellation models and optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("coverage angle {beta_deg:.6} deg exceeds the geometric maximum at altitude {altitude_m:.3} m")]
    CoverageAngleTooWide { beta_deg: f64, altitude_m: f64 },

    #[error("degenerate link geometry: maximum range {max_range_m} m does not exceed altitude {altitude_m} m")]
    DegenerateGeometry { max_range_m: f64, altitude_m: f64 },

    #[error("zero spectral efficiency: no capacity can be delivered")]
    InfeasibleCapacity,

    #[error("selection pool holds {available} members but {requested} are required")]
    PoolTooSmall { available: usize, requested: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
