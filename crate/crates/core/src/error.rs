use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("theta = {0} is outside [0, pi]")]
    ThetaOutOfRange(f64),
    #[error("phi = {0} is outside [0, 2pi]")]
    PhiOutOfRange(f64),
    #[error("invalid pulse configuration: {0}")]
    InvalidPulse(String),
    #[error("scaled time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
    #[error("Bloch vector norm {0} exceeds 1; state is unphysical")]
    Unphysical(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid ODE settings: {0}")]
    InvalidSettings(String),
    #[error("ODE state became non-finite at tau = {0}; reduce the step size")]
    NonFinite(f64),
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
