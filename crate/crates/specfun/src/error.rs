use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("parameter b = {0} is a pole of M(a; b; z)")]
    Pole(f64),
    #[error("overflow evaluating {what} at z = {z}")]
    Overflow { what: &'static str, z: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series or quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("parameter out of validated range: {0}")]
    Parameter(String),
}
