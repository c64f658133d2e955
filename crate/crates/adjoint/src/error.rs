use polykin_core::CoreError;
use polykin_kinetic::KineticError;

#[derive(Debug, thiserror::Error)]
pub enum AdjointError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Kinetic(#[from] KineticError),
    #[error("explicit jump step dt = {dt} exceeds the stability bound eps^2/4 = {bound}")]
    StepTooLarge { dt: f64, bound: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("boundary quadrature did not converge at t = {t}, x1 = {x1}, theta = {theta}")]
    Quadrature { t: f64, x1: f64, theta: f64 },
    #[error("horizon T = {horizon} too short: exp(-T/lambda) = {tail} above {tol}")]
    Horizon { horizon: f64, tail: f64, tol: f64 },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}
