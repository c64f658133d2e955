use polykin_core::CoreError;

#[derive(Debug, thiserror::Error)]
pub enum KineticError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("time step {dt} exceeds the remap bound min(dx1, dx2) = {bound}")]
    Cfl { dt: f64, bound: f64 },
    #[error("invalid initial condition: {0}")]
    Initial(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("empty trajectory")]
    EmptyTrajectory,
}
