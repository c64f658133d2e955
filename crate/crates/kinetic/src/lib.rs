//! Forward solver for the trapping kinetic problem and its `x1`-reduced form.
//!
//! One step is `transport → absorb → θ-diffusion → ρ± transport`. Transport is
//! an exact-shift remap of cell averages (each cell moves by `dt(cosθ, sinθ)`
//! and its mass is split over the at most four cells it overlaps), so mass is
//! conserved exactly and values stay nonnegative. The wall `x2 = 0` is the
//! lower face of the first row: whatever crosses it is handed to ρ+ or ρ−.

mod error;
mod init;
mod reduced;
mod step;
mod weak;

pub use error::KineticError;
pub use init::{init_state, InitShape, InitSpec};
pub use reduced::{advance_reduced, ReducedState};
pub use step::{
    absorb_boundary, advance, theta_diffusion_substep, transport_rho_pm, transport_substep,
    KineticState, Outflow,
};
pub use weak::{weak_residual, TestFunction, WeakResidual};

pub type Result<T> = std::result::Result<T, KineticError>;
