//! Special functions and analytic comparison profiles.
//!
//! [`kummer_m`] and [`tricomi_u`] are real-valued confluent hypergeometric
//! functions. The profiles built on them are exact or approximate solutions
//! of the kinetic operator near the grazing point `(x2, θ) = (0, 0)` and in
//! the far field; each profile ships with a residual evaluator so callers can
//! verify the sign conditions they rely on.

mod error;
mod gamma;
mod hyper;
mod profiles;
mod quad;

pub use profiles::{
    f0_selfsim, f0_selfsim_partials, find_t_star, fstar0, fstar0_residual, hat_f0,
    hat_f0_residual, lambda_derivs, lambda_profile, parabolic_subsol_V, stationary_supersol_F,
    stationary_supersol_residual, subsol_residual, subsol_shape, F0Partials, HatF0,
    HolderParams, SupersolutionParams, DEFAULT_CORRECTION, DEFAULT_VALIDITY_BOUND,
};

pub use error::SpecfunError;
pub use gamma::{gamma, rgamma};
pub use hyper::{kummer_m, kummer_m_deriv, tricomi_u, tricomi_u_deriv};


pub type Result<T> = std::result::Result<T, SpecfunError>;
