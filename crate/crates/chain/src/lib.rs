//! Monte Carlo for the discrete semiflexible chain in the half-plane:
//! Gibbs angle increments, the energy-minimising wall clamp, seeded
//! ensembles and histogram estimators comparable with the kinetic solver.

mod deviation;
mod ensemble;
mod error;
mod fields;
mod gibbs;
mod step;

pub use deviation::{fit_exponent, wall_deviation, DeviationSample};
pub use ensemble::{chain_rng, simulate_ensemble, simulate_from, ChainEnsemble, InitialSampler};
pub use error::ChainError;
pub use fields::{
    classify, empirical_fields, empirical_reduced, BinClass, BinCounts, EmpiricalFields, EmpiricalReduced, TrapBands,
};
pub use gibbs::{estimate_diffusion, gibbs_angle_increment, DiffusionEstimate, GibbsTable, TABLE_POINTS};
pub use step::{boundary_rule, chain_step, chain_step_with, ChainParams, ChainState, TrapSide};

pub type Result<T> = std::result::Result<T, ChainError>;
