//! Shared phase-space geometry for the half-plane polymer model.
//!
//! Phase space is `(x1, x2, θ)` with `x2 ≥ 0` the distance from the wall and
//! `θ ∈ [−π, π)` the monomer orientation. Every solver in the workspace works
//! on the tensor grid described by [`GridSpec`]: cell-centred in `x1` and
//! `x2`, node-centred in `θ` so that `0`, `−π/2` and `−π` are grid nodes.

mod angle;
mod error;
mod field;
mod grid;
mod ledger;
pub mod tridiag;

pub use angle::{wrap_angle, Angle, PhasePoint};
pub use error::CoreError;
pub use field::{BoundaryDensityPair, Integrate, PhaseField, ReducedField};
pub use grid::GridSpec;
pub use ledger::{make_ledger, MassLedger};

pub type Result<T> = std::result::Result<T, CoreError>;
