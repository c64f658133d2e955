//! Forward adjoint problems for the trapped kinetic equation: the jump
//! operator `Q^ε`, the κ-regularised wall closure, reduced and full
//! time-steppers, the resolvent and the duality pairing.

mod boundary;
mod certify;
mod duality;
mod error;
mod kernel;
mod random;
mod resolvent;
mod solver;

pub use boundary::{boundary_value_full, boundary_value_reduced, chi_kappa, AdjointData};
pub use certify::{write_json_lines, Certificate};
pub use duality::{duality_check, pairing, DualityReport};
pub use error::AdjointError;
pub use kernel::{apply_qeps_fn, make_zeta, JumpKernel, JumpStencil};
pub use random::{data_norms, SmoothData};
pub use resolvent::{resolvent, Resolvent, DEFAULT_TAIL_TOL};
pub use solver::{
    solve_adjoint_full, solve_adjoint_reduced, AdjointField, AdjointParams, AdjointRun, AngularOp, FullAdjoint,
    ReducedAdjoint, TopBoundary,
};

pub type Result<T> = std::result::Result<T, AdjointError>;

/// `Q^ε` applied along θ to every column of a field.
pub fn apply_qeps(field: &AdjointField, kernel: &JumpKernel) -> Result<AdjointField> {
    let nt = field.grid.n_theta;
    let st = JumpStencil::new(kernel, field.epsilon_jump, nt)?;
    let mut out = field.clone();
    for (src, dst) in field.values.chunks(nt).zip(out.values.chunks_mut(nt)) {
        st.apply_column(src, dst);
    }
    Ok(out)
}
