//! One function per experiment; each returns a report whose checks carry
//! the criterion number, the threshold and where the threshold comes from.

mod certificates;
mod duality;
mod holder;
mod kinetic;
mod mc;
mod specfun;
mod stationary;

use std::path::Path;

use crate::{Experiment, ExperimentReport, Result, RunConfig};

pub use certificates::adjoint_certificates;
pub use duality::{duality, duality_test_function};
pub use holder::holder_suite;
pub use kinetic::{long_chain, mass_balance};
pub use mc::{block_l1, flagged_reduced, mc_vs_pde};
pub use specfun::specfun_suite;
pub use stationary::stationary_suite;

pub fn execute(config: &RunConfig, dir: &Path) -> Result<ExperimentReport> {
    match config.experiment.name {
        Experiment::MassBalance => mass_balance(config, dir),
        Experiment::McVsPde => mc_vs_pde(config, dir),
        Experiment::Duality => duality(config, dir),
        Experiment::LongChain => long_chain(config, dir),
        Experiment::StationarySuite => stationary_suite(config, dir),
        Experiment::HolderSuite => holder_suite(config, dir),
        Experiment::AdjointCertificates => adjoint_certificates(config, dir),
        Experiment::SpecfunSuite => specfun_suite(config, dir),
    }
}
