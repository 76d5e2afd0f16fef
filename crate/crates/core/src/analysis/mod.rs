//! Manufactured solution, error functionals and convergence bookkeeping.

mod manufactured;
mod norms;
mod rates;
mod report;

pub use manufactured::{manufactured, ManufacturedSolution};
pub use norms::{
    discrete_max, energy_error, energy_parts, j_seminorm, l2_error, EnergyParts, EnergyVariant, NormConfig,
};
pub use rates::convergence_rates;
pub use report::{ConvergenceReport, ErrorColumn, LevelFailure, LevelRecord};
