//! Manufactured-solution verification and observed convergence orders.

mod convergence;
mod mms;

pub use convergence::{
    convergence_order, mms_errors, run_convergence_study, solve_mms, ConvergenceRow, ConvergenceTable, FIELD_NAMES,
};
pub use mms::{standard_mms_case, MmsCase, RationalField};
